#pragma once

#include <optional>
#include <vector>

#include "blockfade/prediction.hpp"
#include "blockfade/spectra.hpp"

namespace blockfade {

struct RankProfile {
  std::vector<double> mu;  // mu[i] = measure of {omega : rank = i}, i = 0..size
  double functional = 0.0;  // sum (size - i) mu_i / (2 pi size)
  int ambiguous = 0;        // grid points with an eigenvalue within 10x of the threshold
  int grid_size = 0;
};

inline constexpr int kRankGrid = 4096;
inline constexpr double kRankThreshold = 1e-10;

// Rank profile of the principal minor selected by `mask` on a midpoint grid.
// Rank counts eigenvalues above threshold * (largest eigenvalue on the grid).
RankProfile rank_profile(const SpectralModel& model, unsigned mask, int grid_size = kRankGrid,
                         double eig_threshold = kRankThreshold, Exec exec = Exec::parallel);
RankProfile rank_measure_functional(const SpectralModel& model, int grid_size = kRankGrid,
                                    double eig_threshold = kRankThreshold,
                                    Exec exec = Exec::parallel);

std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> default_prelog_grid();  // 1e4 .. 1e12

// Least-squares slope of -logdet_sigma(model, snr) against T log snr.
double prelog_slope(const SpectralModel& model, const std::vector<double>& snr_grid,
                    const QuadOptions& opts = {});

struct PrelogReport {
  double prelog_rank = 0.0;
  double prelog_slope = 0.0;
  std::vector<double> rank_measures;
  std::vector<double> snr_grid;
  int ambiguous = 0;
  bool disagreement = false;  // |rank - slope| > 0.05
};

PrelogReport prelog_report(const SpectralModel& model, const std::vector<double>& snr_grid,
                           int grid_size = kRankGrid, double eig_threshold = kRankThreshold,
                           const QuadOptions& opts = {});

// -1 - gamma - (1/T) log det Sigma(inf); requires a regular process.
double fading_number(const SpectralModel& model, const QuadOptions& opts = {});

// Level 2pi/(2pi - alpha) off a zero set of measure alpha.
ScalarPiecewiseSpectrum worst_case_spectrum(double alpha);
double phi(double alpha, double x_min);

struct KappaC {
  double kappa = 0.0;
  std::optional<double> c;  // undefined at r = 0
};
KappaC kappa_c(double alpha, double r);

struct TwoLevelPoint {
  double snr;
  double lower;
  double upper;
};

// Closed-form infinite-past variance of the two-level spectrum at noise level
// `noise` (variance of the additive observation noise).
double two_level_variance(double eps1, double eps2, double a1, double a2, double noise);
std::vector<TwoLevelPoint> two_level_bounds(double eps1, double eps2, double a1, double a2,
                                            const std::vector<double>& snr_grid);

}  // namespace blockfade
