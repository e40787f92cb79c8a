#pragma once

#include <string>
#include <vector>

#include "blockfade/quadrature.hpp"
#include "blockfade/spectra.hpp"

namespace blockfade {

inline constexpr int kMaxScanT = 20;
inline constexpr double kTieTol = 1e-9;

// Bit k of a subset mask selects block position k + 1.
std::string subset_label(unsigned mask);  // "{1,2}"
unsigned parse_subset(const std::string& text, int T);  // "1,2" or "{1,2}"

// (1/|M|) integral over [-pi, pi] of log det[I + snr S_M].
double psi(const SpectralModel& model, unsigned mask, double snr, const QuadOptions& opts = {});

struct SubsetEntry {
  unsigned mask;
  double psi;
};

struct SubsetScan {
  double snr = 0.0;
  std::vector<SubsetEntry> entries;  // ascending mask order
  std::vector<unsigned> argmin;      // every subset within kTieTol of the minimum
  double cp = 0.0;
  bool szasz_symmetric = false;
};

// Equal diagonal and equal off-diagonal entries of S on a probe grid; then the
// full set is optimal at every SNR.
bool szasz_symmetric(const SpectralModel& model);

SubsetScan cp_scan(const SpectralModel& model, double snr, const QuadOptions& opts = {});
// 1 - Psi(full)/(2 pi snr); no subset enumeration, any T.
double cp_full_set(const SpectralModel& model, double snr, const QuadOptions& opts = {});

double cp_block_indep_constant(int T, double snr);
double cp_block_gauss_markov(int T, double snr, cplx rho);

// High-SNR form: 1 - min_M sum_i i mu(rank S_M = i) log snr / (2 pi |M| snr).
double cp_high_asymptote(const SpectralModel& model, double snr);
// Low-SNR form: (snr / 4 pi) max_M (1/|M|) integral tr S_M^2.
double cp_low_asymptote(const SpectralModel& model, double snr, const QuadOptions& opts = {});
// Subsets attaining the extremum of each asymptotic criterion.
std::vector<unsigned> high_snr_optimal_subsets(const SpectralModel& model, double snr);
std::vector<unsigned> low_snr_optimal_subsets(const SpectralModel& model,
                                              const QuadOptions& opts = {});

struct Crossover {
  double snr;
  double bracket_lo;
  double bracket_hi;
};

// Every sign change of Psi(m1) - Psi(m2) on [lo, hi], refined by geometric
// bisection until the bracket is narrower than snr_tol.
std::vector<Crossover> cp_crossover(const SpectralModel& model, unsigned m1, unsigned m2,
                                    double lo = 1e-6, double hi = 1e8, double snr_tol = 1e-9,
                                    const QuadOptions& opts = {});

// T = 3 block-independent model with R(0) rows [1, 1, rho*; 1, 1, rho*; rho, rho, 1].
SpectralModel example5_model(cplx rho);
// Closed-form switch point (2|rho| - 1) / (2 (1 - |rho|)^2), for 1/2 < |rho| < 1.
double example5_crossover(double rho_abs);

}  // namespace blockfade
