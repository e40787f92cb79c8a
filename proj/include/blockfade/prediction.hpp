#pragma once

#include <optional>
#include <vector>

#include "blockfade/quadrature.hpp"
#include "blockfade/spectra.hpp"

namespace blockfade {

// (1/2pi) integral of log det[S + I/snr]; snr = kInf gives log det Sigma(inf),
// which is -inf when S is singular on a set of positive measure.
QuadResult logdet_sigma(const SpectralModel& model, double snr, const QuadOptions& opts = {});

struct PredictionSummary {
  double logdet_sigma_snr = 0.0;
  double logdet_error = 0.0;
  std::optional<double> logdet_sigma_inf;  // empty if the quadrature failed
  std::vector<double> sigmas;
  std::vector<double> sigmas_extrapolated;  // from histories n and 2n, if requested
  int history_len = 0;
  double quadrature_tol = 0.0;
  double ldl_gap = 0.0;  // |sum log sigma_i - logdet_sigma_snr|
  bool convergence_warning = false;
  double regularization = 0.0;  // diagonal jitter added to reach a factorization
};

struct SigmaOptions {
  QuadOptions quad;
  Exec exec = Exec::parallel;
  bool extrapolate = false;
};

// sigma_i = var(y_i | the history_len preceding noisy symbols), y = h + z/sqrt(snr),
// for each block position i, by a dense solve on the window covariance.
PredictionSummary per_symbol_sigmas(const SpectralModel& model, double snr, int history_len,
                                    const SigmaOptions& opts = {});
PredictionSummary per_symbol_sigmas(const CorrelationSequence& corr, double snr, int history_len,
                                    const SigmaOptions& opts = {});

// var(h_target | {h_j + z_j/sqrt(snr) : j in pilots}); indices are absolute
// symbol positions (block = index / T). snr = kInf conditions on noiseless h_j.
double conditional_mmse_variance(const SpectralModel& model, long target,
                                 const std::vector<long>& pilots, double snr);

// exp{(1/2pi) integral log[s + 1/x^2]} - 1/x^2, exact segment sum.
double scalar_noisy_prediction_variance(const ScalarPiecewiseSpectrum& spec, double x_min);

// Covariance of h over `count` consecutive symbols starting at absolute index
// `first`, plus `noise` on the diagonal.
CMatrix window_covariance(const SpectralModel& model, long first, int count, double noise);

struct NoiselessLadder {
  std::vector<double> var;  // var[n] = var(h_0 | h_{-1..-n})
  int reliable_n = 0;       // largest n kept by the conditioning monitor
  int digits = 0;
};

// Pivots of the Toeplitz LDL factorization in extended precision. The ladder
// stops once var_0/var_n exceeds `ratio_cap` or n reaches n_max.
NoiselessLadder noiseless_prediction_ladder(const ScalarPiecewiseSpectrum& spec, int n_max,
                                            double ratio_cap = 1e20, int digits = 50);

}  // namespace blockfade
