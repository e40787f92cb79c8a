#pragma once

#include <string>
#include <vector>

#include "blockfade/prediction.hpp"
#include "blockfade/spectra.hpp"

namespace blockfade {

// -log(v + 8/(5 snr)) + log(1 - v) - gamma - log(5e/6), for v in [0, 1).
double lemma2_lower(double snr, double var_tilde);

// E log(1 + snr |h|^2), h ~ CN(0,1): e^{1/snr} E1(1/snr).
double coherent_memoryless(double snr);
// Upper bound on the peak-limited memoryless noncoherent Rayleigh capacity:
// min of the coherent bound and the max-entropy bound on log|y|^2, which
// grows like log log snr.
double memoryless_upper(double snr);

struct BoundValue {
  double value = 0.0;
  std::vector<double> per_symbol;
  std::vector<std::string> flags;
};

// Lower bound with the annulus input |x| in [sqrt(snr)/2, sqrt(snr)] and the
// channel predicted from noisy pilots at amplitude x_min. T = 1 uses the exact
// infinite past; T > 1 conditions on history_len symbols. Negative or vacuous
// per-symbol terms are clamped to 0 and flagged.
BoundValue capacity_lower(const SpectralModel& model, double snr, double x_min, int history_len,
                          const QuadOptions& opts = {});

// Side-information upper bound: log((1+snr)/snr) - (1/T) logdet_sigma(snr) +
// memoryless_upper(snr). Per-symbol terms use history_len when T > 1.
BoundValue capacity_upper(const SpectralModel& model, double snr, int history_len,
                          const QuadOptions& opts = {});

// Class bound for spectra vanishing on measure alpha, clamped at 0.
double universal_lower(double alpha, double snr, double x_min);

struct BoundPoint {
  double snr = 0.0;
  double x_min = 0.0;
  BoundValue lower;
  BoundValue upper;
};

BoundPoint bound_point(const SpectralModel& model, double snr, double x_min, int history_len,
                       const QuadOptions& opts = {});

}  // namespace blockfade
