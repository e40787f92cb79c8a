#pragma once

#include <cstdint>
#include <vector>

#include "blockfade/spectra.hpp"

namespace blockfade {

struct SimConfig {
  const SpectralModel* model = nullptr;
  int num_paths = 1000;
  int path_len = 0;  // symbols, a multiple of T
  std::uint64_t seed = 1;
  double snr = 1.0;
  Exec exec = Exec::parallel;
};

struct PathSamples {
  CMatrix h;  // num_paths x path_len fading samples
  CMatrix y;  // h + z / sqrt(snr)
  double regularization = 0.0;  // eigenvalue clamp applied to the window covariance
};

// Exact finite-window Gaussian law. Path p draws from its own generator seeded
// by (seed, p), so the samples do not depend on the worker count.
PathSamples generate_paths(const SimConfig& cfg);

struct EmpiricalVariance {
  std::vector<double> mean;    // per block position
  std::vector<double> stderr_;
  std::vector<double> analytic;
};

// Squared error of the analytic finite-history MMSE predictor of y at each
// position of the final block, from the history_len preceding noisy symbols.
EmpiricalVariance empirical_prediction_variance(const SimConfig& cfg, int history_len);

struct PilotEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double analytic = 0.0;
};

// Squared error of the MMSE estimate of h_target from noisy samples at
// `pilots`, all indices within [0, path_len).
PilotEstimate empirical_pilot_variance(const SimConfig& cfg, long target, const std::vector<long>& pilots);

}  // namespace blockfade
