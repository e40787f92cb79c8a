#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blockfade/common.hpp"
#include "blockfade/spectra.hpp"

namespace blockfade {

struct Arc {
  double center;
  double half_width;
};

// Disjoint closed arcs of the unit circle; total measure in (0, 2pi].
class ArcSet {
 public:
  explicit ArcSet(std::vector<Arc> arcs);
  // "center:angle[,center:angle...]" with the full central angle of each arc.
  static ArcSet parse(const std::string& text);

  const std::vector<Arc>& arcs() const { return arcs_; }
  double measure() const;
  bool contains(const ArcSet& other, double tol = 1e-12) const;
  std::string to_string() const;

 private:
  std::vector<Arc> arcs_;  // sorted by center in [-pi, pi)
};

// sin(theta / 4) for an arc of central angle theta in (0, 2pi].
double tau_arc(double theta);

struct FeketeOptions {
  int restarts = 8;
  int max_sweeps = 4000;
  double tol = 1e-12;  // log-Vandermonde improvement per sweep
  std::uint64_t seed = 0x5eed;
  Exec exec = Exec::parallel;
};

struct FeketeResult {
  int n = 0;
  double tau_n = 0.0;
  double log_v = 0.0;  // sum_{j<k} log|z_j - z_k|
  std::vector<double> points;  // angles
  bool converged = false;
  int restarts = 0;
};

// Maximizes the Vandermonde product of n points on the arcs by exact
// coordinate ascent. Restart 0 starts from Chebyshev nodes; the rest are
// random with a seed per restart.
FeketeResult tau_fekete(const ArcSet& set, int n, const FeketeOptions& opts = {});

struct FeketeLadder {
  std::vector<FeketeResult> steps;  // n = 2..n_max
  bool monotone = false;            // tau_n nonincreasing within 1e-9
  // Least-squares fit of log tau_n = log tau + (a log n + b)/(n - 1) over
  // n >= n_max/2; empty with fewer than 4 such steps. tau_n itself carries an
  // O(log n / n) excess (n^{1/(n-1)} on the full circle).
  std::optional<double> tau_limit;
};
FeketeLadder fekete_ladder(const ArcSet& set, int n_max, const FeketeOptions& opts = {});

// r (1 - Pe) / (-log tau); liminf of blocklength over log snr.
double scaling_lower_bound(double r, double pe, double tau);

// Closure of {omega : s(omega) > 0} as arcs.
ArcSet support_arcs(const ScalarPiecewiseSpectrum& spec);

struct DecayFit {
  double rate = 0.0;         // exp of the least-squares slope of log var_n
  int reliable_n = 0;
  double support_tau = 0.0;  // closed form for one arc, Fekete estimate otherwise
  std::optional<double> log_ratio;  // log rate / log support_tau; empty when tau = 1
  std::vector<int> n_used;
  std::vector<double> var;   // var_n for n in n_used
};

// Geometric decay of the noiseless one-step prediction error over n_ladder,
// restricted to the extended-precision reliable prefix.
DecayFit prediction_decay_rate(const ScalarPiecewiseSpectrum& spec, const std::vector<int>& n_ladder);

struct Exponent {
  double value = 0.0;
  bool above_capacity = false;
  double rho = 0.0;  // maximizer, Rayleigh only
};

// Gaussian-input random-coding exponent of the AWGN channel with capacity
// log(1 + snr), average power constraint.
Exponent awgn_exponent(double rate, double snr);
// Critical rate log[1/2 + snr/4 + sqrt(1 + snr^2/4)/2] between the two branches.
double awgn_critical_rate(double snr);

// max over rho in [0,1] of -log E(1 + snr |h|^2/(1+rho))^{-rho} - rho R, h ~ CN(0,1).
Exponent rayleigh_exponent(double rate, double snr, double rel_tol = 1e-10);
double rayleigh_inner(double rho, double snr, double rel_tol = 1e-10);

}  // namespace blockfade
