#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "blockfade/common.hpp"
#include "blockfade/quadrature.hpp"

namespace blockfade {

inline constexpr double kPsdTol = 1e-8;
inline constexpr int kValidationGrid = 2048;

struct Segment {
  double lo;
  double hi;
  double level;
};

// Even scalar spectrum, stored on [0, pi] and mirrored. Normalized so that
// (1/2pi) * integral over [-pi, pi] equals 1.
class ScalarPiecewiseSpectrum {
 public:
  explicit ScalarPiecewiseSpectrum(std::vector<Segment> segments, double norm_tol = 1e-12);

  const std::vector<Segment>& segments() const { return segments_; }
  double operator()(double omega) const;

  // Measure of {omega in [-pi, pi] : s = 0}.
  double zero_measure() const;
  // (1/2pi) integral log(s + noise); -inf when noise = 0 and s vanishes on a set
  // of positive measure.
  double mean_log(double noise) const;
  // Fourier coefficient r(k) = (1/2pi) integral s e^{j omega k}; real by symmetry.
  double fourier(int k) const;
  // Segment edges mirrored onto (-pi, pi).
  std::vector<double> breakpoints() const;

 private:
  std::vector<Segment> segments_;
};

ScalarPiecewiseSpectrum flat_spectrum();
// Three-level family: 0, 1/theta and a spike near pi; requires theta >= theta0(alpha).
double s_theta_threshold(double alpha);
ScalarPiecewiseSpectrum s_theta_family(double alpha, double theta);
// eps1 on [0, pi a1], eps2 on (pi a1, pi a2], remainder-normalized level above.
ScalarPiecewiseSpectrum two_level_spectrum(double eps1, double eps2, double a1, double a2);

// Block correlation R(i) = E h_k h_{k-i}^dagger for i = 0..max_lag; negative
// lags are R(i)^dagger and never stored.
class CorrelationSequence {
 public:
  CorrelationSequence(int T, std::vector<CMatrix> lags, double tol = kPsdTol);

  int T() const { return T_; }
  int max_lag() const { return static_cast<int>(lags_.size()) - 1; }
  const std::vector<CMatrix>& lags() const { return lags_; }
  // Any integer lag; zero beyond max_lag.
  CMatrix at(int i) const;

 private:
  int T_;
  std::vector<CMatrix> lags_;
};

CorrelationSequence block_gauss_markov_correlation(int T, cplx rho1, cplx rho2, int max_lag);

class SpectralModel;

namespace kind {
struct TruncatedFourier {
  CorrelationSequence corr;
};
// Scalar Gauss-Markov is the T = 1, rho1 = rho2 case.
struct BlockGaussMarkov {
  int T;
  cplx rho1;
  cplx rho2;
};
struct ConstantWithinBlock {
  int T;
  std::shared_ptr<const SpectralModel> base;  // T = 1
};
struct Scalar {
  ScalarPiecewiseSpectrum spec;
};
// Step function: mats[k] holds on [omegas[k], omegas[k+1]), omegas[0] = -pi.
struct ExplicitGrid {
  int T;
  std::vector<double> omegas;
  std::vector<CMatrix> mats;
};
}  // namespace kind

class SpectralModel {
 public:
  using Kind = std::variant<kind::TruncatedFourier, kind::BlockGaussMarkov,
                            kind::ConstantWithinBlock, kind::Scalar, kind::ExplicitGrid>;

  static SpectralModel from_correlation(CorrelationSequence corr, double psd_tol = kPsdTol);
  static SpectralModel scalar_gauss_markov(cplx rho);
  static SpectralModel block_gauss_markov(int T, cplx rho1, cplx rho2);
  static SpectralModel constant_within_block(int T, const SpectralModel& base);
  static SpectralModel scalar(ScalarPiecewiseSpectrum spec);
  static SpectralModel explicit_grid(int T, std::vector<double> omegas, std::vector<CMatrix> mats,
                                     double psd_tol = kPsdTol);

  int T() const { return T_; }
  const Kind& kind() const { return kind_; }
  std::string kind_name() const;

  // S(e^{j omega}) for omega in [-pi, pi].
  CMatrix eval(double omega) const;
  // R(i) for any integer i.
  CMatrix correlation(int lag) const;

  // True when S is constant between breakpoints, so integrals are exact sums.
  bool piecewise_constant() const;
  // Points in (-pi, pi) where S may be discontinuous.
  std::vector<double> breakpoints() const;
  // Underlying scalar piecewise spectrum for scalar and constant-within-block
  // models built on one, else nullptr.
  const ScalarPiecewiseSpectrum* scalar_piecewise() const;

 private:
  SpectralModel(int T, Kind k) : T_(T), kind_(std::move(k)) {}
  void validate(double psd_tol) const;

  int T_;
  Kind kind_;
};

// Integral over [-pi, pi] of g(S(omega)); exact segment sums for
// piecewise-constant models, adaptive quadrature otherwise.
QuadResult integrate_spectrum(const SpectralModel& model,
                              const std::function<double(const CMatrix&)>& g,
                              const QuadOptions& opts);

// Principal submatrix on the index set encoded by the bitmask.
CMatrix principal_minor(const CMatrix& a, unsigned mask);

}  // namespace blockfade
