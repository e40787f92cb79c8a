#include "blockfade/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace blockfade {

namespace {

constexpr double kSnapTol = 1e-6;

bool is_zero(cplx z) { return z == cplx(0.0, 0.0); }

}  // namespace

double hermitian_logdet(const CMatrix& a) {
  if (a.rows() == 1) return std::log(std::max(a(0, 0).real(), 1e-300));
  Eigen::LLT<CMatrix> llt(a);
  if (llt.info() == Eigen::Success) {
    const CMatrix& l = llt.matrixLLT();
    double s = 0.0;
    bool ok = true;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double d = l(i, i).real();
      if (!(d > 0.0)) {
        ok = false;
        break;
      }
      s += 2.0 * std::log(d);
    }
    if (ok && std::isfinite(s)) return s;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) s += std::log(std::max(es.eigenvalues()(i), 1e-300));
  return s;
}

// ---------------------------------------------------------------------------
// ScalarPiecewiseSpectrum

ScalarPiecewiseSpectrum::ScalarPiecewiseSpectrum(std::vector<Segment> segments, double norm_tol) {
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.lo < y.lo; });
  double edge = 0.0;
  for (auto s : segments) {
    if (!(s.level >= 0.0) || !std::isfinite(s.level))
      throw HypothesisViolation("piecewise spectrum: levels must be finite and nonnegative");
    if (std::abs(s.lo - edge) > kSnapTol)
      throw HypothesisViolation("piecewise spectrum: segments must tile [0, pi] without gaps");
    s.lo = edge;
    if (std::abs(s.hi - kPi) <= kSnapTol) s.hi = kPi;
    if (s.hi < s.lo) throw HypothesisViolation("piecewise spectrum: segment with hi < lo");
    edge = s.hi;
    if (s.hi > s.lo) segments_.push_back(s);
  }
  if (segments_.empty() || edge != kPi)
    throw HypothesisViolation("piecewise spectrum: segments must tile [0, pi]");
  double mass = 0.0;
  for (const auto& s : segments_) mass += s.level * (s.hi - s.lo);
  mass /= kPi;
  if (std::abs(mass - 1.0) > norm_tol) {
    std::ostringstream msg;
    msg.precision(15);
    msg << "piecewise spectrum: (1/2pi) integral of s is " << mass
        << ", unit-variance fading requires 1";
    throw HypothesisViolation(msg.str());
  }
}

double ScalarPiecewiseSpectrum::operator()(double omega) const {
  const double x = std::min(std::abs(omega), kPi);
  auto it = std::lower_bound(segments_.begin(), segments_.end(), x,
                             [](const Segment& s, double v) { return s.hi < v; });
  if (it == segments_.end()) --it;
  return it->level;
}

double ScalarPiecewiseSpectrum::zero_measure() const {
  double m = 0.0;
  for (const auto& s : segments_)
    if (s.level == 0.0) m += s.hi - s.lo;
  return 2.0 * m;
}

double ScalarPiecewiseSpectrum::mean_log(double noise) const {
  double acc = 0.0;
  for (const auto& s : segments_) {
    const double v = s.level + noise;
    if (v <= 0.0) return -kInf;
    acc += (s.hi - s.lo) * std::log(v);
  }
  return acc / kPi;
}

double ScalarPiecewiseSpectrum::fourier(int k) const {
  double acc = 0.0;
  if (k == 0) {
    for (const auto& s : segments_) acc += s.level * (s.hi - s.lo);
    return acc / kPi;
  }
  const double kk = static_cast<double>(std::abs(k));
  for (const auto& s : segments_) acc += s.level * (std::sin(kk * s.hi) - std::sin(kk * s.lo));
  return acc / (kPi * kk);
}

std::vector<double> ScalarPiecewiseSpectrum::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    out.push_back(-segments_[i].hi);
    out.push_back(segments_[i].hi);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ScalarPiecewiseSpectrum flat_spectrum() { return ScalarPiecewiseSpectrum({{0.0, kPi, 1.0}}); }

double s_theta_threshold(double alpha) {
  const double a = kTwoPi - alpha;
  if (a * a < 8.0 * kPi) return 1.0 / a;
  return (a + std::sqrt(a * a - 8.0 * kPi)) / (4.0 * kPi);
}

ScalarPiecewiseSpectrum s_theta_family(double alpha, double theta) {
  if (!(alpha >= 0.0 && alpha < kTwoPi)) throw InvalidParameter("s_theta: alpha must lie in [0, 2pi)");
  const double theta0 = s_theta_threshold(alpha);
  if (!(theta >= theta0 * (1.0 - 1e-15))) {
    std::ostringstream msg;
    msg << "s_theta: theta must be >= theta0 = " << theta0;
    throw InvalidParameter(msg.str());
  }
  const double edge = std::max(alpha / 2.0, kPi - 1.0 / (2.0 * theta));
  const double spike =
      (kTwoPi * theta * theta - kTwoPi * theta + alpha * theta + 1.0) / theta;
  return ScalarPiecewiseSpectrum({{0.0, alpha / 2.0, 0.0},
                                  {alpha / 2.0, edge, 1.0 / theta},
                                  {edge, kPi, std::max(spike, 0.0)}},
                                 1e-10);
}

ScalarPiecewiseSpectrum two_level_spectrum(double eps1, double eps2, double a1, double a2) {
  if (!(0.0 < a1 && a1 < a2 && a2 < 1.0))
    throw InvalidParameter("two-level spectrum: need 0 < alpha1 < alpha2 < 1");
  const double top = (1.0 - a1 * eps1 - (a2 - a1) * eps2) / (1.0 - a2);
  if (!(0.0 <= eps1 && eps1 <= eps2 && eps2 <= top))
    throw InvalidParameter("two-level spectrum: need 0 <= eps1 <= eps2 <= top level");
  return ScalarPiecewiseSpectrum(
      {{0.0, kPi * a1, eps1}, {kPi * a1, kPi * a2, eps2}, {kPi * a2, kPi, top}}, 1e-10);
}

// ---------------------------------------------------------------------------
// CorrelationSequence

CorrelationSequence::CorrelationSequence(int T, std::vector<CMatrix> lags, double tol)
    : T_(T), lags_(std::move(lags)) {
  if (T < 1) throw InvalidParameter("correlation: T must be positive");
  if (lags_.empty()) throw InvalidParameter("correlation: R(0) is required");
  for (const auto& r : lags_)
    if (r.rows() != T || r.cols() != T)
      throw InvalidParameter("correlation: every R(i) must be T x T");
  const CMatrix& r0 = lags_[0];
  if ((r0 - r0.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw HypothesisViolation("correlation: R(0) must be Hermitian");
  for (int k = 0; k < T; ++k)
    if (std::abs(r0(k, k) - 1.0) > 1e-9)
      throw HypothesisViolation("correlation: R(0) must have unit diagonal (h_t ~ CN(0,1))");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(r0, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < -tol)
    throw HypothesisViolation("correlation: R(0) must be positive semidefinite");
  // Cross-covariances of unit-variance vectors: entries at most 1 and
  // ||R(i)|| <= lambda_max(R(0)), which is 1 only when T = 1.
  const double lmax = es.eigenvalues()(T - 1);
  for (std::size_t i = 1; i < lags_.size(); ++i) {
    Eigen::JacobiSVD<CMatrix> svd(lags_[i]);
    if (lags_[i].cwiseAbs().maxCoeff() > 1.0 + tol || svd.singularValues()(0) > lmax + tol) {
      std::ostringstream msg;
      msg << "correlation: R(" << i << ") exceeds the Cauchy-Schwarz bound set by R(0)";
      throw HypothesisViolation(msg.str());
    }
  }
}

CMatrix CorrelationSequence::at(int i) const {
  const int k = std::abs(i);
  if (k > max_lag()) return CMatrix::Zero(T_, T_);
  return i >= 0 ? lags_[k] : CMatrix(lags_[k].adjoint());
}

namespace {

void check_contractive(cplx rho1, cplx rho2) {
  if (!(std::abs(rho1) < 1.0 && std::abs(rho2) < 1.0))
    throw InvalidParameter("Gauss-Markov: one-step correlations must satisfy |rho| < 1");
}

CMatrix gm_lag0(int T, cplx rho2) {
  CMatrix r(T, T);
  for (int p = 0; p < T; ++p)
    for (int q = 0; q < T; ++q)
      r(p, q) = p >= q ? std::pow(rho2, p - q) : std::conj(std::pow(rho2, q - p));
  return r;
}

// R(1) without the block-to-block factor c^(i-1): rho1 * u v^T.
CMatrix gm_lag1(int T, cplx rho1, cplx rho2) {
  CMatrix r(T, T);
  for (int p = 0; p < T; ++p)
    for (int q = 0; q < T; ++q) r(p, q) = rho1 * std::pow(rho2, p) * std::pow(rho2, T - 1 - q);
  return r;
}

CMatrix gm_lag(int T, cplx rho1, cplx rho2, int i) {
  if (i == 0) return gm_lag0(T, rho2);
  const int k = std::abs(i);
  const cplx c = rho1 * std::pow(rho2, T - 1);
  CMatrix r = gm_lag1(T, rho1, rho2) * std::pow(c, k - 1);
  return i > 0 ? r : CMatrix(r.adjoint());
}

}  // namespace

CorrelationSequence block_gauss_markov_correlation(int T, cplx rho1, cplx rho2, int max_lag) {
  if (T < 1) throw InvalidParameter("Gauss-Markov: T must be positive");
  if (max_lag < 0) throw InvalidParameter("Gauss-Markov: max_lag must be nonnegative");
  check_contractive(rho1, rho2);
  std::vector<CMatrix> lags;
  for (int i = 0; i <= max_lag; ++i) lags.push_back(gm_lag(T, rho1, rho2, i));
  return CorrelationSequence(T, std::move(lags));
}

// ---------------------------------------------------------------------------
// SpectralModel

SpectralModel SpectralModel::from_correlation(CorrelationSequence corr, double psd_tol) {
  const int T = corr.T();
  SpectralModel m(T, kind::TruncatedFourier{std::move(corr)});
  m.validate(psd_tol);
  return m;
}

SpectralModel SpectralModel::scalar_gauss_markov(cplx rho) { return block_gauss_markov(1, rho, rho); }

SpectralModel SpectralModel::block_gauss_markov(int T, cplx rho1, cplx rho2) {
  if (T < 1) throw InvalidParameter("Gauss-Markov: T must be positive");
  check_contractive(rho1, rho2);
  SpectralModel m(T, kind::BlockGaussMarkov{T, rho1, rho2});
  m.validate(kPsdTol);
  return m;
}

SpectralModel SpectralModel::constant_within_block(int T, const SpectralModel& base) {
  if (T < 1) throw InvalidParameter("constant_within_block: T must be positive");
  if (base.T() != 1) throw InvalidParameter("constant_within_block: base model must be scalar");
  return SpectralModel(T, kind::ConstantWithinBlock{T, std::make_shared<const SpectralModel>(base)});
}

SpectralModel SpectralModel::scalar(ScalarPiecewiseSpectrum spec) {
  return SpectralModel(1, kind::Scalar{std::move(spec)});
}

SpectralModel SpectralModel::explicit_grid(int T, std::vector<double> omegas,
                                           std::vector<CMatrix> mats, double psd_tol) {
  if (T < 1) throw InvalidParameter("explicit_grid: T must be positive");
  if (omegas.empty() || omegas.size() != mats.size())
    throw InvalidParameter("explicit_grid: need one matrix per node");
  if (std::abs(omegas.front() + kPi) > kSnapTol)
    throw InvalidParameter("explicit_grid: first node must be -pi");
  omegas.front() = -kPi;
  for (std::size_t k = 1; k < omegas.size(); ++k)
    if (!(omegas[k] > omegas[k - 1] && omegas[k] < kPi))
      throw InvalidParameter("explicit_grid: nodes must increase inside [-pi, pi)");
  for (const auto& a : mats)
    if (a.rows() != T || a.cols() != T) throw InvalidParameter("explicit_grid: matrices must be T x T");
  SpectralModel m(T, kind::ExplicitGrid{T, std::move(omegas), std::move(mats)});
  m.validate(psd_tol);
  const CMatrix r0 = m.correlation(0);
  for (int k = 0; k < T; ++k)
    if (std::abs(r0(k, k) - 1.0) > 1e-9)
      throw HypothesisViolation("explicit_grid: (1/2pi) integral of each S_kk must be 1");
  return m;
}

std::string SpectralModel::kind_name() const {
  struct V {
    std::string operator()(const kind::TruncatedFourier&) const { return "truncated_fourier"; }
    std::string operator()(const kind::BlockGaussMarkov& k) const {
      return k.T == 1 && k.rho1 == k.rho2 ? "scalar_gauss_markov" : "block_gauss_markov";
    }
    std::string operator()(const kind::ConstantWithinBlock&) const { return "constant_within_block"; }
    std::string operator()(const kind::Scalar&) const { return "scalar"; }
    std::string operator()(const kind::ExplicitGrid&) const { return "explicit_grid"; }
  };
  return std::visit(V{}, kind_);
}

CMatrix SpectralModel::eval(double omega) const {
  struct V {
    double w;
    CMatrix operator()(const kind::TruncatedFourier& k) const {
      const auto& lags = k.corr.lags();
      CMatrix s = lags[0];
      for (std::size_t i = 1; i < lags.size(); ++i) {
        const cplx e = std::polar(1.0, -w * static_cast<double>(i));
        CMatrix term = lags[i] * e;
        s += term + term.adjoint();
      }
      return s;
    }
    CMatrix operator()(const kind::BlockGaussMarkov& k) const {
      const cplx z = std::polar(1.0, -w);
      const cplx c = k.rho1 * std::pow(k.rho2, k.T - 1);
      CMatrix a = gm_lag1(k.T, k.rho1, k.rho2) * (z / (1.0 - c * z));
      return gm_lag0(k.T, k.rho2) + a + CMatrix(a.adjoint());
    }
    CMatrix operator()(const kind::ConstantWithinBlock& k) const {
      const cplx s = k.base->eval(w)(0, 0);
      return CMatrix::Constant(k.T, k.T, s);
    }
    CMatrix operator()(const kind::Scalar& k) const { return CMatrix::Constant(1, 1, k.spec(w)); }
    CMatrix operator()(const kind::ExplicitGrid& k) const {
      auto it = std::upper_bound(k.omegas.begin(), k.omegas.end(), w);
      const std::size_t idx = it == k.omegas.begin() ? 0 : static_cast<std::size_t>(it - k.omegas.begin()) - 1;
      return k.mats[idx];
    }
  };
  return std::visit(V{omega}, kind_);
}

CMatrix SpectralModel::correlation(int lag) const {
  struct V {
    int i;
    CMatrix operator()(const kind::TruncatedFourier& k) const { return k.corr.at(i); }
    CMatrix operator()(const kind::BlockGaussMarkov& k) const { return gm_lag(k.T, k.rho1, k.rho2, i); }
    CMatrix operator()(const kind::ConstantWithinBlock& k) const {
      return CMatrix::Constant(k.T, k.T, k.base->correlation(i)(0, 0));
    }
    CMatrix operator()(const kind::Scalar& k) const { return CMatrix::Constant(1, 1, k.spec.fourier(i)); }
    CMatrix operator()(const kind::ExplicitGrid& k) const {
      CMatrix acc = CMatrix::Zero(k.T, k.T);
      for (std::size_t n = 0; n < k.omegas.size(); ++n) {
        const double a = k.omegas[n];
        const double b = n + 1 < k.omegas.size() ? k.omegas[n + 1] : kPi;
        cplx w;
        if (i == 0) {
          w = b - a;
        } else {
          const double li = static_cast<double>(i);
          w = (std::polar(1.0, li * b) - std::polar(1.0, li * a)) / cplx(0.0, li);
        }
        acc += k.mats[n] * w;
      }
      return acc / kTwoPi;
    }
  };
  return std::visit(V{lag}, kind_);
}

bool SpectralModel::piecewise_constant() const {
  struct V {
    bool operator()(const kind::TruncatedFourier& k) const { return k.corr.max_lag() == 0; }
    bool operator()(const kind::BlockGaussMarkov& k) const { return is_zero(k.rho1); }
    bool operator()(const kind::ConstantWithinBlock& k) const { return k.base->piecewise_constant(); }
    bool operator()(const kind::Scalar&) const { return true; }
    bool operator()(const kind::ExplicitGrid&) const { return true; }
  };
  return std::visit(V{}, kind_);
}

std::vector<double> SpectralModel::breakpoints() const {
  struct V {
    std::vector<double> operator()(const kind::TruncatedFourier&) const { return {}; }
    std::vector<double> operator()(const kind::BlockGaussMarkov&) const { return {}; }
    std::vector<double> operator()(const kind::ConstantWithinBlock& k) const {
      return k.base->breakpoints();
    }
    std::vector<double> operator()(const kind::Scalar& k) const { return k.spec.breakpoints(); }
    std::vector<double> operator()(const kind::ExplicitGrid& k) const {
      return std::vector<double>(k.omegas.begin() + 1, k.omegas.end());
    }
  };
  return std::visit(V{}, kind_);
}

const ScalarPiecewiseSpectrum* SpectralModel::scalar_piecewise() const {
  if (const auto* s = std::get_if<kind::Scalar>(&kind_)) return &s->spec;
  if (const auto* c = std::get_if<kind::ConstantWithinBlock>(&kind_)) return c->base->scalar_piecewise();
  return nullptr;
}

void SpectralModel::validate(double psd_tol) const {
  const double h = kTwoPi / kValidationGrid;
  for (int k = 0; k < kValidationGrid; ++k) {
    const double w = -kPi + (k + 0.5) * h;
    const CMatrix s = eval(w);
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * scale)
      throw HypothesisViolation("spectral density must be Hermitian at every frequency");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < -psd_tol) {
      std::ostringstream msg;
      msg << "spectral density must be PSD: eigenvalue " << es.eigenvalues()(0) << " at omega=" << w;
      throw HypothesisViolation(msg.str());
    }
  }
}

QuadResult integrate_spectrum(const SpectralModel& model,
                              const std::function<double(const CMatrix&)>& g,
                              const QuadOptions& opts) {
  std::vector<double> cuts = model.breakpoints();
  if (model.piecewise_constant()) {
    cuts.insert(cuts.begin(), -kPi);
    cuts.push_back(kPi);
    QuadResult out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double len = cuts[i + 1] - cuts[i];
      if (len <= 0.0) continue;
      const double v = g(model.eval(0.5 * (cuts[i] + cuts[i + 1])));
      if (v == -kInf) return {-kInf, 0.0, out.panels};
      out.value += len * v;
      ++out.panels;
    }
    return out;
  }
  return integrate([&](double w) { return g(model.eval(w)); }, -kPi, kPi, cuts, opts);
}

CMatrix principal_minor(const CMatrix& a, unsigned mask) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = 0; k < a.rows(); ++k)
    if (mask & (1u << k)) idx.push_back(k);
  CMatrix out(idx.size(), idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r)
    for (std::size_t c = 0; c < idx.size(); ++c) out(r, c) = a(idx[r], idx[c]);
  return out;
}

}  // namespace blockfade
