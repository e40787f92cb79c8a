#include "blockfade/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace blockfade {

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool matrix_singular(const CMatrix& s) {
  if (s.rows() == 1) return !(s(0, 0).real() > 0.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev(0) <= 1e-12 * std::max(ev(ev.size() - 1), 1e-300);
}

// Positive-measure singularity. Exact per segment for piecewise-constant
// models; otherwise a midpoint grid, where isolated zeros never reach 1%.
bool singular_on_positive_measure(const SpectralModel& model) {
  if (model.piecewise_constant()) {
    std::vector<double> cuts = model.breakpoints();
    cuts.insert(cuts.begin(), -kPi);
    cuts.push_back(kPi);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
      if (cuts[i + 1] > cuts[i] && matrix_singular(model.eval(0.5 * (cuts[i] + cuts[i + 1]))))
        return true;
    return false;
  }
  constexpr int kGrid = 1024;
  int hits = 0;
  for (int k = 0; k < kGrid; ++k)
    if (matrix_singular(model.eval(-kPi + (k + 0.5) * kTwoPi / kGrid))) ++hits;
  return hits * 100 >= kGrid;
}

class LagCache {
 public:
  explicit LagCache(const SpectralModel& m) : model_(m) {}
  const CMatrix& lag(long i) {
    auto it = cache_.find(i);
    if (it == cache_.end()) it = cache_.emplace(i, model_.correlation(static_cast<int>(i))).first;
    return it->second;
  }
  // E h_s h_t^* for absolute symbol indices.
  cplx entry(long s, long t) {
    const long T = model_.T();
    const long bs = floor_div(s, T);
    const long bt = floor_div(t, T);
    return lag(bs - bt)(s - bs * T, t - bt * T);
  }

 private:
  const SpectralModel& model_;
  std::map<long, CMatrix> cache_;
};

bool is_real(const CMatrix& a) { return a.imag().cwiseAbs().maxCoeff() == 0.0; }

template <class Mat>
double last_pivot(const Mat& k, double& jitter) {
  const Eigen::Index n = k.rows();
  const double scale = std::max(1.0, std::abs(k.diagonal().sum()) / static_cast<double>(n));
  double add = 0.0;
  for (int attempt = 0; attempt < 10; ++attempt) {
    Mat a = k;
    if (add > 0.0) a.diagonal().array() += add;
    Eigen::LLT<Mat> llt(a);
    if (llt.info() == Eigen::Success) {
      const double d = std::real(llt.matrixLLT()(n - 1, n - 1));
      if (d > 0.0 && std::isfinite(d)) {
        jitter = std::max(jitter, add);
        return d * d;
      }
    }
    add = add == 0.0 ? 1e-14 * scale : add * 100.0;
  }
  throw HypothesisViolation("finite-history covariance is not positive definite after regularization");
}

double window_last_pivot(const SpectralModel& model, long target, int history, double noise,
                         double& jitter) {
  const CMatrix k = window_covariance(model, target - history, history + 1, noise);
  if (is_real(k)) return last_pivot(Eigen::MatrixXd(k.real()), jitter);
  return last_pivot(k, jitter);
}

template <class Real>
NoiselessLadder ladder_impl(const ScalarPiecewiseSpectrum& spec, int n_max, double ratio_cap,
                            int digits) {
  const Real pi = boost::math::constants::pi<Real>();
  std::vector<Real> r(n_max + 1);
  for (int k = 0; k <= n_max; ++k) {
    Real acc = 0;
    for (const auto& s : spec.segments()) {
      const Real lo = s.lo, hi = s.hi, level = s.level;
      if (k == 0)
        acc += level * (hi - lo);
      else
        acc += level * (sin(Real(k) * hi) - sin(Real(k) * lo)) / Real(k);
    }
    r[k] = acc / pi;
  }
  NoiselessLadder out;
  out.digits = digits;
  std::vector<std::vector<Real>> l;
  for (int j = 0; j <= n_max; ++j) {
    std::vector<Real> row(j + 1);
    for (int k = 0; k < j; ++k) {
      Real acc = r[j - k];
      for (int m = 0; m < k; ++m) acc -= row[m] * l[k][m];
      row[k] = acc / l[k][k];
    }
    Real d = r[0];
    for (int m = 0; m < j; ++m) d -= row[m] * row[m];
    if (!(d > 0)) break;
    const double dv = static_cast<double>(d);
    if (j > 0 && out.var.front() / dv > ratio_cap) break;
    out.var.push_back(dv);
    row[j] = sqrt(d);
    l.push_back(std::move(row));
  }
  out.reliable_n = static_cast<int>(out.var.size()) - 1;
  return out;
}

}  // namespace

CMatrix window_covariance(const SpectralModel& model, long first, int count, double noise) {
  LagCache cache(model);
  CMatrix k(count, count);
  for (int a = 0; a < count; ++a) {
    for (int b = 0; b <= a; ++b) {
      const cplx v = cache.entry(first + a, first + b);
      k(a, b) = v;
      k(b, a) = std::conj(v);
    }
    k(a, a) = cplx(k(a, a).real() + noise, 0.0);
  }
  return k;
}

QuadResult logdet_sigma(const SpectralModel& model, double snr, const QuadOptions& opts) {
  if (!(snr > 0.0)) throw InvalidParameter("logdet_sigma: snr must be positive");
  const bool at_inf = std::isinf(snr);
  if (at_inf && singular_on_positive_measure(model)) return {-kInf, 0.0, 0};
  const double noise = at_inf ? 0.0 : 1.0 / snr;
  auto g = [noise](const CMatrix& s) {
    if (noise == 0.0) return hermitian_logdet(s);
    CMatrix a = s;
    a.diagonal().array() += noise;
    return hermitian_logdet(a);
  };
  QuadResult r = integrate_spectrum(model, g, opts);
  r.value /= kTwoPi;
  r.error /= kTwoPi;
  return r;
}

PredictionSummary per_symbol_sigmas(const SpectralModel& model, double snr, int history_len,
                                    const SigmaOptions& opts) {
  if (!(snr > 0.0) || std::isinf(snr)) throw InvalidParameter("per_symbol_sigmas: snr must be finite and positive");
  if (history_len < 0) throw InvalidParameter("per_symbol_sigmas: history_len must be nonnegative");
  const int T = model.T();
  const double noise = 1.0 / snr;

  PredictionSummary out;
  out.history_len = history_len;
  out.quadrature_tol = opts.quad.rel_tol;

  QuadOptions inner = opts.quad;
  const QuadResult ld = logdet_sigma(model, snr, inner);
  out.logdet_sigma_snr = ld.value;
  out.logdet_error = ld.error;
  try {
    out.logdet_sigma_inf = logdet_sigma(model, kInf, inner).value;
  } catch (const ToleranceNotMet&) {
  }

  auto run = [&](int n, std::vector<double>& sig) {
    sig.assign(T, 0.0);
    std::vector<double> jit(T, 0.0);
    parallel_for(opts.exec, static_cast<std::size_t>(T), [&](std::size_t i) {
      sig[i] = window_last_pivot(model, static_cast<long>(i), n, noise, jit[i]);
    });
    for (double j : jit) out.regularization = std::max(out.regularization, j);
  };
  run(history_len, out.sigmas);
  if (opts.extrapolate && history_len > 0) {
    std::vector<double> twice;
    run(2 * history_len, twice);
    out.sigmas_extrapolated.resize(T);
    for (int i = 0; i < T; ++i) out.sigmas_extrapolated[i] = 2.0 * twice[i] - out.sigmas[i];
  }

  double sum = 0.0;
  for (double s : out.sigmas) sum += std::log(s);
  out.ldl_gap = std::abs(sum - out.logdet_sigma_snr);
  const double tol = std::max(opts.quad.rel_tol * std::max(1.0, std::abs(out.logdet_sigma_snr)), ld.error);
  out.convergence_warning = out.ldl_gap > 10.0 * tol;
  return out;
}

PredictionSummary per_symbol_sigmas(const CorrelationSequence& corr, double snr, int history_len,
                                    const SigmaOptions& opts) {
  return per_symbol_sigmas(SpectralModel::from_correlation(corr), snr, history_len, opts);
}

double conditional_mmse_variance(const SpectralModel& model, long target,
                                 const std::vector<long>& pilots, double snr) {
  if (pilots.empty()) throw InvalidParameter("conditional_mmse_variance: pilots must be nonempty");
  if (!(snr > 0.0)) throw InvalidParameter("conditional_mmse_variance: snr must be positive");
  const double noise = std::isinf(snr) ? 0.0 : 1.0 / snr;
  LagCache cache(model);
  const Eigen::Index q = static_cast<Eigen::Index>(pilots.size());
  CMatrix kpp(q, q);
  CVector kpt(q);
  for (Eigen::Index a = 0; a < q; ++a) {
    for (Eigen::Index b = 0; b < q; ++b) kpp(a, b) = cache.entry(pilots[a], pilots[b]);
    kpp(a, a) += noise;
    kpt(a) = cache.entry(pilots[a], target);
  }
  const double ktt = cache.entry(target, target).real();
  double add = 0.0;
  const double scale = std::max(1.0, kpp.diagonal().real().maxCoeff());
  for (int attempt = 0; attempt < 10; ++attempt) {
    CMatrix a = kpp;
    if (add > 0.0) a.diagonal().array() += add;
    Eigen::LDLT<CMatrix> ldlt(a);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const CVector x = ldlt.solve(kpt);
      const double v = ktt - std::real(kpt.dot(x));
      return std::clamp(v, 0.0, ktt);
    }
    add = add == 0.0 ? 1e-14 * scale : add * 100.0;
  }
  throw HypothesisViolation("pilot covariance is not positive semidefinite");
}

double scalar_noisy_prediction_variance(const ScalarPiecewiseSpectrum& spec, double x_min) {
  if (!(x_min > 0.0)) throw InvalidParameter("scalar_noisy_prediction_variance: x_min must be positive");
  const double e = 1.0 / (x_min * x_min);
  const double v = std::exp(spec.mean_log(e)) - e;
  return std::clamp(v, 0.0, 1.0);
}

NoiselessLadder noiseless_prediction_ladder(const ScalarPiecewiseSpectrum& spec, int n_max,
                                            double ratio_cap, int digits) {
  using boost::multiprecision::cpp_bin_float_100;
  using boost::multiprecision::cpp_bin_float_50;
  if (n_max < 0) throw InvalidParameter("noiseless_prediction_ladder: n_max must be nonnegative");
  if (digits <= 50) return ladder_impl<cpp_bin_float_50>(spec, n_max, ratio_cap, 50);
  return ladder_impl<cpp_bin_float_100>(spec, n_max, ratio_cap, 100);
}

}  // namespace blockfade
