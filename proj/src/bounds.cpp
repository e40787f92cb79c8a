#include "blockfade/bounds.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/expint.hpp>

#include "blockfade/highsnr.hpp"

namespace blockfade {

namespace {

constexpr double kVacuous = 1.0 - 1e-12;

void add_flag(BoundValue& b, const std::string& f) {
  if (std::find(b.flags.begin(), b.flags.end(), f) == b.flags.end()) b.flags.push_back(f);
}

double clamped_term(BoundValue& b, double snr, double v) {
  if (v >= kVacuous) {
    add_flag(b, "vacuous-prediction");
    return 0.0;
  }
  const double t = lemma2_lower(snr, std::max(v, 0.0));
  if (t < 0.0) {
    add_flag(b, "clamped-at-zero");
    return 0.0;
  }
  return t;
}

}  // namespace

double lemma2_lower(double snr, double var_tilde) {
  if (!(snr > 0.0)) throw InvalidParameter("lemma2_lower: snr must be positive");
  if (!(var_tilde >= 0.0 && var_tilde < 1.0))
    throw InvalidParameter("lemma2_lower: prediction variance must lie in [0, 1)");
  return -std::log(var_tilde + 8.0 / (5.0 * snr)) + std::log1p(-var_tilde) - kEulerGamma -
         std::log(5.0 * std::exp(1.0) / 6.0);
}

double coherent_memoryless(double snr) {
  if (!(snr > 0.0)) throw InvalidParameter("coherent_memoryless: snr must be positive");
  const double x = 1.0 / snr;
  if (x > 500.0) {
    // E log(1 + sX) = sum (-1)^(k+1) (k-1)! s^k, X ~ Exp(1); asymptotic, 6 terms.
    double acc = 0.0, fact = 1.0, p = 1.0;
    for (int k = 1; k <= 6; ++k) {
      p *= snr;
      if (k > 1) fact *= (k - 1);
      acc += (k % 2 ? 1.0 : -1.0) * fact * p;
    }
    return acc;
  }
  return std::exp(x) * boost::math::expint(1, x);
}

double memoryless_upper(double snr) {
  // I(x;y) = I(V; V + W) with V = log(1+|x|^2) in [0, A], W = log Exp(1):
  // h(V+W) <= Gaussian entropy at variance A^2/4 + pi^2/6, h(W) = 1 + gamma.
  const double a = std::log1p(snr);
  const double entropy =
      0.5 * std::log(2.0 * kPi * std::exp(1.0) * (a * a / 4.0 + kPi * kPi / 6.0)) - 1.0 - kEulerGamma;
  return std::min(coherent_memoryless(snr), entropy);
}

BoundValue capacity_lower(const SpectralModel& model, double snr, double x_min, int history_len,
                          const QuadOptions& opts) {
  if (!(snr > 0.0) || std::isinf(snr)) throw InvalidParameter("capacity_lower: snr must be finite and positive");
  if (!(x_min > 0.0 && x_min <= std::sqrt(snr) * (1.0 + 1e-12)))
    throw InvalidParameter("capacity_lower: need 0 < x_min <= sqrt(snr)");
  BoundValue out;
  if (x_min > 0.5 * std::sqrt(snr) * (1.0 + 1e-12)) add_flag(out, "x_min-above-annulus-inner-radius");
  const double x2 = x_min * x_min;
  const int T = model.T();
  std::vector<double> var(T);
  if (T == 1) {
    var[0] = std::exp(logdet_sigma(model, x2, opts).value) - 1.0 / x2;
  } else {
    SigmaOptions so;
    so.quad = opts;
    const PredictionSummary ps = per_symbol_sigmas(model, x2, history_len, so);
    for (int i = 0; i < T; ++i) var[i] = ps.sigmas[i] - 1.0 / x2;
    add_flag(out, "finite-history");
  }
  for (int i = 0; i < T; ++i) {
    const double t = clamped_term(out, snr, std::clamp(var[i], 0.0, 1.0));
    out.per_symbol.push_back(t);
    out.value += t / T;
  }
  return out;
}

BoundValue capacity_upper(const SpectralModel& model, double snr, int history_len,
                          const QuadOptions& opts) {
  if (!(snr > 0.0) || std::isinf(snr)) throw InvalidParameter("capacity_upper: snr must be finite and positive");
  const int T = model.T();
  BoundValue out;
  const QuadResult ld = logdet_sigma(model, snr, opts);
  const double side = std::log1p(1.0 / snr) - ld.value / T;
  const double mem = memoryless_upper(snr);
  out.value = side + mem;
  add_flag(out, "relaxed-upper");
  if (T == 1) {
    out.per_symbol.push_back(side);
  } else if (history_len > 0) {
    SigmaOptions so;
    so.quad = opts;
    const PredictionSummary ps = per_symbol_sigmas(model, snr, history_len, so);
    for (double s : ps.sigmas) out.per_symbol.push_back(std::log((1.0 + snr) / (snr * s)));
  }
  return out;
}

double universal_lower(double alpha, double snr, double x_min) {
  if (!(x_min > 0.0 && x_min <= std::sqrt(snr) * (1.0 + 1e-12)))
    throw InvalidParameter("universal_lower: need 0 < x_min <= sqrt(snr)");
  const double v = phi(alpha, x_min);
  if (v >= kVacuous) return 0.0;
  return std::max(0.0, lemma2_lower(snr, v));
}

BoundPoint bound_point(const SpectralModel& model, double snr, double x_min, int history_len,
                       const QuadOptions& opts) {
  BoundPoint p;
  p.snr = snr;
  p.x_min = x_min;
  p.lower = capacity_lower(model, snr, x_min, history_len, opts);
  p.upper = capacity_upper(model, snr, history_len, opts);
  return p;
}

}  // namespace blockfade
