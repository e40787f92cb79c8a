#include "blockfade/highsnr.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "blockfade/bounds.hpp"

namespace blockfade {

RankProfile rank_profile(const SpectralModel& model, unsigned mask, int grid_size,
                         double eig_threshold, Exec exec) {
  if (grid_size < 64) throw InvalidParameter("rank profile: grid_size must be >= 64");
  const int m = std::popcount(mask);
  if (m == 0 || mask >= (1u << model.T())) throw InvalidParameter("rank profile: invalid subset");
  const double h = kTwoPi / grid_size;
  std::vector<Eigen::VectorXd> eig(grid_size);
  parallel_for(exec, static_cast<std::size_t>(grid_size), [&](std::size_t k) {
    const CMatrix s = principal_minor(model.eval(-kPi + (k + 0.5) * h), mask);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(s, Eigen::EigenvaluesOnly);
    eig[k] = es.eigenvalues();
  });
  double top = 0.0;
  for (const auto& e : eig) top = std::max(top, e.maxCoeff());
  const double cut = eig_threshold * top;

  RankProfile out;
  out.grid_size = grid_size;
  out.mu.assign(m + 1, 0.0);
  for (const auto& e : eig) {
    int rank = 0;
    bool near = false;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      if (e(i) > cut) ++rank;
      if (e(i) > cut / 10.0 && e(i) < cut * 10.0) near = true;
    }
    out.mu[rank] += h;
    if (near) ++out.ambiguous;
  }
  for (int i = 0; i <= m; ++i) out.functional += (m - i) * out.mu[i];
  out.functional /= kTwoPi * m;
  return out;
}

RankProfile rank_measure_functional(const SpectralModel& model, int grid_size,
                                    double eig_threshold, Exec exec) {
  return rank_profile(model, (1u << model.T()) - 1u, grid_size, eig_threshold, exec);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi >= lo) || points < 1) throw InvalidParameter("log grid: need 0 < lo <= hi, points >= 1");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (int k = 0; k < points; ++k) g[k] = std::exp(a + (b - a) * k / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_prelog_grid() { return log_grid(1e4, 1e12, 9); }

double prelog_slope(const SpectralModel& model, const std::vector<double>& snr_grid,
                    const QuadOptions& opts) {
  if (snr_grid.size() < 3) throw InvalidParameter("prelog slope: need at least 3 SNR points");
  for (std::size_t i = 1; i < snr_grid.size(); ++i)
    if (!(snr_grid[i] > snr_grid[i - 1])) throw InvalidParameter("prelog slope: SNR grid must increase");
  if (!(snr_grid.front() > 0.0) || snr_grid.back() / snr_grid.front() < 1e4 * (1.0 - 1e-12))
    throw InvalidParameter("prelog slope: SNR grid must span at least 4 decades");
  const double T = model.T();
  std::vector<double> x, y;
  for (double s : snr_grid) {
    x.push_back(T * std::log(s));
    y.push_back(-logdet_sigma(model, s, opts).value);
  }
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

PrelogReport prelog_report(const SpectralModel& model, const std::vector<double>& snr_grid,
                           int grid_size, double eig_threshold, const QuadOptions& opts) {
  const RankProfile rp = rank_measure_functional(model, grid_size, eig_threshold, opts.exec);
  PrelogReport out;
  out.prelog_rank = rp.functional;
  out.rank_measures = rp.mu;
  out.ambiguous = rp.ambiguous;
  out.snr_grid = snr_grid;
  out.prelog_slope = prelog_slope(model, snr_grid, opts);
  out.disagreement = std::abs(out.prelog_rank - out.prelog_slope) > 0.05;
  return out;
}

double fading_number(const SpectralModel& model, const QuadOptions& opts) {
  const QuadResult ld = logdet_sigma(model, kInf, opts);
  // Clamped eigenvalues put a spurious finite floor near -690 per dimension.
  if (!std::isfinite(ld.value) || ld.value < -300.0 * model.T())
    throw HypothesisViolation(
        "fading number requires a regular process: det Sigma(inf) > 0 does not hold");
  return -1.0 - kEulerGamma - ld.value / model.T();
}

ScalarPiecewiseSpectrum worst_case_spectrum(double alpha) {
  if (!(alpha >= 0.0 && alpha < kTwoPi)) throw InvalidParameter("worst-case spectrum: alpha must lie in [0, 2pi)");
  return ScalarPiecewiseSpectrum(
      {{0.0, alpha / 2.0, 0.0}, {alpha / 2.0, kPi, kTwoPi / (kTwoPi - alpha)}}, 1e-12);
}

double phi(double alpha, double x_min) {
  if (!(alpha >= 0.0 && alpha < kTwoPi)) throw InvalidParameter("phi: alpha must lie in [0, 2pi)");
  if (!(x_min > 0.0)) throw InvalidParameter("phi: x_min must be positive");
  if (alpha == 0.0) return 1.0;
  const double e = 1.0 / (x_min * x_min);
  const double beta = (kTwoPi - alpha) / kTwoPi;
  const double level = kTwoPi / (kTwoPi - alpha);
  return std::exp(beta * std::log(level + e) + (1.0 - beta) * std::log(e)) - e;
}

KappaC kappa_c(double alpha, double r) {
  if (!(alpha >= 0.0 && alpha < kTwoPi)) throw InvalidParameter("kappa_c: alpha must lie in [0, 2pi)");
  if (!(r >= 0.0)) throw InvalidParameter("kappa_c: r must be nonnegative");
  KappaC out;
  out.kappa = (alpha + std::min(r, 1.0) * (kTwoPi - alpha)) / kTwoPi;
  if (r == 0.0) return out;
  if (r < 1.0)
    out.c = alpha * std::log(4.0);
  else if (r == 1.0)
    out.c = alpha * std::log(4.0) + (kTwoPi - alpha) * std::log(5.0);
  else
    out.c = kTwoPi * std::log(4.0);
  return out;
}

double two_level_variance(double eps1, double eps2, double a1, double a2, double noise) {
  const double top = (1.0 - a1 * eps1 - (a2 - a1) * eps2) / (1.0 - a2);
  const double lg = a1 * std::log(eps1 + noise) + (a2 - a1) * std::log(eps2 + noise) +
                    (1.0 - a2) * std::log(top + noise);
  return std::exp(lg) - noise;
}

std::vector<TwoLevelPoint> two_level_bounds(double eps1, double eps2, double a1, double a2,
                                            const std::vector<double>& snr_grid) {
  (void)two_level_spectrum(eps1, eps2, a1, a2);  // parameter validation
  std::vector<TwoLevelPoint> out;
  for (double snr : snr_grid) {
    if (!(snr > 0.0)) throw InvalidParameter("two-level bounds: snr must be positive");
    const double vl = std::clamp(two_level_variance(eps1, eps2, a1, a2, 4.0 / snr), 0.0, 1.0);
    const double vu = std::clamp(two_level_variance(eps1, eps2, a1, a2, 1.0 / snr), 1e-300, 1.0);
    const double lower = vl < 1.0 ? lemma2_lower(snr, vl) : 0.0;
    const double upper = memoryless_upper(snr) - std::log(vu);
    out.push_back({snr, lower, upper});
  }
  return out;
}

}  // namespace blockfade
