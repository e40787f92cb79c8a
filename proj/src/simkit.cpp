#include "blockfade/simkit.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "blockfade/prediction.hpp"

namespace blockfade {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check(const SimConfig& cfg) {
  if (!cfg.model) throw InvalidParameter("simulation: model is required");
  if (cfg.num_paths < 1) throw InvalidParameter("simulation: num_paths must be positive");
  if (cfg.path_len < 1 || cfg.path_len % cfg.model->T() != 0)
    throw InvalidParameter("simulation: path_len must be a positive multiple of T");
  if (!(cfg.snr > 0.0) || std::isinf(cfg.snr)) throw InvalidParameter("simulation: snr must be finite and positive");
}

// K = F F^dagger; Cholesky, else an eigenvalue factor with negative parts clamped.
CMatrix factor(const CMatrix& k, double& clamp) {
  Eigen::LLT<CMatrix> llt(k);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
  Eigen::VectorXd ev = es.eigenvalues();
  clamp = std::max(0.0, -ev.minCoeff());
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal();
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return kInf;
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

PathSamples generate_paths(const SimConfig& cfg) {
  check(cfg);
  const int L = cfg.path_len;
  PathSamples out;
  const CMatrix f = factor(window_covariance(*cfg.model, 0, L, 0.0), out.regularization);
  out.h.resize(cfg.num_paths, L);
  out.y.resize(cfg.num_paths, L);
  const double noise_sd = std::sqrt(1.0 / cfg.snr);
  parallel_for(cfg.exec, static_cast<std::size_t>(cfg.num_paths), [&](std::size_t p) {
    std::mt19937_64 rng(splitmix64(cfg.seed) ^ splitmix64(static_cast<std::uint64_t>(p) + 0x1234567ULL));
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    CVector w(L), z(L);
    for (int t = 0; t < L; ++t) w(t) = cplx(nd(rng), nd(rng));
    for (int t = 0; t < L; ++t) z(t) = cplx(nd(rng), nd(rng));
    const CVector h = f * w;
    out.h.row(static_cast<Eigen::Index>(p)) = h.transpose();
    out.y.row(static_cast<Eigen::Index>(p)) = (h + noise_sd * z).transpose();
  });
  return out;
}

EmpiricalVariance empirical_prediction_variance(const SimConfig& cfg, int history_len) {
  check(cfg);
  const int T = cfg.model->T();
  if (history_len < 0 || cfg.path_len < history_len + T)
    throw InvalidParameter("simulation: path_len must be at least history_len + T");
  if (cfg.num_paths < 100) throw InvalidParameter("simulation: variance estimates need at least 100 paths");
  const PathSamples s = generate_paths(cfg);
  const double noise = 1.0 / cfg.snr;
  SigmaOptions so;
  so.exec = cfg.exec;
  const PredictionSummary ps = per_symbol_sigmas(*cfg.model, cfg.snr, history_len, so);

  EmpiricalVariance out;
  for (int i = 0; i < T; ++i) {
    const long t = cfg.path_len - T + i;
    const int n = history_len;
    CVector wts;
    if (n > 0) {
      const CMatrix big = window_covariance(*cfg.model, t - n, n + 1, noise);
      wts = big.topLeftCorner(n, n).ldlt().solve(big.col(n).head(n));
    }
    std::vector<double> err(cfg.num_paths);
    for (int p = 0; p < cfg.num_paths; ++p) {
      cplx pred = 0.0;
      if (n > 0) pred = wts.dot(s.y.row(p).segment(t - n, n).transpose());
      err[p] = std::norm(s.y(p, t) - pred);
    }
    const double m = mean_of(err);
    out.mean.push_back(m);
    out.stderr_.push_back(stderr_of(err, m));
    out.analytic.push_back(ps.sigmas[i]);
  }
  return out;
}

PilotEstimate empirical_pilot_variance(const SimConfig& cfg, long target, const std::vector<long>& pilots) {
  check(cfg);
  if (pilots.empty()) throw InvalidParameter("simulation: pilots must be nonempty");
  auto inside = [&](long i) { return i >= 0 && i < cfg.path_len; };
  if (!inside(target) || !std::all_of(pilots.begin(), pilots.end(), inside))
    throw InvalidParameter("simulation: pilot and target indices must lie in [0, path_len)");
  const PathSamples s = generate_paths(cfg);
  const CMatrix k = window_covariance(*cfg.model, 0, cfg.path_len, 0.0);
  const Eigen::Index q = static_cast<Eigen::Index>(pilots.size());
  CMatrix kpp(q, q);
  CVector kpt(q);
  for (Eigen::Index a = 0; a < q; ++a) {
    for (Eigen::Index b = 0; b < q; ++b) kpp(a, b) = k(pilots[a], pilots[b]);
    kpp(a, a) += 1.0 / cfg.snr;
    kpt(a) = k(pilots[a], target);
  }
  const CVector wts = kpp.ldlt().solve(kpt);
  std::vector<double> err(cfg.num_paths);
  for (int p = 0; p < cfg.num_paths; ++p) {
    CVector yp(q);
    for (Eigen::Index a = 0; a < q; ++a) yp(a) = s.y(p, pilots[a]);
    err[p] = std::norm(s.h(p, target) - wts.dot(yp));
  }
  PilotEstimate out;
  out.mean = mean_of(err);
  out.stderr_ = stderr_of(err, out.mean);
  out.analytic = conditional_mmse_variance(*cfg.model, target, pilots, cfg.snr);
  return out;
}

}  // namespace blockfade
