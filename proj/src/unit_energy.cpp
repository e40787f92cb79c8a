#include "blockfade/unit_energy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "blockfade/highsnr.hpp"

namespace blockfade {

namespace {

void check_mask(const SpectralModel& model, unsigned mask) {
  if (mask == 0 || model.T() > 31 || mask >= (1u << model.T()))
    throw InvalidParameter("subset must be a nonempty subset of {1..T}");
}

std::vector<unsigned> extremal(const std::vector<double>& v, bool minimize) {
  double best = minimize ? kInf : -kInf;
  for (double x : v) best = minimize ? std::min(best, x) : std::max(best, x);
  std::vector<unsigned> out;
  const double tol = kTieTol * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i] - best) <= tol) out.push_back(static_cast<unsigned>(i + 1));
  return out;
}

double trace_square_integral(const SpectralModel& model, unsigned mask, const QuadOptions& opts) {
  return integrate_spectrum(
             model, [mask](const CMatrix& s) { return principal_minor(s, mask).squaredNorm(); },
             opts)
      .value;
}

}  // namespace

std::string subset_label(unsigned mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int k = 0; k < 32; ++k) {
    if (!(mask & (1u << k))) continue;
    if (!first) os << ',';
    os << k + 1;
    first = false;
  }
  os << '}';
  return os.str();
}

unsigned parse_subset(const std::string& text, int T) {
  unsigned mask = 0;
  std::string token;
  auto flush = [&]() {
    if (token.empty()) return;
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw InvalidParameter("subset: cannot parse index '" + token + "'");
    }
    if (used != token.size() || k < 1 || k > T)
      throw InvalidParameter("subset: index '" + token + "' outside 1..T");
    mask |= 1u << (k - 1);
    token.clear();
  };
  for (char c : text) {
    if (c == '{' || c == '}' || c == ' ') continue;
    if (c == ',') {
      flush();
      continue;
    }
    token.push_back(c);
  }
  flush();
  if (mask == 0) throw InvalidParameter("subset must be nonempty");
  return mask;
}

double psi(const SpectralModel& model, unsigned mask, double snr, const QuadOptions& opts) {
  check_mask(model, mask);
  if (!(snr > 0.0) || std::isinf(snr)) throw InvalidParameter("psi: snr must be finite and positive");
  const int m = std::popcount(mask);
  auto g = [mask, snr](const CMatrix& s) {
    CMatrix a = snr * principal_minor(s, mask);
    a.diagonal().array() += 1.0;
    return hermitian_logdet(a);
  };
  return integrate_spectrum(model, g, opts).value / m;
}

bool szasz_symmetric(const SpectralModel& model) {
  const int T = model.T();
  if (T == 1) return true;
  constexpr int kProbes = 16;
  for (int k = 0; k < kProbes; ++k) {
    const CMatrix s = model.eval(-kPi + (k + 0.37) * kTwoPi / kProbes);
    const double scale = std::max(1e-300, s.cwiseAbs().maxCoeff());
    const cplx d = s(0, 0);
    const cplx off = s(1, 0);
    for (int p = 0; p < T; ++p)
      for (int q = 0; q < T; ++q)
        if (std::abs(s(p, q) - (p == q ? d : off)) > 1e-12 * scale) return false;
  }
  return true;
}

SubsetScan cp_scan(const SpectralModel& model, double snr, const QuadOptions& opts) {
  const int T = model.T();
  const bool sym = szasz_symmetric(model);
  if (T > kMaxScanT) {
    std::string msg = "cp_scan: T = " + std::to_string(T) + " exceeds the subset cap of 20; ";
    msg += sym ? "the spectrum has equal diagonals and off-diagonals, so use cp_full_set"
               : "use a closed form (cp_block_indep_constant, cp_block_gauss_markov)";
    throw InvalidParameter(msg);
  }
  if (!(snr > 0.0) || std::isinf(snr)) throw InvalidParameter("cp_scan: snr must be finite and positive");
  const std::size_t count = (std::size_t{1} << T) - 1;
  std::vector<double> values(count);
  QuadOptions inner = opts;
  inner.exec = Exec::serial;
  parallel_for(opts.exec, count, [&](std::size_t i) {
    values[i] = psi(model, static_cast<unsigned>(i + 1), snr, inner);
  });
  SubsetScan out;
  out.snr = snr;
  out.szasz_symmetric = sym;
  for (std::size_t i = 0; i < count; ++i) out.entries.push_back({static_cast<unsigned>(i + 1), values[i]});
  out.argmin = extremal(values, true);
  out.cp = 1.0 - values[out.argmin.front() - 1] / (kTwoPi * snr);
  return out;
}

double cp_full_set(const SpectralModel& model, double snr, const QuadOptions& opts) {
  if (model.T() > 31) throw InvalidParameter("cp_full_set: T must be at most 31");
  const unsigned full = (1u << model.T()) - 1u;
  return 1.0 - psi(model, full, snr, opts) / (kTwoPi * snr);
}

double cp_block_indep_constant(int T, double snr) {
  if (T < 1 || !(snr > 0.0)) throw InvalidParameter("cp_block_indep_constant: need T >= 1, snr > 0");
  const double x = T * snr;
  return 1.0 - std::log1p(x) / x;
}

double cp_block_gauss_markov(int T, double snr, cplx rho) {
  if (T < 1 || !(snr > 0.0)) throw InvalidParameter("cp_block_gauss_markov: need T >= 1, snr > 0");
  const double r2 = std::norm(rho);
  if (!(r2 < 1.0)) throw InvalidParameter("cp_block_gauss_markov: requires |rho| < 1");
  const double x = T * snr;
  const double b = 1.0 + x + r2 * (1.0 - x);
  const double gamma0 = 0.5 * (b + std::sqrt(b * b - 4.0 * r2));
  return 1.0 - std::log(gamma0) / x;
}

std::vector<unsigned> high_snr_optimal_subsets(const SpectralModel& model, double snr) {
  (void)snr;
  const int T = model.T();
  if (T > kMaxScanT) throw InvalidParameter("high-SNR asymptote: T exceeds the subset cap of 20");
  const std::size_t count = (std::size_t{1} << T) - 1;
  std::vector<double> crit(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned mask = static_cast<unsigned>(i + 1);
    const RankProfile rp = rank_profile(model, mask);
    double acc = 0.0;
    for (std::size_t r = 0; r < rp.mu.size(); ++r) acc += r * rp.mu[r];
    crit[i] = acc / std::popcount(mask);
  }
  return extremal(crit, true);
}

double cp_high_asymptote(const SpectralModel& model, double snr) {
  if (!(snr > 1.0)) throw InvalidParameter("cp_high_asymptote: requires snr > 1");
  const unsigned mask = high_snr_optimal_subsets(model, snr).front();
  const RankProfile rp = rank_profile(model, mask);
  double acc = 0.0;
  for (std::size_t r = 0; r < rp.mu.size(); ++r) acc += r * rp.mu[r];
  return 1.0 - acc * std::log(snr) / (kTwoPi * std::popcount(mask) * snr);
}

std::vector<unsigned> low_snr_optimal_subsets(const SpectralModel& model, const QuadOptions& opts) {
  const int T = model.T();
  if (T > kMaxScanT) throw InvalidParameter("low-SNR asymptote: T exceeds the subset cap of 20");
  const std::size_t count = (std::size_t{1} << T) - 1;
  std::vector<double> crit(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned mask = static_cast<unsigned>(i + 1);
    crit[i] = trace_square_integral(model, mask, opts) / std::popcount(mask);
    if (!std::isfinite(crit[i]))
      throw HypothesisViolation("low-SNR asymptote requires integral of tr S^2 to be finite");
  }
  return extremal(crit, false);
}

double cp_low_asymptote(const SpectralModel& model, double snr, const QuadOptions& opts) {
  if (!(snr > 0.0)) throw InvalidParameter("cp_low_asymptote: snr must be positive");
  const unsigned mask = low_snr_optimal_subsets(model, opts).front();
  return snr / (2.0 * kTwoPi) * trace_square_integral(model, mask, opts) / std::popcount(mask);
}

std::vector<Crossover> cp_crossover(const SpectralModel& model, unsigned m1, unsigned m2, double lo,
                                    double hi, double snr_tol, const QuadOptions& opts) {
  check_mask(model, m1);
  check_mask(model, m2);
  if (!(lo > 0.0 && hi > lo)) throw InvalidParameter("cp_crossover: need 0 < lo < hi");
  auto diff = [&](double s) { return psi(model, m1, s, opts) - psi(model, m2, s, opts); };
  const std::vector<double> grid = log_grid(lo, hi, 281);
  std::vector<double> d(grid.size());
  parallel_for(opts.exec, grid.size(), [&](std::size_t i) { d[i] = diff(grid[i]); });

  std::vector<Crossover> out;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (d[i] == 0.0) {
      out.push_back({grid[i], grid[i], grid[i]});
      continue;
    }
    if (d[i] * d[i + 1] >= 0.0) continue;
    double a = grid[i], b = grid[i + 1], fa = d[i];
    while (b - a > snr_tol && b / a > 1.0 + 1e-15) {
      const double mid = std::sqrt(a * b);
      const double fm = diff(mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    out.push_back({std::sqrt(a * b), a, b});
  }
  return out;
}

SpectralModel example5_model(cplx rho) {
  if (!(std::abs(rho) <= 1.0)) throw InvalidParameter("example 5 model: requires |rho| <= 1");
  CMatrix r0(3, 3);
  r0 << 1.0, 1.0, std::conj(rho), 1.0, 1.0, std::conj(rho), rho, rho, 1.0;
  return SpectralModel::from_correlation(CorrelationSequence(3, {r0}));
}

double example5_crossover(double rho_abs) {
  if (!(rho_abs > 0.5 && rho_abs < 1.0)) throw InvalidParameter("example 5 crossover: requires 1/2 < |rho| < 1");
  return (2.0 * rho_abs - 1.0) / (2.0 * (1.0 - rho_abs) * (1.0 - rho_abs));
}

}  // namespace blockfade
