#include "blockfade/codelength.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "blockfade/prediction.hpp"
#include "blockfade/quadrature.hpp"

namespace blockfade {

namespace {

double wrap(double a) {
  a = std::fmod(a + kPi, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a - kPi;
}

double log_chord(double a, double b) { return std::log(2.0 * std::abs(std::sin(0.5 * (a - b)))); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Interval {
  double a, b;
  bool sing_a, sing_b;
};

class FeketeState {
 public:
  FeketeState(const ArcSet& set, std::vector<double> phi, std::vector<int> arc_of)
      : set_(set), phi_(std::move(phi)), arc_(std::move(arc_of)) {}

  double log_v() const {
    double acc = 0.0;
    for (std::size_t j = 0; j < phi_.size(); ++j)
      for (std::size_t k = j + 1; k < phi_.size(); ++k) acc += log_chord(phi_[j], phi_[k]);
    return acc;
  }

  // One exact coordinate-ascent sweep; returns the log-Vandermonde gain.
  double sweep(bool global) {
    double gain = 0.0;
    for (std::size_t k = 0; k < phi_.size(); ++k) gain += update(k, global);
    return gain;
  }

  const std::vector<double>& phi() const { return phi_; }

 private:
  double g(std::size_t k, double x) const {
    double acc = 0.0;
    for (std::size_t j = 0; j < phi_.size(); ++j)
      if (j != k) acc += log_chord(x, phi_[j]);
    return acc;
  }
  double dg(std::size_t k, double x, double* d2) const {
    double d = 0.0, dd = 0.0;
    for (std::size_t j = 0; j < phi_.size(); ++j) {
      if (j == k) continue;
      const double h = 0.5 * (x - phi_[j]);
      const double s = std::sin(h), c = std::cos(h);
      d += 0.5 * c / s;
      dd -= 0.25 / (s * s);
    }
    if (d2) *d2 = dd;
    return d;
  }

  // Maximizer of the concave restriction to [a, b].
  double argmax(std::size_t k, const Interval& iv) const {
    if (!iv.sing_a && dg(k, iv.a, nullptr) <= 0.0) return iv.a;
    if (!iv.sing_b && dg(k, iv.b, nullptr) >= 0.0) return iv.b;
    double lo = iv.a, hi = iv.b, x = 0.5 * (iv.a + iv.b);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(x)); ++it) {
      double dd = 0.0;
      const double d = dg(k, x, &dd);
      if (d > 0.0)
        lo = x;
      else if (d < 0.0)
        hi = x;
      else
        return x;
      double nx = x - d / dd;
      if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
      if (std::abs(nx - x) < 1e-16 * (1.0 + std::abs(x))) return nx;
      x = nx;
    }
    return x;
  }

  void intervals_in_arc(std::size_t k, int a, std::vector<Interval>& out) const {
    const Arc& arc = set_.arcs()[a];
    const double lo = arc.center - arc.half_width, hi = arc.center + arc.half_width;
    std::vector<double> cuts;
    for (std::size_t j = 0; j < phi_.size(); ++j)
      if (j != k && arc_[j] == a) cuts.push_back(phi_[j]);
    std::sort(cuts.begin(), cuts.end());
    double left = lo;
    bool sing_left = false;
    for (double c : cuts) {
      if (c > left) out.push_back({left, c, sing_left, true});
      left = c;
      sing_left = true;
    }
    if (hi > left) out.push_back({left, hi, sing_left, false});
  }

  double update(std::size_t k, bool global) {
    const double current = g(k, phi_[k]);
    std::vector<Interval> cand;
    if (global) {
      for (int a = 0; a < static_cast<int>(set_.arcs().size()); ++a) intervals_in_arc(k, a, cand);
    } else {
      std::vector<Interval> all;
      intervals_in_arc(k, arc_[k], all);
      for (const auto& iv : all)
        if (phi_[k] >= iv.a && phi_[k] <= iv.b) cand.push_back(iv);
    }
    double best = current, best_x = phi_[k];
    int best_arc = arc_[k];
    for (const auto& iv : cand) {
      const double x = argmax(k, iv);
      const double v = g(k, x);
      if (v > best) {
        best = v;
        best_x = x;
        // Locate the arc owning this interval.
        for (int a = 0; a < static_cast<int>(set_.arcs().size()); ++a) {
          const Arc& arc = set_.arcs()[a];
          if (iv.a >= arc.center - arc.half_width - 1e-15 && iv.b <= arc.center + arc.half_width + 1e-15)
            best_arc = a;
        }
      }
    }
    if (best > current) {
      phi_[k] = best_x;
      arc_[k] = best_arc;
      return best - current;
    }
    return 0.0;
  }

  const ArcSet& set_;
  std::vector<double> phi_;
  std::vector<int> arc_;
};

// Points per arc in proportion to arc measure, largest remainder.
std::vector<int> allocate(const ArcSet& set, int n) {
  const auto& arcs = set.arcs();
  const double total = set.measure();
  std::vector<int> cnt(arcs.size());
  std::vector<std::pair<double, std::size_t>> rem;
  int used = 0;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const double share = n * 2.0 * arcs[a].half_width / total;
    cnt[a] = static_cast<int>(std::floor(share));
    used += cnt[a];
    rem.push_back({share - cnt[a], a});
  }
  std::sort(rem.begin(), rem.end(), [](auto& x, auto& y) { return x.first > y.first || (x.first == y.first && x.second < y.second); });
  for (std::size_t i = 0; used < n; ++i, ++used) cnt[rem[i % rem.size()].second]++;
  return cnt;
}

FeketeResult run_restart(const ArcSet& set, int n, const FeketeOptions& opts, int restart) {
  const auto& arcs = set.arcs();
  std::vector<double> phi;
  std::vector<int> arc_of;
  const std::vector<int> cnt = allocate(set, n);
  std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(static_cast<std::uint64_t>(restart) + 1)));
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const double c = arcs[a].center, w = arcs[a].half_width;
    const int m = cnt[a];
    const bool full = w >= kPi - 1e-12;
    std::vector<double> local;
    for (int i = 0; i < m; ++i) {
      double x;
      if (restart == 0) {
        if (full)
          x = c - kPi + kTwoPi * (i + 0.5) / m;
        else if (m == 1)
          x = c;
        else
          x = c - w * std::cos(kPi * i / (m - 1));
      } else {
        x = c + w * unif(rng);
      }
      local.push_back(x);
    }
    std::sort(local.begin(), local.end());
    for (double x : local) {
      phi.push_back(x);
      arc_of.push_back(static_cast<int>(a));
    }
  }
  FeketeState st(set, phi, arc_of);
  FeketeResult res;
  res.n = n;
  for (int s = 0; s < opts.max_sweeps; ++s) {
    const double gain = st.sweep(s % 10 == 0);
    if (gain < opts.tol && s % 10 != 0) {
      // Confirm with a global sweep before declaring convergence.
      if (st.sweep(true) < opts.tol) {
        res.converged = true;
        break;
      }
    }
  }
  res.points = st.phi();
  res.log_v = st.log_v();
  res.tau_n = std::exp(2.0 * res.log_v / (static_cast<double>(n) * (n - 1)));
  return res;
}

}  // namespace

ArcSet::ArcSet(std::vector<Arc> arcs) {
  if (arcs.empty()) throw InvalidParameter("arc set must be nonempty");
  double total = 0.0;
  for (auto& a : arcs) {
    if (!(a.half_width > 0.0 && a.half_width <= kPi + 1e-12))
      throw InvalidParameter("arc half-width must lie in (0, pi]");
    a.half_width = std::min(a.half_width, kPi);
    a.center = wrap(a.center);
    total += 2.0 * a.half_width;
  }
  if (total > kTwoPi + 1e-9) throw InvalidParameter("arc set measure exceeds 2pi");
  std::sort(arcs.begin(), arcs.end(), [](const Arc& x, const Arc& y) { return x.center < y.center; });
  for (std::size_t i = 0; i < arcs.size() && arcs.size() > 1; ++i) {
    const Arc& x = arcs[i];
    const Arc& y = arcs[(i + 1) % arcs.size()];
    double gap = y.center - x.center;
    if (i + 1 == arcs.size()) gap += kTwoPi;
    if (gap < x.half_width + y.half_width - 1e-12) throw InvalidParameter("arcs must be disjoint");
  }
  arcs_ = std::move(arcs);
}

ArcSet ArcSet::parse(const std::string& text) {
  std::vector<Arc> arcs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw InvalidParameter("arc '" + item + "' must be center:angle");
    try {
      std::size_t u1 = 0, u2 = 0;
      const std::string cs = item.substr(0, colon), as = item.substr(colon + 1);
      const double c = std::stod(cs, &u1);
      const double angle = std::stod(as, &u2);
      if (u1 != cs.size() || u2 != as.size()) throw std::invalid_argument("trailing");
      arcs.push_back({c, 0.5 * angle});
    } catch (const std::logic_error&) {
      throw InvalidParameter("arc '" + item + "' must be center:angle");
    }
  }
  return ArcSet(std::move(arcs));
}

double ArcSet::measure() const {
  double m = 0.0;
  for (const auto& a : arcs_) m += 2.0 * a.half_width;
  return m;
}

bool ArcSet::contains(const ArcSet& other, double tol) const {
  for (const auto& o : other.arcs_) {
    bool inside = false;
    for (const auto& a : arcs_)
      if (std::abs(wrap(o.center - a.center)) + o.half_width <= a.half_width + tol) inside = true;
    if (!inside) return false;
  }
  return true;
}

std::string ArcSet::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < arcs_.size(); ++i) {
    if (i) os << ',';
    os << arcs_[i].center << ':' << 2.0 * arcs_[i].half_width;
  }
  return os.str();
}

double tau_arc(double theta) {
  if (!(theta > 0.0 && theta <= kTwoPi * (1.0 + 1e-12))) throw InvalidParameter("tau_arc: theta must lie in (0, 2pi]");
  return std::sin(std::min(theta, kTwoPi) / 4.0);
}

FeketeResult tau_fekete(const ArcSet& set, int n, const FeketeOptions& opts) {
  if (n < 2) throw InvalidParameter("tau_fekete: n must be at least 2");
  if (opts.restarts < 1) throw InvalidParameter("tau_fekete: restarts must be positive");
  std::vector<FeketeResult> runs(opts.restarts);
  parallel_for(opts.exec, runs.size(), [&](std::size_t r) { runs[r] = run_restart(set, n, opts, static_cast<int>(r)); });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].log_v > runs[best].log_v) best = r;
  FeketeResult out = runs[best];
  out.restarts = opts.restarts;
  return out;
}

FeketeLadder fekete_ladder(const ArcSet& set, int n_max, const FeketeOptions& opts) {
  if (n_max < 2) throw InvalidParameter("fekete_ladder: n_max must be at least 2");
  FeketeLadder out;
  out.monotone = true;
  for (int n = 2; n <= n_max; ++n) {
    out.steps.push_back(tau_fekete(set, n, opts));
    if (n > 2 && out.steps.back().tau_n > out.steps[out.steps.size() - 2].tau_n + 1e-9) out.monotone = false;
  }
  std::vector<const FeketeResult*> tail;
  for (const auto& s : out.steps)
    if (2 * s.n >= n_max && s.n >= 3) tail.push_back(&s);
  if (tail.size() >= 4) {
    Eigen::MatrixXd a(tail.size(), 3);
    Eigen::VectorXd y(tail.size());
    for (std::size_t i = 0; i < tail.size(); ++i) {
      const double n = tail[i]->n;
      a.row(i) << 1.0, std::log(n) / (n - 1.0), 1.0 / (n - 1.0);
      y(i) = std::log(tail[i]->tau_n);
    }
    out.tau_limit = std::exp(a.colPivHouseholderQr().solve(y)(0));
  }
  return out;
}

double scaling_lower_bound(double r, double pe, double tau) {
  if (!(r > 0.0)) throw InvalidParameter("scaling bound: r must be positive");
  if (!(pe >= 0.0 && pe < 1.0)) throw InvalidParameter("scaling bound: Pe must lie in [0, 1)");
  if (!(tau > 0.0 && tau < 1.0))
    throw HypothesisViolation(
        "scaling bound requires 0 < tau < 1: the support must be a finite union of arcs that is a "
        "proper subset of the unit circle");
  return r * (1.0 - pe) / (-std::log(tau));
}

ArcSet support_arcs(const ScalarPiecewiseSpectrum& spec) {
  std::vector<std::pair<double, double>> pos;
  for (const auto& s : spec.segments()) {
    if (!(s.level > 0.0)) continue;
    if (!pos.empty() && std::abs(pos.back().second - s.lo) < 1e-15)
      pos.back().second = s.hi;
    else
      pos.push_back({s.lo, s.hi});
  }
  if (pos.empty()) throw HypothesisViolation("spectrum has empty support");
  std::vector<Arc> arcs;
  for (auto [lo, hi] : pos) {
    const bool at0 = lo <= 1e-15, atpi = hi >= kPi - 1e-15;
    if (at0 && atpi)
      arcs.push_back({0.0, kPi});
    else if (at0)
      arcs.push_back({0.0, hi});
    else if (atpi)
      arcs.push_back({kPi, kPi - lo});
    else {
      arcs.push_back({0.5 * (lo + hi), 0.5 * (hi - lo)});
      arcs.push_back({-0.5 * (lo + hi), 0.5 * (hi - lo)});
    }
  }
  return ArcSet(std::move(arcs));
}

DecayFit prediction_decay_rate(const ScalarPiecewiseSpectrum& spec, const std::vector<int>& n_ladder) {
  if (n_ladder.size() < 2) throw InvalidParameter("prediction_decay_rate: need at least two ladder points");
  const int n_max = *std::max_element(n_ladder.begin(), n_ladder.end());
  if (*std::min_element(n_ladder.begin(), n_ladder.end()) < 0)
    throw InvalidParameter("prediction_decay_rate: ladder entries must be nonnegative");
  const ArcSet support = support_arcs(spec);
  const NoiselessLadder lad = noiseless_prediction_ladder(spec, n_max);

  DecayFit out;
  out.reliable_n = lad.reliable_n;
  for (int n : n_ladder)
    if (n <= lad.reliable_n) {
      out.n_used.push_back(n);
      out.var.push_back(lad.var[n]);
    }
  if (out.n_used.size() < 2)
    throw ToleranceNotMet("prediction_decay_rate: fewer than two ladder points are numerically reliable",
                          0.0, lad.reliable_n);
  const double m = static_cast<double>(out.n_used.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < out.n_used.size(); ++i) {
    mx += out.n_used[i] / m;
    my += std::log(out.var[i]) / m;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < out.n_used.size(); ++i) {
    sxy += (out.n_used[i] - mx) * (std::log(out.var[i]) - my);
    sxx += (out.n_used[i] - mx) * (out.n_used[i] - mx);
  }
  out.rate = std::exp(sxy / sxx);

  if (support.arcs().size() == 1) {
    out.support_tau = tau_arc(2.0 * support.arcs()[0].half_width);
  } else {
    FeketeOptions fo;
    fo.restarts = 4;
    out.support_tau = tau_fekete(support, 24, fo).tau_n;
  }
  if (out.support_tau < 1.0 - 1e-12) out.log_ratio = std::log(out.rate) / std::log(out.support_tau);
  return out;
}

double awgn_critical_rate(double snr) {
  if (!(snr > 0.0)) throw InvalidParameter("awgn exponent: snr must be positive");
  const long double s = snr;
  return static_cast<double>(std::log(0.5L + s / 4.0L + 0.5L * std::sqrt(1.0L + s * s / 4.0L)));
}

Exponent awgn_exponent(double rate, double snr) {
  if (!(snr > 0.0)) throw InvalidParameter("awgn exponent: snr must be positive");
  if (!(rate > 0.0)) throw InvalidParameter("awgn exponent: rate must be positive");
  Exponent out;
  const long double s = snr, R = rate;
  if (R >= std::log1p(s)) {
    out.above_capacity = R > std::log1p(s);
    return out;
  }
  if (rate >= awgn_critical_rate(snr)) {
    // Rearranged so that no term cancels at high snr.
    const long double u = std::exp(R);
    const long double q = 4.0L * u / (s * std::expm1(R));
    const long double root = std::sqrt(1.0L + q);
    const long double sm1 = q / (root + 1.0L);
    const long double e = s / u - 2.0L / (root + 1.0L) + R + std::log(sm1 / (root + 1.0L));
    out.value = static_cast<double>(std::max(0.0L, e));
  } else {
    const long double r = std::sqrt(1.0L + s * s / 4.0L);
    const long double d = 1.0L / (r + s / 2.0L);
    const long double e = 1.0L - d + std::log(0.5L * (1.0L + d)) + std::log(0.5L + s / 4.0L + 0.5L * r) - R;
    out.value = static_cast<double>(std::max(0.0L, e));
  }
  return out;
}

double rayleigh_inner(double rho, double snr, double rel_tol) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidParameter("rayleigh exponent: rho must lie in [0, 1]");
  if (!(snr > 0.0)) throw InvalidParameter("rayleigh exponent: snr must be positive");
  if (rho == 0.0) return 1.0;
  const double a = snr / (1.0 + rho);
  QuadOptions qo;
  qo.rel_tol = rel_tol;
  qo.abs_tol = 0.0;
  qo.exec = Exec::serial;
  std::vector<double> breaks;
  for (double c = 1.0; c / a < 1.0; c *= 10.0) breaks.push_back(c / a);
  auto f = [&](double t) { return std::pow(1.0 + a * t, -rho) * std::exp(-t); };
  const double h = integrate(f, 0.0, 1.0, breaks, qo).value;
  // Tail on [1, 60]; the e^{-t} weight leaves a remainder below e^{-60}.
  const double t = integrate(f, 1.0, 60.0, {2.0, 4.0, 8.0, 16.0, 32.0}, qo).value;
  return h + t;
}

Exponent rayleigh_exponent(double rate, double snr, double rel_tol) {
  if (!(rate > 0.0)) throw InvalidParameter("rayleigh exponent: rate must be positive");
  auto f = [&](double rho) { return -std::log(rayleigh_inner(rho, snr, rel_tol)) - rho * rate; };
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = 1.0;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-9) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    }
  }
  Exponent out;
  out.rho = 0.5 * (a + b);
  out.value = f(out.rho);
  const double f_end = f(1.0);
  if (f_end > out.value) {
    out.value = f_end;
    out.rho = 1.0;
  }
  if (out.value < 0.0) {
    out.value = 0.0;
    out.rho = 0.0;
  }
  return out;
}

}  // namespace blockfade
