#include "blockfade/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

namespace blockfade {

namespace {

using Rule = boost::math::quadrature::gauss<double, 10>;

double gauss_panel(const std::function<double(double)>& f, double a, double b) {
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] == 0.0) {
      sum += w[k] * f(c);
    } else {
      sum += w[k] * (f(c - h * x[k]) + f(c + h * x[k]));
    }
  }
  return sum * h;
}

struct Panel {
  double a, b;
  double coarse;  // one rule over [a, b]
};

struct Refined {
  double left, right;
};

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const std::vector<double>& breaks, const QuadOptions& opts) {
  if (!(b > a)) return {};
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> pending;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double w = (cuts[s + 1] - cuts[s]) / opts.initial_panels;
    for (int k = 0; k < opts.initial_panels; ++k) {
      const double lo = cuts[s] + k * w;
      const double hi = (k + 1 == opts.initial_panels) ? cuts[s + 1] : lo + w;
      pending.push_back({lo, hi, 0.0});
    }
  }
  {
    std::vector<double> coarse(pending.size());
    parallel_for(opts.exec, pending.size(), [&](std::size_t i) {
      coarse[i] = gauss_panel(f, pending[i].a, pending[i].b);
    });
    for (std::size_t i = 0; i < pending.size(); ++i) pending[i].coarse = coarse[i];
  }

  const double length = b - a;
  double scale = 0.0;
  for (const auto& p : pending) scale += std::abs(p.coarse);
  const double budget = std::max(opts.abs_tol, opts.rel_tol * scale);

  // Accepted panels keyed by left endpoint so the final sum has a fixed order.
  std::vector<std::pair<double, double>> accepted;
  double err = 0.0;
  int total = static_cast<int>(pending.size());

  while (!pending.empty()) {
    std::vector<Refined> refined(pending.size());
    parallel_for(opts.exec, pending.size(), [&](std::size_t i) {
      const double m = 0.5 * (pending[i].a + pending[i].b);
      refined[i] = {gauss_panel(f, pending[i].a, m), gauss_panel(f, m, pending[i].b)};
    });
    std::vector<Panel> next;
    for (std::size_t i = 0; i < pending.size(); ++i) {
      const Panel& p = pending[i];
      const double fine = refined[i].left + refined[i].right;
      const double diff = std::abs(fine - p.coarse);
      // Width share of the global budget, or the panel's own relative share;
      // either keeps the summed error within about twice the budget.
      const double allowed = std::max(budget * (p.b - p.a) / length, 0.5 * opts.rel_tol * std::abs(fine));
      if (!std::isfinite(fine)) {
        throw ToleranceNotMet("quadrature: non-finite integrand", fine, kInf);
      }
      if (diff <= allowed) {
        accepted.emplace_back(p.a, fine);
        err += diff;
      } else {
        const double m = 0.5 * (p.a + p.b);
        next.push_back({p.a, m, refined[i].left});
        next.push_back({m, p.b, refined[i].right});
      }
    }
    total += static_cast<int>(next.size());
    if (total > opts.max_panels) {
      double est = 0.0;
      double rest = 0.0;
      for (const auto& [x, v] : accepted) est += v;
      for (const auto& p : next) {
        est += p.coarse;
        rest += std::abs(p.coarse);
      }
      std::ostringstream msg;
      msg << "quadrature: panel cap " << opts.max_panels << " reached before tolerance "
          << opts.rel_tol;
      throw ToleranceNotMet(msg.str(), est, err + opts.rel_tol * rest);
    }
    pending = std::move(next);
  }

  std::sort(accepted.begin(), accepted.end());
  QuadResult out;
  for (const auto& [x, v] : accepted) out.value += v;
  out.error = err;
  out.panels = static_cast<int>(accepted.size());
  return out;
}

}  // namespace blockfade
