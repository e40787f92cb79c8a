#pragma once

#include <functional>
#include <vector>

#include "blockfade/common.hpp"

namespace blockfade {

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-13;
  int initial_panels = 8;  // per smooth piece
  int max_panels = 1 << 15;
  Exec exec = Exec::parallel;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;  // achieved, not requested
  int panels = 0;
};

// Adaptive composite Gauss-Legendre on [a, b]. `breaks` are interior points
// where f may be nonsmooth; panels never straddle them. Each round refines all
// unconverged panels at once, so panel evaluations are independent.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const std::vector<double>& breaks = {},
                     const QuadOptions& opts = {});

}  // namespace blockfade
