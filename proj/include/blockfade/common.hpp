#pragma once

#include <complex>
#include <cstddef>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace blockfade {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kEulerGamma = 0.5772156649015329;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Base for every library error; the CLI maps these to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter outside an operation's precondition.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Model violates a structural hypothesis (PSD, normalization, regularity).
class HypothesisViolation : public Error {
 public:
  using Error::Error;
};

class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(const std::string& what, double estimate, double achieved)
      : Error(what), estimate_(estimate), achieved_(achieved) {}
  double estimate() const { return estimate_; }
  double achieved() const { return achieved_; }

 private:
  double estimate_;
  double achieved_;
};

enum class Exec { serial, parallel };

// Runs f(i) for i in [0, n). The parallel branch must yield results identical
// to the serial one: f writes only to slot i of caller-owned storage.
template <class F>
void parallel_for(Exec exec, std::size_t n, F&& f) {
  if (exec == Exec::serial || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    try {
      f(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// log det of a Hermitian matrix; Cholesky first, eigenvalue sum clamped at
// 1e-300 when the factorization fails.
double hermitian_logdet(const CMatrix& a);

}  // namespace blockfade
