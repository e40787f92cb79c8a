#include <gtest/gtest.h>

#include <cmath>

#include "blockfade/highsnr.hpp"
#include "blockfade/prediction.hpp"
#include "blockfade/unit_energy.hpp"

using namespace blockfade;

namespace {

ScalarPiecewiseSpectrum half_zero() { return ScalarPiecewiseSpectrum({{0, kPi / 2, 0.0}, {kPi / 2, kPi, 2.0}}); }

// (1/2pi) integral log[s + nu] for scalar Gauss-Markov: log of the larger root
// of c^2 - b c + nu^2 rho^2 with b = 1 - rho^2 + nu (1 + rho^2).
double gm_logdet_oracle(double rho, double nu) {
  const double b = 1 - rho * rho + nu * (1 + rho * rho);
  return std::log((b + std::sqrt(b * b - 4 * nu * nu * rho * rho)) / 2);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST(LogdetSigma, FlatSpectrum) {
  auto m = SpectralModel::scalar(flat_spectrum());
  EXPECT_NEAR(logdet_sigma(m, 4.0).value, std::log(1.25), 1e-15);
}

TEST(LogdetSigma, GaussMarkovNoiseless) {
  EXPECT_NEAR(logdet_sigma(SpectralModel::scalar_gauss_markov(0.9), kInf).value, std::log(0.19), 1e-9);
}

TEST(LogdetSigma, GaussMarkovNoisyMatchesClosedForm) {
  auto m = SpectralModel::scalar_gauss_markov(0.9);
  EXPECT_NEAR(gm_logdet_oracle(0.9, 0.1), -1.0564027395357101, 1e-15);
  for (double nu : {1e-3, 0.1, 2.0}) {
    auto r = logdet_sigma(m, 1.0 / nu);
    EXPECT_NEAR(r.value, gm_logdet_oracle(0.9, nu), 1e-9) << nu;
    EXPECT_LT(r.error, 1e-8);
  }
}

TEST(LogdetSigma, SingularOnPositiveMeasureIsMinusInf) {
  EXPECT_EQ(logdet_sigma(SpectralModel::scalar(half_zero()), kInf).value, -kInf);
  auto cwb = SpectralModel::constant_within_block(2, SpectralModel::scalar(flat_spectrum()));
  EXPECT_EQ(logdet_sigma(cwb, kInf).value, -kInf);
}

TEST(LogdetSigma, RejectsNonPositiveSnr) {
  EXPECT_THROW(logdet_sigma(SpectralModel::scalar(flat_spectrum()), 0.0), InvalidParameter);
}

TEST(LogdetSigma, BoundedByFloorAndPrior) {
  std::vector<SpectralModel> ms{SpectralModel::scalar_gauss_markov(0.99),
                                SpectralModel::block_gauss_markov(3, 0.5, 0.9),
                                example5_model(0.8), SpectralModel::scalar(half_zero())};
  for (const auto& m : ms) {
    for (double snr : {0.1, 10.0, 1e4}) {
      const double T = m.T();
      const double ld = logdet_sigma(m, snr).value;
      EXPECT_GT(ld, -T * std::log(snr));
      EXPECT_LE(ld, T * std::log1p(1 / snr) + 1e-12);
    }
  }
}

TEST(Sigmas, NoHistoryIsPriorPlusNoise) {
  auto s = per_symbol_sigmas(SpectralModel::block_gauss_markov(3, 0.4, 0.9), 10.0, 0);
  ASSERT_EQ(s.sigmas.size(), 3u);
  for (double v : s.sigmas) EXPECT_NEAR(v, 1.1, 1e-15);
}

TEST(Sigmas, GaussMarkovConvergesToDeterminant) {
  auto m = SpectralModel::scalar_gauss_markov(0.9);
  auto s = per_symbol_sigmas(m, 10.0, 512);
  const double target = std::exp(gm_logdet_oracle(0.9, 0.1));
  EXPECT_NEAR(target, 0.347704346428, 1e-12);
  EXPECT_NEAR(s.sigmas[0], target, 1e-6);
  EXPECT_LT(s.ldl_gap, 1e-8);
  EXPECT_FALSE(s.convergence_warning);
}

TEST(Sigmas, BlockIndependentConstantHandMmse) {
  auto m = SpectralModel::constant_within_block(2, SpectralModel::scalar(flat_spectrum()));
  for (double snr : {0.5, 3.0, 40.0}) {
    auto s = per_symbol_sigmas(m, snr, 6);
    EXPECT_NEAR(s.sigmas[0], 1 + 1 / snr, 1e-12);
    EXPECT_NEAR(s.sigmas[1], 1 / (snr + 1) + 1 / snr, 1e-12);
    EXPECT_NEAR(s.ldl_gap, 0.0, 1e-12);
  }
}

TEST(Sigmas, BlockGaussMarkovFrozenOracle) {
  auto s = per_symbol_sigmas(SpectralModel::block_gauss_markov(2, 0.5, 0.8), 5.0, 400);
  EXPECT_NEAR(s.sigmas[0], 0.9848944279058529, 1e-10);
  EXPECT_NEAR(s.sigmas[1], 0.6620073663992265, 1e-10);
  EXPECT_NEAR(s.logdet_sigma_snr, -0.42769941896098457, 1e-9);
  EXPECT_LT(s.ldl_gap, 1e-8);
}

TEST(Sigmas, CorrelationOverloadAgrees) {
  auto c = block_gauss_markov_correlation(2, 0.5, 0.8, 300);
  auto a = per_symbol_sigmas(c, 5.0, 64);
  auto b = per_symbol_sigmas(SpectralModel::block_gauss_markov(2, 0.5, 0.8), 5.0, 64);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(a.sigmas[i], b.sigmas[i], 1e-12);
}

TEST(Sigmas, NonincreasingInHistoryAndAboveFloor) {
  auto m = SpectralModel::block_gauss_markov(3, cplx(0.3, 0.6), 0.95);
  const double snr = 20.0;
  std::vector<double> prev(3, kInf);
  for (int n : {1, 2, 4, 8, 16, 32, 64}) {
    auto s = per_symbol_sigmas(m, snr, n);
    for (int i = 0; i < 3; ++i) {
      EXPECT_LE(s.sigmas[i], prev[i] + 1e-14) << "n=" << n;
      EXPECT_GE(s.sigmas[i] * snr, 1.0);
      prev[i] = s.sigmas[i];
    }
  }
}

TEST(Sigmas, SandwichScalar) {
  for (double rho : {0.2, 0.7, 0.99}) {
    auto m = SpectralModel::scalar_gauss_markov(rho);
    const double inf = std::exp(logdet_sigma(m, kInf).value);
    for (double snr : {0.3, 3.0, 300.0}) {
      const double v = std::exp(logdet_sigma(m, snr).value);
      EXPECT_LE(inf + 1 / snr, v + 1e-12);
      EXPECT_LE(v, 1 + 1 / snr + 1e-12);
    }
  }
}

TEST(Sigmas, SandwichUpperBlock) {
  auto m = SpectralModel::block_gauss_markov(3, 0.6, 0.85);
  for (double snr : {0.3, 3.0, 300.0}) {
    CMatrix r0 = m.correlation(0);
    r0.diagonal().array() += 1 / snr;
    EXPECT_LE(logdet_sigma(m, snr).value, hermitian_logdet(r0) + 1e-12);
  }
}

TEST(Sigmas, ExtrapolationReported) {
  SigmaOptions o;
  o.extrapolate = true;
  auto s = per_symbol_sigmas(SpectralModel::scalar_gauss_markov(0.95), 10.0, 16, o);
  ASSERT_EQ(s.sigmas_extrapolated.size(), 1u);
  const double target = std::exp(gm_logdet_oracle(0.95, 0.1));
  EXPECT_LT(std::abs(s.sigmas_extrapolated[0] - target), std::abs(s.sigmas[0] - target));
}

TEST(Sigmas, SerialParallelBitIdentical) {
  auto m = SpectralModel::block_gauss_markov(4, 0.5, 0.9);
  SigmaOptions a, b;
  a.exec = Exec::serial;
  a.quad.exec = Exec::serial;
  auto x = per_symbol_sigmas(m, 7.0, 40, a);
  auto y = per_symbol_sigmas(m, 7.0, 40, b);
  EXPECT_EQ(x.sigmas, y.sigmas);
  EXPECT_EQ(x.logdet_sigma_snr, y.logdet_sigma_snr);
}

TEST(ConditionalMmse, SelfPilot) {
  auto m = SpectralModel::scalar_gauss_markov(0.5);
  for (double snr : {0.1, 1.0, 100.0})
    EXPECT_NEAR(conditional_mmse_variance(m, 3, {3}, snr), 1 / (1 + snr), 1e-14);
}

TEST(ConditionalMmse, UncorrelatedPilotsUseless) {
  auto m = SpectralModel::constant_within_block(2, SpectralModel::scalar(flat_spectrum()));
  EXPECT_DOUBLE_EQ(conditional_mmse_variance(m, 0, {2, 3, 5}, 10.0), 1.0);
}

TEST(ConditionalMmse, RankDeficientPilotsScaleAsInverseSnr) {
  // R(0) of rank 2; pilots {1, 3} span it, target 2 duplicates symbol 1.
  auto m = example5_model(0.6);
  std::vector<double> x, y;
  for (double snr : log_grid(1e2, 1e5, 7)) {
    x.push_back(std::log(snr));
    y.push_back(std::log(conditional_mmse_variance(m, 1, {0, 2}, snr)));
  }
  EXPECT_NEAR(ls_slope(x, y), -1.0, 0.05);
  EXPECT_EQ(conditional_mmse_variance(m, 1, {0, 2}, kInf), 0.0);
}

TEST(ConditionalMmse, RejectsEmptyPilots) {
  EXPECT_THROW(conditional_mmse_variance(SpectralModel::scalar_gauss_markov(0.5), 0, {}, 1.0),
               InvalidParameter);
}

TEST(NoisyScalar, FlatIsUseless) {
  for (double x : {0.5, 3.0, 1e3}) EXPECT_NEAR(scalar_noisy_prediction_variance(flat_spectrum(), x), 1.0, 1e-12);
}

TEST(NoisyScalar, SThetaExpansion) {
  // alpha = pi, theta = snr^0.5, x_min = sqrt(snr)/2: e^{c/2pi} = 2, kappa = 3/4.
  double prev = kInf;
  for (double snr : {1e4, 1e6, 1e8}) {
    const auto spec = s_theta_family(kPi, std::sqrt(snr));
    const double v = scalar_noisy_prediction_variance(spec, std::sqrt(snr) / 2);
    const double lead = 2 * std::pow(snr, -0.75) - 4 / snr;
    const double rel = std::abs(v - lead) * std::pow(snr, 0.75);
    EXPECT_LT(rel, prev) << snr;
    prev = rel;
  }
  EXPECT_LT(prev, 1e-2);
}

TEST(NoisyScalar, TwoLevelClosedFormTermByTerm) {
  const auto spec = two_level_spectrum(1e-6, 1e-3, 0.3, 0.6);
  for (double snr : {1e2, 1e5, 1e8}) {
    const double x = std::sqrt(snr) / 2;
    EXPECT_NEAR(scalar_noisy_prediction_variance(spec, x),
                two_level_variance(1e-6, 1e-3, 0.3, 0.6, 1 / (x * x)), 1e-12);
  }
}

TEST(NoiselessLadder, FlatConstant) {
  auto l = noiseless_prediction_ladder(flat_spectrum(), 20);
  ASSERT_EQ(l.var.size(), 21u);
  for (double v : l.var) EXPECT_NEAR(v, 1.0, 1e-30);
}

TEST(NoiselessLadder, AgreesWithDoubleSolveAtSmallN) {
  const auto spec = ScalarPiecewiseSpectrum({{0, 1.0, 0.5}, {1.0, kPi, (kPi - 0.5) / (kPi - 1.0)}});
  auto l = noiseless_prediction_ladder(spec, 8);
  auto m = SpectralModel::scalar(spec);
  for (int n = 1; n <= 8; ++n) EXPECT_NEAR(l.var[n], conditional_mmse_variance(m, n, [&] {
                                             std::vector<long> p;
                                             for (int k = 0; k < n; ++k) p.push_back(k);
                                             return p;
                                           }(), kInf), 1e-10);
}

TEST(NoiselessLadder, StopsAtRatioCap) {
  auto l = noiseless_prediction_ladder(half_zero(), 200, 1e12);
  EXPECT_LT(l.reliable_n, 200);
  EXPECT_LE(l.var.front() / l.var.back(), 1e12);
  for (std::size_t k = 1; k < l.var.size(); ++k) EXPECT_LE(l.var[k], l.var[k - 1]);
}

TEST(WindowCovariance, HermitianWithNoiseOnDiagonal) {
  auto m = SpectralModel::block_gauss_markov(2, cplx(0.2, 0.5), 0.8);
  const CMatrix k = window_covariance(m, -3, 7, 0.25);
  EXPECT_LT((k - k.adjoint()).norm(), 1e-15);
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(k(i, i).real(), 1.25, 1e-15);
}
