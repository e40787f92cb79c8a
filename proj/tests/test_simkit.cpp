#include <gtest/gtest.h>

#include <cmath>

#include "blockfade/prediction.hpp"
#include "blockfade/simkit.hpp"

using namespace blockfade;

namespace {

SimConfig config(const SpectralModel& m, int paths, int len, double snr = 1.0) {
  SimConfig c;
  c.model = &m;
  c.num_paths = paths;
  c.path_len = len;
  c.snr = snr;
  return c;
}

// Sample mean of h[a] conj(h[b]) over paths, with its standard error.
std::pair<cplx, double> sample_corr(const CMatrix& h, int a, int b) {
  const int n = static_cast<int>(h.rows());
  cplx m = 0;
  double sq = 0;
  for (int p = 0; p < n; ++p) {
    const cplx v = h(p, a) * std::conj(h(p, b));
    m += v;
    sq += std::norm(v);
  }
  m /= double(n);
  return {m, std::sqrt((sq / n - std::norm(m)) / n)};
}

}  // namespace

TEST(GeneratePaths, WhiteProcess) {
  auto m = SpectralModel::scalar(flat_spectrum());
  auto s = generate_paths(config(m, 20000, 8));
  auto [r0, e0] = sample_corr(s.h, 3, 3);
  auto [r1, e1] = sample_corr(s.h, 3, 4);
  EXPECT_NEAR(r0.real(), 1.0, 3 * e0);
  EXPECT_LT(std::abs(r1), 3 * e1 * std::sqrt(2.0));
  EXPECT_EQ(s.regularization, 0.0);
}

TEST(GeneratePaths, GaussMarkovLagOne) {
  auto m = SpectralModel::scalar_gauss_markov(0.9);
  auto s = generate_paths(config(m, 20000, 16));
  auto [r1, e1] = sample_corr(s.h, 8, 7);
  EXPECT_NEAR(r1.real(), 0.9, 3 * e1);
  auto [r4, e4] = sample_corr(s.h, 8, 4);
  EXPECT_NEAR(r4.real(), std::pow(0.9, 4), 3 * e4);
}

TEST(GeneratePaths, BlockGaussMarkovWithinBlock) {
  auto m = SpectralModel::block_gauss_markov(2, 0.3, 0.8);
  auto s = generate_paths(config(m, 20000, 8));
  auto [r, e] = sample_corr(s.h, 4, 5);
  EXPECT_NEAR(r.real(), 0.8, 3 * e);
  auto [x, ex] = sample_corr(s.h, 5, 6);
  // Last symbol of a block to the first of the next: rho1 alone.
  EXPECT_NEAR(x.real(), 0.3, 3 * ex);
}

TEST(GeneratePaths, NoiseVariance) {
  auto m = SpectralModel::scalar_gauss_markov(0.5);
  auto s = generate_paths(config(m, 20000, 4, 4.0));
  double acc = 0;
  for (int p = 0; p < 20000; ++p) acc += std::norm(s.y(p, 2) - s.h(p, 2));
  EXPECT_NEAR(acc / 20000, 0.25, 0.25 * 3 / std::sqrt(20000.0));
}

TEST(GeneratePaths, SerialParallelBitExact) {
  auto m = SpectralModel::block_gauss_markov(2, 0.6, 0.9);
  auto a = config(m, 300, 12), b = a;
  a.exec = Exec::serial;
  auto x = generate_paths(a), y = generate_paths(b);
  EXPECT_TRUE((x.h.array() == y.h.array()).all());
  EXPECT_TRUE((x.y.array() == y.y.array()).all());
  b.seed = 2;
  EXPECT_FALSE((generate_paths(b).h.array() == x.h.array()).all());
}

TEST(EmpiricalVariance, MatchesAnalytic) {
  auto m = SpectralModel::scalar_gauss_markov(0.9);
  auto r = empirical_prediction_variance(config(m, 10000, 80, 10.0), 64);
  ASSERT_EQ(r.mean.size(), 1u);
  EXPECT_NEAR(r.mean[0], r.analytic[0], 3 * r.stderr_[0]);
  const double sig = per_symbol_sigmas(m, 10.0, 64).sigmas[0];
  EXPECT_NEAR(r.analytic[0], sig, 1e-9);
}

TEST(EmpiricalVariance, BlockPositions) {
  auto m = SpectralModel::block_gauss_markov(2, 0.5, 0.8);
  auto r = empirical_prediction_variance(config(m, 5000, 40, 5.0), 30);
  ASSERT_EQ(r.mean.size(), 2u);
  for (int i = 0; i < 2; ++i) EXPECT_NEAR(r.mean[i], r.analytic[i], 3 * r.stderr_[i]) << i;
  EXPECT_GT(r.analytic[0], r.analytic[1]);
}

TEST(PilotVariance, InverseSnrSlope) {
  // Equal fading within a block: the pilot fixes the target up to noise.
  auto m = SpectralModel::constant_within_block(2, SpectralModel::scalar(flat_spectrum()));
  auto at = [&](double snr) { return empirical_pilot_variance(config(m, 4000, 4, snr), 1, {0}); };
  const auto lo = at(1e2), hi = at(1e4);
  EXPECT_NEAR(lo.analytic, 1.0 / 101, 1e-12);
  EXPECT_NEAR(lo.mean, lo.analytic, 3 * lo.stderr_);
  EXPECT_NEAR(hi.mean, hi.analytic, 3 * hi.stderr_);
  EXPECT_NEAR(std::log(hi.mean / lo.mean) / std::log(100.0), -1.0, 0.05);
}

TEST(PilotVariance, RegularProcessFloors) {
  auto m = SpectralModel::scalar_gauss_markov(0.9);
  auto r = empirical_pilot_variance(config(m, 4000, 9, 1e6), 4, {0, 8});
  EXPECT_NEAR(r.mean, r.analytic, 3 * r.stderr_);
  EXPECT_GT(r.analytic, 0.1);
}

TEST(Simkit, InputErrors) {
  auto m = SpectralModel::block_gauss_markov(2, 0.5, 0.8);
  EXPECT_THROW(generate_paths(SimConfig{}), InvalidParameter);
  EXPECT_THROW(generate_paths(config(m, 10, 7)), InvalidParameter);
  EXPECT_THROW(generate_paths(config(m, 0, 8)), InvalidParameter);
  EXPECT_THROW(generate_paths(config(m, 10, 8, 0.0)), InvalidParameter);
  EXPECT_THROW(generate_paths(config(m, 10, 8, kInf)), InvalidParameter);
  EXPECT_THROW(empirical_prediction_variance(config(m, 50, 40), 8), InvalidParameter);
  EXPECT_THROW(empirical_prediction_variance(config(m, 200, 8), 8), InvalidParameter);
  EXPECT_THROW(empirical_pilot_variance(config(m, 200, 8), 8, {0}), InvalidParameter);
  EXPECT_THROW(empirical_pilot_variance(config(m, 200, 8), 1, {}), InvalidParameter);
}
