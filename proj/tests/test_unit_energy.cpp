#include <gtest/gtest.h>

#include <cmath>

#include "blockfade/highsnr.hpp"
#include "blockfade/unit_energy.hpp"

using namespace blockfade;

namespace {

constexpr unsigned k12 = 0b011, k13 = 0b101, k123 = 0b111;

SpectralModel block_indep(int T) { return SpectralModel::constant_within_block(T, SpectralModel::scalar(flat_spectrum())); }

// Equal off-diagonals in R(0) and equal entries in R(1).
SpectralModel szasz_model(int T, double c, double d) {
  CMatrix r0 = CMatrix::Constant(T, T, c);
  r0.diagonal().setOnes();
  return SpectralModel::from_correlation(CorrelationSequence(T, {r0, CMatrix::Constant(T, T, d)}));
}

}  // namespace

TEST(Subsets, LabelAndParse) {
  EXPECT_EQ(subset_label(0b101), "{1,3}");
  EXPECT_EQ(parse_subset("1,3", 3), 0b101u);
  EXPECT_EQ(parse_subset("{1, 2,3}", 3), 0b111u);
  EXPECT_THROW(parse_subset("4", 3), InvalidParameter);
  EXPECT_THROW(parse_subset("", 3), InvalidParameter);
  EXPECT_THROW(parse_subset("a", 3), InvalidParameter);
}

TEST(Psi, Example5ClosedForms) {
  for (double rho : {0.3, 0.8}) {
    auto m = example5_model(rho);
    for (double s : {0.01, 1.0, 7.5, 100.0}) {
      EXPECT_NEAR(psi(m, k12, s), kPi * std::log1p(2 * s), 1e-12);
      EXPECT_NEAR(psi(m, k123, s), (kTwoPi / 3) * std::log(1 + 3 * s + 2 * s * s - 2 * rho * rho * s * s), 1e-12);
      EXPECT_NEAR(psi(m, k13, s), kPi * std::log((1 + s) * (1 + s) - rho * rho * s * s), 1e-12);
      EXPECT_NEAR(psi(m, 0b001, s), kTwoPi * std::log1p(s), 1e-12);
    }
  }
}

TEST(Psi, SingletonConstantWithinBlock) {
  auto m = block_indep(4);
  EXPECT_NEAR(psi(m, 0b0100, 3.0), kTwoPi * std::log(4.0), 1e-12);
  EXPECT_THROW(psi(m, 0, 3.0), InvalidParameter);
  EXPECT_THROW(psi(m, 0b10000, 3.0), InvalidParameter);
}

TEST(CpScan, Example5TieAtCrossover) {
  auto s = cp_scan(example5_model(0.8), 7.5);
  EXPECT_EQ(s.argmin, (std::vector<unsigned>{k12, k123}));
  EXPECT_EQ(s.entries.size(), 7u);
}

TEST(CpScan, Example5SmallRho) {
  for (double snr : {0.01, 1.0, 100.0}) {
    auto s = cp_scan(example5_model(0.3), snr);
    EXPECT_EQ(s.argmin, std::vector<unsigned>{k12}) << snr;
  }
}

TEST(CpScan, Example5UnitRho) {
  for (double snr : {0.1, 2.0, 50.0}) {
    auto s = cp_scan(example5_model(1.0), snr);
    EXPECT_EQ(s.argmin, std::vector<unsigned>{k123});
    EXPECT_NEAR(s.cp, 1 - std::log1p(3 * snr) / (3 * snr), 1e-12);
  }
}

TEST(CpScan, CpFromEntries) {
  auto s = cp_scan(SpectralModel::block_gauss_markov(3, 0.5, 0.9), 4.0);
  double mn = kInf;
  for (const auto& e : s.entries) mn = std::min(mn, e.psi);
  EXPECT_DOUBLE_EQ(s.cp, 1 - mn / (kTwoPi * 4.0));
  EXPECT_GT(s.cp, 0.0);
  EXPECT_LT(s.cp, 1.0);
  for (std::size_t i = 0; i < s.entries.size(); ++i) EXPECT_EQ(s.entries[i].mask, i + 1);
}

TEST(CpScan, RefusesLargeT) {
  try {
    cp_scan(block_indep(21), 1.0);
    FAIL();
  } catch (const InvalidParameter& e) {
    EXPECT_NE(std::string(e.what()).find("cp_full_set"), std::string::npos);
  }
  EXPECT_NEAR(cp_full_set(block_indep(21), 1.0), cp_block_indep_constant(21, 1.0), 1e-12);
}

TEST(CpScan, SerialParallelIdentical) {
  auto m = SpectralModel::block_gauss_markov(4, cplx(0.2, 0.4), 0.8);
  QuadOptions a;
  a.exec = Exec::serial;
  auto x = cp_scan(m, 3.0, a);
  auto y = cp_scan(m, 3.0);
  for (std::size_t i = 0; i < x.entries.size(); ++i) EXPECT_EQ(x.entries[i].psi, y.entries[i].psi);
  EXPECT_EQ(x.argmin, y.argmin);
}

TEST(ClosedForm, BlockIndependentConstant) {
  EXPECT_NEAR(cp_block_indep_constant(1, 1.0), 1 - std::log(2.0), 1e-15);
  EXPECT_NEAR(cp_block_indep_constant(1, 1.0), 0.306853, 1e-6);
  const double v = 1 - std::log(11.0) / 10;
  EXPECT_NEAR(cp_block_indep_constant(1, 10.0), v, 1e-15);
  EXPECT_NEAR(cp_block_indep_constant(2, 5.0), v, 1e-15);
  EXPECT_NEAR(cp_block_indep_constant(10, 1.0), v, 1e-15);
  EXPECT_GT(cp_block_indep_constant(1, 1e12), 1 - 1e-10);
  EXPECT_NEAR(cp_scan(block_indep(3), 2.0).cp, cp_block_indep_constant(3, 2.0), 1e-12);
}

TEST(ClosedForm, BlockGaussMarkov) {
  EXPECT_NEAR(cp_block_gauss_markov(3, 2.0, 0.0), cp_block_indep_constant(3, 2.0), 1e-15);
  // Arithmetic: b = 2.75, gamma0 = (2.75 + sqrt(6.5625)) / 2.
  const double g0 = (2.75 + std::sqrt(6.5625)) / 2;
  EXPECT_NEAR(cp_block_gauss_markov(1, 2.0, 0.5), 1 - std::log(g0) / 2, 1e-15);
  EXPECT_NEAR(cp_block_gauss_markov(1, 2.0, 0.5), 0.5116140749860877, 1e-15);
  auto m = SpectralModel::constant_within_block(1, SpectralModel::scalar_gauss_markov(0.5));
  EXPECT_NEAR(cp_scan(m, 2.0).cp, 0.5116140749860877, 1e-9);
  EXPECT_THROW(cp_block_gauss_markov(2, 1.0, 1.0), InvalidParameter);
}

TEST(ClosedForm, BlockGaussMarkovIncreasingInT) {
  for (double snr : {0.1, 1.0, 10.0}) {
    double prev = 0;
    for (int T = 1; T <= 8; ++T) {
      const double v = cp_block_gauss_markov(T, snr, cplx(0.0, 0.7));
      EXPECT_GT(v, prev);
      prev = v;
    }
  }
}

TEST(Properties, NondecreasingInSnr) {
  std::vector<SpectralModel> ms{example5_model(0.3), example5_model(0.8),
                                SpectralModel::block_gauss_markov(3, 0.5, 0.9),
                                SpectralModel::constant_within_block(2, SpectralModel::scalar_gauss_markov(0.9)),
                                szasz_model(3, 0.4, 0.2)};
  const auto grid = log_grid(1e-3, 1e4, 10);
  for (const auto& m : ms) {
    double prev = 0;
    for (double s : grid) {
      const double cp = cp_scan(m, s).cp;
      EXPECT_GE(cp, prev - 1e-12) << m.kind_name() << " " << s;
      EXPECT_GT(cp, 0.0);
      EXPECT_LT(cp, 1.0);
      prev = cp;
    }
  }
}

TEST(Properties, SzaszFullSetOptimal) {
  for (auto m : {szasz_model(3, 0.4, 0.2), szasz_model(4, 0.1, 0.05), szasz_model(3, 0.9, 0.0)}) {
    EXPECT_TRUE(szasz_symmetric(m));
    for (double s : log_grid(1e-3, 1e4, 8)) {
      auto sc = cp_scan(m, s);
      EXPECT_EQ(sc.argmin.back(), (1u << m.T()) - 1) << s;
      EXPECT_TRUE(sc.szasz_symmetric);
    }
  }
  EXPECT_FALSE(szasz_symmetric(example5_model(0.5)));
}

TEST(Properties, LowSnrFormIsUpperBound) {
  std::vector<SpectralModel> ms{example5_model(0.3), example5_model(0.8),
                                SpectralModel::block_gauss_markov(2, 0.6, 0.9)};
  for (const auto& m : ms)
    for (double s : log_grid(1e-3, 1e3, 7)) EXPECT_LE(cp_scan(m, s).cp, cp_low_asymptote(m, s) + 1e-9);
}

TEST(Properties, LimitsInSnr) {
  auto m = example5_model(0.8);
  EXPECT_LT(cp_scan(m, 1e-6).cp, 1e-5);
  EXPECT_GT(cp_scan(m, 1e9).cp, 0.99);
}

TEST(Asymptotes, Example5LowSnrSubset) {
  EXPECT_EQ(low_snr_optimal_subsets(example5_model(0.3)), std::vector<unsigned>{k12});
  EXPECT_EQ(low_snr_optimal_subsets(example5_model(0.8)), std::vector<unsigned>{k123});
}

TEST(Asymptotes, LowSnrMatchesExactAtMilli) {
  for (double rho : {0.3, 0.8}) {
    auto m = example5_model(rho);
    const double exact = cp_scan(m, 1e-3).cp;
    EXPECT_NEAR(cp_low_asymptote(m, 1e-3) / exact, 1.0, 0.05) << rho;
  }
}

TEST(Asymptotes, HighSnrSubsetAndValue) {
  // rank{1,2} = 1, rank{1,2,3} = 2: criteria 1 * 2pi / 2 and 2 * 2pi / 3.
  auto m = example5_model(0.8);
  EXPECT_EQ(high_snr_optimal_subsets(m, 1e4), std::vector<unsigned>{k12});
  EXPECT_EQ(cp_scan(m, 1e4).argmin, std::vector<unsigned>{k12});
  EXPECT_NEAR(cp_high_asymptote(m, 1e4), 1 - std::log(1e4) / (2 * 1e4), 1e-12);
  EXPECT_THROW(cp_high_asymptote(m, 0.5), InvalidParameter);
}

TEST(Crossover, Example5Formula) {
  for (double rho : {0.6, 0.8, 0.9}) {
    auto c = cp_crossover(example5_model(rho), k12, k123);
    ASSERT_EQ(c.size(), 1u) << rho;
    EXPECT_NEAR(c[0].snr / example5_crossover(rho), 1.0, 1e-6);
    EXPECT_LE(c[0].bracket_lo, c[0].snr);
    EXPECT_GE(c[0].bracket_hi, c[0].snr);
  }
  EXPECT_NEAR(example5_crossover(0.6), 0.625, 1e-15);
  EXPECT_TRUE(cp_crossover(example5_model(0.3), k12, k123).empty());
  EXPECT_THROW(example5_crossover(0.4), InvalidParameter);
}
