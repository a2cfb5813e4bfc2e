#include "cmvlab/approximation.hpp"

#include <gtest/gtest.h>

using namespace cmv;

TEST(Constant, FreeSequence) {
  auto s = constant_seq(0.0);
  for (long n = -5; n <= 5; ++n) EXPECT_EQ(s(n), cplx(0.0));
  EXPECT_EQ(s.sup_norm_bound(), 0.0);
}

TEST(Constant, RealAndComplexValues) {
  auto s = constant_seq(0.5);
  EXPECT_EQ(s(-3), cplx(0.5));
  EXPECT_EQ(s.sup_norm_bound(), 0.5);
  auto c = constant_seq({0.3, 0.4});
  EXPECT_EQ(c(7), cplx(0.3, 0.4));
  EXPECT_NEAR(c.sup_norm_bound(), 0.5, 1e-15);
  EXPECT_EQ(c.period(), 1);
}

TEST(Constant, RejectsClosedDisk) {
  EXPECT_THROW(constant_seq(1.0), ValidationError);
  EXPECT_THROW(constant_seq({0.8, 0.6}), ValidationError);
}

TEST(Quasiperiodic, Examples) {
  const double beta = (std::sqrt(5.0) - 1.0) / 2.0;
  auto f = quasiperiodic_seq(0.0, beta, 0.3);
  EXPECT_EQ(std::abs(f(11)), 0.0);
  auto s = quasiperiodic_seq(0.5, beta, 0.0);
  EXPECT_NEAR(std::abs(s(0) - cplx(0.5)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s(1) - std::polar(0.5, two_pi * beta)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s(1)), 0.5, 1e-15);
  EXPECT_FALSE(s.period().has_value());
  EXPECT_THROW(quasiperiodic_seq(1.0, beta, 0.0), ValidationError);
}

TEST(Quasiperiodic, PhaseReductionKeepsLargeIndicesAccurate) {
  const double beta = std::numbers::sqrt2 - 1.0;
  auto s = quasiperiodic_seq(0.5, beta, 0.1);
  const long n = 123456789;
  const long double ph = static_cast<long double>(n) * beta + 0.1L;
  const double frac = static_cast<double>(ph - std::floor(ph));
  EXPECT_NEAR(std::abs(s(n) - std::polar(0.5, two_pi * frac)), 0.0, 1e-7);
}

TEST(Periodize, Examples) {
  auto p = periodize(constant_seq(0.5), 4);
  for (long j = -6; j < 6; ++j) EXPECT_EQ(p(j), cplx(0.5));
  EXPECT_EQ(p.period(), 4);

  auto qp = quasiperiodic_seq(0.5, (std::sqrt(5.0) - 1.0) / 2.0, 0.0);
  EXPECT_EQ(periodize(qp, 2)(-2), qp(0));

  auto s = quasiperiodic_seq(0.4, 0.3819660112501051, 0.2);
  EXPECT_EQ(periodize(s, 3)(5), s(2));
  EXPECT_THROW(periodize(s, 0), ValidationError);
}

TEST(PeriodicTable, PeriodAndBound) {
  auto t = periodic_table({0.1, cplx(0.0, -0.7), 0.2});
  EXPECT_EQ(t.period(), 3);
  EXPECT_NEAR(t.sup_norm_bound(), 0.7, 1e-15);
  for (long n = -9; n < 9; ++n) EXPECT_EQ(t(n + 3), t(n));
  EXPECT_THROW(periodic_table({}), ValidationError);
  EXPECT_THROW(periodic_table({0.1, 1.0}), ValidationError);
}

TEST(RandomPeriodic, SeededAndBounded) {
  auto a = random_periodic(6, 0.7, 42), b = random_periodic(6, 0.7, 42), c = random_periodic(6, 0.7, 43);
  bool differs = false;
  for (long n = 0; n < 6; ++n) {
    EXPECT_EQ(a(n), b(n));
    EXPECT_LE(std::abs(a(n)), 0.7);
    EXPECT_EQ(a(n + 6), a(n));
    differs = differs || a(n) != c(n);
  }
  EXPECT_TRUE(differs);
  EXPECT_THROW(random_periodic(0, 0.5, 1), ValidationError);
  EXPECT_THROW(random_periodic(4, 1.0, 1), ValidationError);
}

TEST(PasturTkachenko, ZeroLevelsIsSingleStage) {
  auto fam = pastur_tkachenko_family(0.1, gaussian_decay(0.1, 2), 2, 0);
  ASSERT_EQ(fam.stages.size(), 1u);
  for (long j = -4; j < 4; ++j) EXPECT_EQ(fam.limit(j), fam.stages[0].seq(j));
}

TEST(PasturTkachenko, ZeroBaseAndIncrementsGivesEqualStages) {
  auto fam = pastur_tkachenko_family(0.0, [](int) { return 0.0; }, 2, 3);
  for (const auto& s : fam.stages)
    for (long j = 0; j < 16; ++j) EXPECT_EQ(s.seq(j), fam.stages[0].seq(j));
}

TEST(PasturTkachenko, FourToTheMinusQIncrements) {
  auto decay = [](int n) { return 0.1 * std::pow(4.0, -static_cast<double>(2L << (n + 1))); };
  auto fam = pastur_tkachenko_family(0.1, decay, 2, 3);
  ASSERT_EQ(fam.stages.size(), 4u);
  const double expected[] = {0.1 * std::pow(4.0, -4), 0.1 * std::pow(4.0, -8), 0.1 * std::pow(4.0, -16)};
  for (std::size_t n = 1; n < fam.stages.size(); ++n) {
    double sup = 0.0;
    for (long j = 0; j < 64; ++j) sup = std::max(sup, std::abs(fam.stages[n].seq(j) - fam.stages[n - 1].seq(j)));
    EXPECT_NEAR(sup / expected[n - 1], 1.0, 1e-6) << "stage " << n;
    EXPECT_EQ(fam.stages[n].period, 2L << n);
  }
}

TEST(PasturTkachenko, InvariantsHold) {
  auto fam = pastur_tkachenko_family(0.1, gaussian_decay(0.1, 2), 2, 4);
  fam.validate();
  double prev = 1e300;
  for (std::size_t n = 0; n < fam.stages.size(); ++n) {
    const auto& s = fam.stages[n];
    double sup = 0.0;
    for (long j = -40; j < 40; ++j) {
      EXPECT_LE(std::abs(s.seq(j)), s.seq.sup_norm_bound());
      EXPECT_EQ(s.seq(j + s.period), s.seq(j));
      sup = std::max(sup, std::abs(fam.stage_minus_limit(n, j)));
    }
    EXPECT_LE(sup, prev);
    prev = sup;
    if (n > 0) {
      EXPECT_EQ(s.period % fam.stages[n - 1].period, 0);
    }
  }
}

TEST(PasturTkachenko, RejectsBadParameters) {
  EXPECT_THROW(pastur_tkachenko_family(0.1, gaussian_decay(0.1, 3), 3, 2), ValidationError);
  EXPECT_THROW(pastur_tkachenko_family(0.9, [](int) { return 0.2; }, 2, 2), ValidationError);
}

TEST(LpCriterion, ZeroIncrementFamily) {
  auto fam = pastur_tkachenko_family(0.3, [](int) { return 0.0; }, 2, 3);
  auto r = lp_sum_criterion(fam, 0, 1.0);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_TRUE(r.holds);
  EXPECT_FALSE(lp_sum_criterion(fam, 0, 0.0).holds);
}

TEST(LpCriterion, SingleStageHasEmptyFiniteSum) {
  auto fam = pastur_tkachenko_family(0.3, gaussian_decay(0.1, 2), 2, 0);
  auto r = lp_sum_criterion(fam, 0, 1.0);
  EXPECT_EQ(r.finite_part, 0.0);
  EXPECT_TRUE(r.norms.empty());
}

TEST(LpCriterion, DefaultFamilyHolds) {
  auto fam = pastur_tkachenko_family(0.1, gaussian_decay(0.1, 2), 2, 3);
  const double sigma0 = periodic_spectrum(fam.stages[0].seq, 2, 4096).bands.measure();
  auto r = lp_sum_criterion(fam, 0, sigma0);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(r.lhs, r.rhs);
  EXPECT_NEAR(r.rhs, 0.5 * sigma0, 1e-15);
  ASSERT_EQ(r.norms.size(), 3u);
}

TEST(LpCriterion, Errors) {
  auto fam = pastur_tkachenko_family(0.1, gaussian_decay(0.1, 2), 2, 2);
  EXPECT_THROW(lp_sum_criterion(fam, 5, 1.0), ValidationError);
  auto no_rate = fam;
  no_rate.rate = nullptr;
  EXPECT_THROW(lp_sum_criterion(no_rate, 0, 1.0), ValidationError);
  auto slow = fam;
  slow.rate = [](double q) { return 1.0 / q; };
  EXPECT_THROW(lp_sum_criterion(slow, 0, 1.0), NumericalError);
}
