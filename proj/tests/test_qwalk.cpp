#include "cmvlab/qwalk.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace cmv;

namespace {
Mat2C swap_coin() {
  Mat2C s;
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

Mat2C random_cgmv(std::mt19937_64& rng) {
  return cgmv_coin(std::polar(0.9 * std::sqrt(unit_uniform(rng)), two_pi * unit_uniform(rng)));
}
}  // namespace

TEST(Walk, IdentityCoinShiftsRight) {
  const QuantumWalk w{identity_coins()};
  auto s = evolve(WalkState::delta(0, true), w, 1);
  EXPECT_EQ(s.at(1, true), cplx(1.0));
  EXPECT_NEAR(s.norm2(), 1.0, 1e-15);
}

TEST(Walk, SwapCoinFlipsThenShifts) {
  const QuantumWalk w{constant_coin(swap_coin())};
  auto s = evolve(WalkState::delta(0, true), w, 1);
  EXPECT_EQ(s.at(-1, false), cplx(1.0));
  EXPECT_EQ(s.probability(1), 0.0);
}

TEST(Walk, HadamardWrapIsUnitary) {
  auto w = build_walk(hadamard_coins(), -8, 7, WalkPolicy::wrap);
  const MatrixXc U = w.matrix();
  EXPECT_LT((U * U.adjoint() - MatrixXc::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Walk, WrapMatrixMatchesStep) {
  std::mt19937_64 rng(5);
  std::vector<Mat2C> table;
  for (int i = 0; i < 3; ++i) table.push_back(random_cgmv(rng));
  auto w = build_walk(periodic_coins(table), 0, 5, WalkPolicy::wrap);
  WalkState s;
  s.n_lo = 0;
  s.n_hi = 5;
  VectorXc v(12);
  for (long i = 0; i < 6; ++i) {
    s.plus.push_back({unit_uniform(rng), unit_uniform(rng)});
    s.minus.push_back({unit_uniform(rng), unit_uniform(rng)});
    v(2 * i) = s.plus.back();
    v(2 * i + 1) = s.minus.back();
  }
  const VectorXc Uv = w.matrix() * v;
  auto t = evolve(s, w, 1);
  for (long i = 0; i < 6; ++i) {
    EXPECT_NEAR(std::abs(Uv(2 * i) - t.plus[static_cast<std::size_t>(i)]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(Uv(2 * i + 1) - t.minus[static_cast<std::size_t>(i)]), 0.0, 1e-15);
  }
}

TEST(Walk, RejectsNonUnitaryCoin) {
  Mat2C bad;
  bad << 1.0, 1.0, 0.0, 1.0;
  try {
    build_walk(periodic_coins({Mat2C::Identity(), bad}), 0, 4, WalkPolicy::wrap);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("site 1"), std::string::npos);
  }
}

TEST(Evolve, ZeroStepsIsIdentity) {
  const QuantumWalk w{hadamard_coins()};
  auto s0 = WalkState::delta(3, false);
  auto s = evolve(s0, w, 0);
  EXPECT_EQ(s.plus, s0.plus);
  EXPECT_EQ(s.minus, s0.minus);
  EXPECT_THROW(evolve(s0, w, -1), ValidationError);
}

TEST(Evolve, PureShiftFiveSteps) {
  const QuantumWalk w{identity_coins()};
  auto s = evolve(WalkState::delta(0, true), w, 5);
  EXPECT_EQ(s.at(5, true), cplx(1.0));
  EXPECT_EQ(s.norm2(), 1.0);
}

TEST(Evolve, AbsorbingWindowGrowsAndConservesNorm) {
  const QuantumWalk w{hadamard_coins()};
  auto s = evolve(WalkState::delta(0, true), w, 100);
  EXPECT_NEAR(s.norm2(), 1.0, 1e-7);
  EXPECT_LT(s.n_lo, -50);
  EXPECT_GT(s.n_hi, 50);
}

TEST(Evolve, WindowOverflowIsReported) {
  QuantumWalk w{hadamard_coins()};
  w.max_sites = 64;
  EXPECT_THROW(evolve(WalkState::delta(0, true), w, 100), NumericalError);
}

TEST(Survival, Examples) {
  const QuantumWalk shift{identity_coins()};
  auto s0 = WalkState::delta(0, true);
  EXPECT_EQ(survival_probability(s0, shift, 0, 0), 1.0);
  EXPECT_EQ(survival_probability(s0, shift, 3, 10), 0.0);
  const QuantumWalk h{hadamard_coins()};
  EXPECT_LT(survival_probability(s0, h, 5, 200), survival_probability(s0, h, 5, 20));
  EXPECT_THROW(survival_probability(s0, -1), ValidationError);
}

TEST(Survival, StrictlyDecreasingForTranslationInvariantCoins) {
  const QuantumWalk h{hadamard_coins()};
  auto s = WalkState::delta(0, true);
  double prev = 2.0;
  long t = 0;
  for (long target : {128L, 256L, 512L}) {
    s = evolve(std::move(s), h, target - t);
    t = target;
    const double p = survival_probability(s, 5);
    EXPECT_LT(p, prev);
    EXPECT_GE(p, 0.0);
    prev = p;
  }
}

TEST(ToCmv, IdentityGivesFreeStructure) {
  auto form = to_cmv(identity_coins(), 0, 3);
  for (long m = -4; m < 8; ++m) EXPECT_EQ(form.alpha(m), cplx(0.0));
  auto w = build_walk(identity_coins(), 0, 3, WalkPolicy::wrap);
  const MatrixXc P = walk_in_cmv_order(w);
  for (long i = 0; i < P.rows(); ++i) EXPECT_NEAR(P.row(i).cwiseAbs().sum(), 1.0, 1e-15);
}

TEST(ToCmv, RoundTripForRandomGaugeCoins) {
  std::mt19937_64 rng(7);
  double worst = 0.0;
  long max_band = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const long N = 4 + static_cast<long>(rng() % 5);
    std::vector<Mat2C> table;
    for (long i = 0; i < N; ++i) table.push_back(random_cgmv(rng));
    auto coins = periodic_coins(table);
    auto w = build_walk(coins, 0, N - 1, WalkPolicy::wrap);
    const MatrixXc P = walk_in_cmv_order(w);
    const auto form = to_cmv(coins, 0, N - 1);
    const MatrixXc E = assemble_cmv(form.alpha, 0, 2 * N, Boundary::periodic_wrap).entries;
    worst = std::max(worst, (P - E).cwiseAbs().maxCoeff());
    for (long r = 2; r < 2 * N - 2; ++r)
      for (long c = 0; c < 2 * N; ++c)
        if (std::abs(P(r, c)) > 0) max_band = std::max(max_band, std::abs(r - c));
    for (long n = 0; n < N; ++n) {
      EXPECT_EQ(form.alpha(2 * n), cplx(0.0));
      EXPECT_NEAR(std::abs(form.alpha(2 * n + 1) - std::conj(table[static_cast<std::size_t>(n)](1, 0))), 0.0, 1e-15);
    }
  }
  EXPECT_LT(worst, 1e-12);
  EXPECT_LE(max_band, 2);
}

TEST(ToCmv, CmvIndexMap) {
  EXPECT_EQ(CmvForm::index(0, true), 1);
  EXPECT_EQ(CmvForm::index(0, false), 2);
  EXPECT_EQ(CmvForm::index(-1, false), 0);
}

TEST(ToCmv, NonConformingCoinNamesSite) {
  try {
    to_cmv(periodic_coins({cgmv_coin(0.3), hadamard_coins()(0)}), 0, 1);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("site 1"), std::string::npos) << e.what();
  }
}
