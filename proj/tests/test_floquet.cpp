#include "cmvlab/floquet.hpp"

#include <gtest/gtest.h>

using namespace cmv;
using std::numbers::pi;

TEST(FloquetBlocks, FreePeriodTwo) {
  auto B = floquet_blocks(constant_seq(0.0), 2, 0.0);
  Mat2C swap;
  swap << 0.0, 1.0, 1.0, 0.0;
  EXPECT_LT((B.L - MatrixXc(swap)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((B.M - MatrixXc(swap)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(FloquetBlocks, FreeEigenvaluesOnCircle) {
  for (double k : {0.1, 0.7, 1.4}) {
    auto z = floquet_eigenvalues(constant_seq(0.0), 2, k);
    ASSERT_EQ(z.size(), 2u);
    for (cplx w : z) EXPECT_NEAR(std::abs(w), 1.0, 1e-14);
  }
}

TEST(FloquetBlocks, DualIsUnitarilyEquivalent) {
  auto s = random_periodic(6, 0.8, 3);
  auto B = floquet_blocks(s, 6, 0.2);
  EXPECT_LT((B.dual() - B.L.adjoint() * B.E() * B.L).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(FloquetBlocks, Errors) {
  EXPECT_THROW(floquet_blocks(constant_seq(0.5), 3, 0.1), ValidationError);
  EXPECT_THROW(floquet_blocks(random_periodic(3, 0.5, 1), 4, 0.1), ValidationError);
  EXPECT_THROW(floquet_blocks(quasiperiodic_seq(0.5, 0.3, 0.0), 4, 0.1), ValidationError);
}

TEST(BandEigens, FreeDistinctUnimodular) {
  auto p = band_eigens(constant_seq(0.0), 2, pi / 4);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_GT(std::abs(p[0].z - p[1].z), 1e-3);
  for (auto& e : p) EXPECT_NEAR(std::abs(e.z), 1.0, 1e-14);
}

TEST(BandEigens, CountResidualsAndNormalization) {
  auto s = constant_seq(0.5);
  for (long q : {2L, 4L, 8L}) {
    const double k = 0.37 * pi / static_cast<double>(q);
    auto pairs = band_eigens(s, q, k);
    ASSERT_EQ(pairs.size(), static_cast<std::size_t>(q));
    auto B = floquet_blocks(s, q, k);
    for (const auto& p : pairs) {
      EXPECT_NEAR(p.u.norm(), 1.0, 1e-14);
      EXPECT_NEAR(p.v.norm(), 1.0, 1e-14);
      EXPECT_LT((B.E() * p.u - p.z * p.u).norm(), 1e-10);
      EXPECT_LT((B.dual() * p.v - p.z * p.v).norm(), 1e-10);
    }
  }
}

TEST(BandEigens, Errors) {
  auto s = constant_seq(0.5);
  EXPECT_THROW(band_eigens(s, 2, 0.0), ValidationError);
  EXPECT_THROW(band_eigens(s, 2, pi / 2), ValidationError);
  EXPECT_THROW(band_eigens(random_periodic(4, 0.5, 3), 2, 0.3), ValidationError);
}

TEST(BandDerivative, FreeSpeedIsQ) {
  for (double k : {0.2, 0.9, 1.3}) {
    for (const auto& p : band_eigens(constant_seq(0.0), 2, k)) {
      const cplx d = band_derivative(p, constant_seq(0.0), 2);
      EXPECT_NEAR(std::abs(d), 2.0, 1e-12);
    }
  }
}

TEST(BandDerivative, FiniteDifferencesAndTangency) {
  auto s = constant_seq(0.5);
  const double h = 1e-5;
  for (int j = 1; j < 8; ++j) {
    const double k = j * (pi / 2) / 8.0;
    for (const auto& p : band_eigens(s, 2, k)) {
      const cplx fd = (track_band(p, s, 2, k + h).z - track_band(p, s, 2, k - h).z) / (2 * h);
      const cplx d = band_derivative(p, s, 2);
      EXPECT_LT(std::abs(fd - d), 1e-6);
      EXPECT_LT(std::abs((std::conj(p.z) * d).real()), 1e-8);
    }
  }
}

TEST(PeriodicSpectrum, FreeIsFullCircle) {
  auto ps = periodic_spectrum(constant_seq(0.0), 2, 1024);
  EXPECT_TRUE(ps.bands.is_full());
  EXPECT_NEAR(ps.bands.measure(), two_pi, 1e-12);
  EXPECT_FALSE(ps.flagged);
}

TEST(PeriodicSpectrum, ConstantEdgesMatchDenseWindow) {
  auto s = constant_seq(0.5);
  auto ps = periodic_spectrum(s, 2, 4096);
  const double m = ps.bands.measure();
  EXPECT_GT(m, 0.0);
  EXPECT_LT(m, two_pi);
  // edges of the dense wrapped window (dim 512) eigenvalue clusters
  const auto eig = CircleArcSet::points(eigen_angles(assemble_cmv(s, 0, 512, Boundary::periodic_wrap).entries));
  EXPECT_LT(chord_to_angle(hausdorff(ps.bands, eig)), 1e-3 + two_pi / 512);
  for (const Arc& a : ps.bands.segments())
    for (double e : {a.lo, a.hi}) {
      double best = 10;
      for (const Arc& p : eig.segments()) best = std::min(best, std::abs(p.lo - e));
      if (e > 1e-9 && e < two_pi - 1e-9) {
        EXPECT_LT(best, 1e-3) << e;
      }
    }
}

TEST(PeriodicSpectrum, SievedConstantIsPreimage) {
  auto base = periodic_spectrum(constant_seq(0.5), 2, 4096).bands;
  auto hat = periodic_spectrum(sieve(constant_seq(0.5)), 4, 4096).bands;
  EXPECT_LT(chord_to_angle(hausdorff(hat, preimage_double(base))), 1e-8);
  EXPECT_NEAR(hat.measure(), base.measure(), 1e-8);
}

TEST(PeriodicSpectrum, MethodsAgreeOnRandomSequences) {
  for (std::uint64_t t = 0; t < 4; ++t) {
    auto ps = periodic_spectrum(random_periodic(4, 0.9, 50 + t), 4, 2048);
    EXPECT_LT(ps.discrepancy, two_pi / 1024);
    EXPECT_FALSE(ps.flagged);
  }
}

TEST(PeriodicSpectrum, Errors) {
  EXPECT_THROW(periodic_spectrum(constant_seq(0.5), 3, 1024), ValidationError);
  EXPECT_THROW(periodic_spectrum(random_periodic(4, 0.5, 1), 6, 1024), ValidationError);
}

TEST(MonodromyBound, Free) {
  auto s = constant_seq(0.0);
  auto b = monodromy_bound_check(s, 2, unit(1.0));
  EXPECT_NEAR(b.lhs, 1.0, 1e-12);
  EXPECT_NEAR(b.rhs, 4.0, 1e-10);
  EXPECT_TRUE(b.holds);
}

TEST(MonodromyBound, ConstantSweep) {
  auto s = constant_seq(0.5);
  auto bands = periodic_spectrum(s, 2, 4096).bands;
  int checked = 0;
  for (const Arc& a : bands.segments()) {
    for (int i = 1; i <= 60; ++i) {
      const double th = a.lo + (a.hi - a.lo) * i / 61.0;
      if (std::abs(discriminant(s, 2, th)) >= 2.0 - 1e-9) continue;
      EXPECT_TRUE(monodromy_bound_check(s, 2, unit(th)).holds) << th;
      ++checked;
    }
  }
  EXPECT_GE(checked, 50);
}

TEST(MonodromyBound, NearBandEdge) {
  auto s = constant_seq(0.5);
  auto bands = periodic_spectrum(s, 2, 4096).bands;
  const double edge = bands.segments().front().hi;
  // step inward until |D| = 2 − 1e-4
  auto depth = [&](double th) { return 2.0 - std::abs(discriminant(s, 2, th)); };
  double lo = edge - 0.5, hi = edge;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (depth(mid) > 1e-4 ? lo : hi) = mid;
  }
  auto near = monodromy_bound_check(s, 2, unit(lo));
  auto deep = monodromy_bound_check(s, 2, unit(edge - 0.3));
  EXPECT_TRUE(near.holds);
  EXPECT_GT(near.rhs, deep.rhs);
  EXPECT_THROW(monodromy_bound_check(s, 2, unit(edge + 0.1)), ValidationError);
}

TEST(BandTable, RowsCoverEveryBand) {
  auto rows = band_table(constant_seq(0.5), 4, 8);
  EXPECT_EQ(rows.size(), 4u * 8u);
  for (const auto& r : rows) {
    EXPECT_NEAR(std::abs(r.z), 1.0, 1e-12);
    EXPECT_GT(r.k, 0.0);
    EXPECT_LT(r.k, pi / 4);
  }
}
