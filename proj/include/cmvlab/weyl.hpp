#pragma once

// Weyl–Titchmarsh functions of half-line CMV restrictions, computed from
// resolvents of large cut windows, and a reflectionless-defect diagnostic.

#include "cmvlab/spectral_sets.hpp"

#include <Eigen/SparseLU>

namespace cmv {

enum class Side { plus, minus };

struct CaratheodoryValue {
  cplx z;
  cplx value;
  Side side;
  long base_site;
  long truncation_dim;
};

/// Window size for which |z|^{dim/2} falls below 1e-12, the decay rate of
/// resolvent entries of a unitary at distance 1 − |z| from the circle.
inline long stable_dim(double radius) {
  require(radius >= 0.0 && radius < 1.0, "stable_dim: radius must lie in [0,1)");
  if (radius < 0.5) return 64;
  const double n = std::log(1e-12) / std::log(radius);
  long d = 2 * static_cast<long>(std::ceil(n));
  d += d % 2;
  return std::max(64L, d);
}

namespace detail {

/// ⟨δ_j, (W − z)⁻¹ δ_j⟩ for the cut window W on [lo, lo+dim).
inline cplx resolvent_diagonal(const CoefficientSequence& seq, long lo, long dim, long j, cplx z) {
  Eigen::SparseMatrix<cplx> A = cut_window_sparse(seq, lo, dim);
  Eigen::SparseMatrix<cplx> Id(dim, dim);
  Id.setIdentity();
  A -= z * Id;
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw NumericalError("weyl: sparse LU factorization failed");
  VectorXc e = VectorXc::Zero(dim);
  e(j) = 1.0;
  VectorXc x = lu.solve(e);
  if (lu.info() != Eigen::Success) throw NumericalError("weyl: sparse solve failed");
  return x(j);
}

inline cplx half_line_value(const CoefficientSequence& seq, long k, cplx z, long dim, Side side) {
  const long lo = side == Side::plus ? k : k - dim + 1;
  const long j = side == Side::plus ? 0 : dim - 1;
  const cplx f = 1.0 + 2.0 * z * resolvent_diagonal(seq, lo, dim, j, z);
  return side == Side::plus ? f : -f;
}

inline CaratheodoryValue weyl_value(const CoefficientSequence& seq, long k, cplx z, long dim, Side side) {
  require(std::abs(z) < 1.0 - 1e-6, "weyl: |z| must be below 1 - 1e-6");
  if (dim <= 0) dim = stable_dim(std::abs(z));
  require(dim >= 2, "weyl: dim must be at least 2");
  const cplx a = half_line_value(seq, k, z, dim, side);
  const cplx b = half_line_value(seq, k, z, 2 * dim, side);
  if (std::abs(a - b) >= 1e-8)
    throw TruncationError("weyl: value changed by " + std::to_string(std::abs(a - b)) + " when dim doubled from " +
                          std::to_string(dim));
  return {z, b, side, k, 2 * dim};
}

}  // namespace detail

/// m₊(z,k) = ⟨δ_k, (ℰ₊,k + z)(ℰ₊,k − z)⁻¹δ_k⟩ on the window [k, k+dim) with
/// α_{k−1} = α_{k+dim−1} = −1. dim ≤ 0 selects stable_dim(|z|).
inline CaratheodoryValue m_plus(const CoefficientSequence& seq, long k, cplx z, long dim = 0) {
  return detail::weyl_value(seq, k, z, dim, Side::plus);
}

/// m₋(z,k) = −⟨δ_k, (ℰ₋,k + z)(ℰ₋,k − z)⁻¹δ_k⟩ on (k−dim, k] with α_k = −1.
inline CaratheodoryValue m_minus(const CoefficientSequence& seq, long k, cplx z, long dim = 0) {
  return detail::weyl_value(seq, k, z, dim, Side::minus);
}

struct MPair {
  cplx plus;
  cplx minus;
};

/// Which coefficient enters the M₋ formula. `glue` uses α_{k−2}, the block
/// coupling the windows of m₋(·,k−2) and m₊(·,k−1); `literal` uses α_k.
enum class GlueSite { glue, literal };

/// M₊(z,k) = m₊(z,k−1) and
/// M₋(z,k) = [Re(1−ā) + i·Im(1+ā)·m₋(z,k−2)] / [i·Im(1−ā) + Re(1+ā)·m₋(z,k−2)]
/// with a = α_{k−2} (glue) or a = α_k (literal).
inline MPair M_coefficients(const CoefficientSequence& seq, long k, cplx z, long dim = 0,
                            GlueSite site = GlueSite::glue) {
  const cplx mp = m_plus(seq, k - 1, z, dim).value;
  const cplx mm = m_minus(seq, k - 2, z, dim).value;
  const cplx ab = std::conj(seq(site == GlueSite::glue ? k - 2 : k));
  const cplx num = (1.0 - ab).real() + I * (1.0 + ab).imag() * mm;
  const cplx den = I * (1.0 - ab).imag() + (1.0 + ab).real() * mm;
  if (std::abs(den) < 1e-12)
    throw NumericalError("M_coefficients: M- denominator below 1e-12 at k=" + std::to_string(k));
  return {mp, num / den};
}

struct DefectSample {
  double theta;
  double r;
  double defect;
};

/// Angles spread over S in proportion to arc length (cell midpoints).
inline std::vector<double> sample_angles(const CircleArcSet& S, std::size_t samples) {
  require(!S.is_empty(), "sample_angles: set is empty");
  std::vector<double> out;
  const auto& segs = S.segments();
  const double total = S.measure();
  if (total <= 0.0) {
    for (const Arc& a : segs) out.push_back(a.lo);
    return out;
  }
  std::size_t seg = 0;
  double before = 0.0;
  for (std::size_t j = 0; j < samples; ++j) {
    const double target = total * (static_cast<double>(j) + 0.5) / static_cast<double>(samples);
    while (seg + 1 < segs.size() && before + segs[seg].length() < target) before += segs[seg++].length();
    out.push_back(segs[seg].lo + (target - before));
  }
  return out;
}

/// |M₊(re^{iθ},k) + conj(M₋(re^{iθ},k))| at sampled θ ∈ S.
inline std::vector<DefectSample> defect_sweep(const CoefficientSequence& seq, long k, const CircleArcSet& S, double r,
                                              std::size_t samples, long dim = 0, GlueSite site = GlueSite::glue) {
  require(r >= 0.9 && r < 1.0, "reflectionless_defect: r must lie in [0.9, 1)");
  require(samples >= 16, "reflectionless_defect: need at least 16 samples");
  std::vector<DefectSample> out;
  for (double th : sample_angles(S, samples)) {
    const MPair M = M_coefficients(seq, k, std::polar(r, th), dim, site);
    out.push_back({th, r, std::abs(M.plus + std::conj(M.minus))});
  }
  return out;
}

inline double reflectionless_defect(const CoefficientSequence& seq, long k, const CircleArcSet& S, double r,
                                    std::size_t samples, long dim = 0, GlueSite site = GlueSite::glue) {
  double worst = 0.0;
  for (const auto& s : defect_sweep(seq, k, S, r, samples, dim, site)) worst = std::max(worst, s.defect);
  return worst;
}

}  // namespace cmv
