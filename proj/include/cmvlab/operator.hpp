#pragma once

// CMV operators on finite windows: ϴ blocks, the ℒℳ factorization,
// pentadiagonal assembly, sieving and operator-norm comparisons.

#include "cmvlab/coefficients.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>

#include <numeric>
#include <string_view>

namespace cmv {

/// ϴ(α) = [[ᾱ, ρ], [ρ, −α]]
inline Mat2C theta(cplx alpha) {
  require(std::abs(alpha) < 1.0, "theta: |alpha| must be < 1");
  const double r = rho_of(alpha);
  Mat2C t;
  t << std::conj(alpha), r, r, -alpha;
  return t;
}

enum class Boundary { periodic_wrap, half_line_left, raw_cut };

inline std::string_view to_string(Boundary b) {
  switch (b) {
    case Boundary::periodic_wrap: return "periodic_wrap";
    case Boundary::half_line_left: return "half_line_left";
    case Boundary::raw_cut: return "raw_cut";
  }
  return "?";
}

inline Boundary boundary_from_string(std::string_view s) {
  if (s == "periodic_wrap") return Boundary::periodic_wrap;
  if (s == "half_line_left") return Boundary::half_line_left;
  if (s == "raw_cut") return Boundary::raw_cut;
  throw ValidationError("unknown boundary '" + std::string(s) + "'");
}

/// Dense window of a pentadiagonal operator; row/column 0 is site `offset`.
struct BandedUnitary {
  long offset = 0;
  long dim = 0;
  MatrixXc entries;
  Boundary boundary = Boundary::periodic_wrap;

  double unitarity_residual() const {
    return (entries * entries.adjoint() - MatrixXc::Identity(dim, dim)).cwiseAbs().maxCoeff();
  }
};

struct FactorPair {
  BandedUnitary L;
  BandedUnitary M;
};

namespace detail {

using Triplet = Eigen::Triplet<cplx>;

enum class WindowMode { wrap, cut, raw };

/// Triplets of ℒ (even n) and ℳ (odd n), where ϴ(α_n) acts on sites (n, n+1).
///  wrap: site lo+dim is identified with lo, with Bloch phase e^{±i·twist} on the corner pair.
///  cut:  α_{lo−1} = α_{lo+dim−1} = −1, so the window decouples and stays unitary.
///  raw:  blocks straddling the window edge are clipped.
struct FactorTriplets {
  std::vector<Triplet> L, M;
};

inline FactorTriplets factor_triplets(const CoefficientSequence& seq, long lo, long dim, WindowMode mode,
                                      double twist = 0.0) {
  FactorTriplets out;
  const long first = (mode == WindowMode::wrap) ? lo : lo - 1;
  const long last = lo + dim - 1;
  for (long n = first; n <= last; ++n) {
    cplx a = seq(n);
    if (mode == WindowMode::cut && (n == lo - 1 || n == last)) a = -1.0;
    const double r = rho_of(a);
    auto& target = (floor_mod(n, 2) == 0) ? out.L : out.M;
    const long i = n - lo;
    long j = i + 1;
    cplx up = r, down = r;
    if (j == dim && mode == WindowMode::wrap) {
      j = 0;
      up = r * unit(twist);
      down = r * unit(-twist);
    }
    const bool in_i = i >= 0 && i < dim;
    const bool in_j = j >= 0 && j < dim;
    if (in_i) target.emplace_back(i, i, std::conj(a));
    if (in_j) target.emplace_back(j, j, -a);
    if (in_i && in_j) {
      if (r != 0.0) {
        target.emplace_back(i, j, up);
        target.emplace_back(j, i, down);
      }
    }
  }
  return out;
}

inline MatrixXc dense_from(const std::vector<Triplet>& t, long dim) {
  MatrixXc m = MatrixXc::Zero(dim, dim);
  for (const auto& e : t) m(e.row(), e.col()) += e.value();
  return m;
}

inline Eigen::SparseMatrix<cplx> sparse_from(const std::vector<Triplet>& t, long dim) {
  Eigen::SparseMatrix<cplx> m(dim, dim);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace detail

/// ℒ = ⊕ϴ(α_{2j}), ℳ = ⊕ϴ(α_{2j+1}) on the window [offset, offset+dim).
/// `twist` is the Bloch phase kq placed on the wrap corners (0 = plain wrap).
inline FactorPair assemble_LM(const CoefficientSequence& seq, long offset, long dim, Boundary boundary,
                              double twist = 0.0) {
  require(floor_mod(offset, 2) == 0, "assemble_LM: offset must be even");
  require(dim > 0 && dim % 2 == 0, "assemble_LM: dim must be even and positive");
  require(boundary != Boundary::raw_cut, "assemble_LM: raw_cut is not defined blockwise");
  if (boundary == Boundary::half_line_left) require(offset == 0, "assemble_LM: half_line_left needs offset 0");
  auto mode = boundary == Boundary::periodic_wrap ? detail::WindowMode::wrap : detail::WindowMode::cut;
  auto t = detail::factor_triplets(seq, offset, dim, mode, twist);
  return {{offset, dim, detail::dense_from(t.L, dim), boundary}, {offset, dim, detail::dense_from(t.M, dim), boundary}};
}

/// ℰ = ℒℳ on a window. raw_cut returns the plain finite section of the
/// two-sided operator (not unitary).
inline BandedUnitary assemble_cmv(const CoefficientSequence& seq, long offset, long dim, Boundary boundary) {
  if (boundary != Boundary::raw_cut) {
    auto [L, M] = assemble_LM(seq, offset, dim, boundary);
    return {offset, dim, L.entries * M.entries, boundary};
  }
  require(floor_mod(offset, 2) == 0, "assemble_cmv: offset must be even");
  require(dim > 0 && dim % 2 == 0, "assemble_cmv: dim must be even and positive");
  // a two-site pad on both sides holds every factor entry that reaches the window
  const long pad = 2;
  auto t = detail::factor_triplets(seq, offset - pad, dim + 2 * pad, detail::WindowMode::raw);
  MatrixXc E = detail::dense_from(t.L, dim + 2 * pad) * detail::dense_from(t.M, dim + 2 * pad);
  return {offset, dim, E.block(pad, pad, dim, dim), boundary};
}

/// Sparse ℰ on [lo, lo+dim) with the cyclic-vector cut α = −1 at sites lo−1
/// and lo+dim−1. Used for half-line resolvents on large windows.
inline Eigen::SparseMatrix<cplx> cut_window_sparse(const CoefficientSequence& seq, long lo, long dim) {
  require(dim >= 2, "cut_window_sparse: dim must be >= 2");
  auto t = detail::factor_triplets(seq, lo, dim, detail::WindowMode::cut);
  Eigen::SparseMatrix<cplx> E = detail::sparse_from(t.L, dim) * detail::sparse_from(t.M, dim);
  E.makeCompressed();
  return E;
}

/// α̂_{2j} = 0, α̂_{2j−1} = α_j.
inline CoefficientSequence sieve(const CoefficientSequence& seq) {
  std::optional<long> p;
  if (seq.period()) p = 2 * *seq.period();
  return CoefficientSequence(
      [seq](long n) { return floor_mod(n, 2) == 0 ? cplx{0.0, 0.0} : seq((n + 1) / 2); }, seq.sup_norm_bound(), p,
      "sieved");
}

struct SieveSquareReport {
  double X_invariant_residual;  // |ℰ̂²| entries coupling {0,3} mod 4 into {1,2} mod 4
  double Y_invariant_residual;  // … and {1,2} into {0,3}
  double similarity_residual;   // max of |ℰ̂²|_𝒳 − ℰ| and |ℰ̂²|_𝒴 − ℰᵀ| entrywise
};

/// Checks that ℰ̂² splits along 𝒳 = {0,3 mod 4} and 𝒴 = {1,2 mod 4} with
/// ℰ̂²|_𝒳 ≅ ℰ and ℰ̂²|_𝒴 ≅ ℰᵀ on a wrapped window.
///
/// The reference ℰ carries the coefficients β_j = α_{j+1} (the sieved window
/// sees α_1 … α_{dim/2}). Sites 4n, 4n+3 ∈ 𝒳 correspond to 2n, 2n+1 of ℰ;
/// sites 4n+1, 4n+2 ∈ 𝒴 correspond to 2n, 2n+1 of ℰᵀ.
inline SieveSquareReport verify_sieve_square(const CoefficientSequence& seq, long dim) {
  require(dim > 0 && dim % 4 == 0, "verify_sieve_square: dim must be divisible by 4");
  const long half = dim / 2;
  auto sieved = sieve(seq);
  MatrixXc Eh = assemble_cmv(sieved, 0, dim, Boundary::periodic_wrap).entries;
  MatrixXc E2 = Eh * Eh;

  std::vector<cplx> ref_vals(static_cast<std::size_t>(half));
  for (long j = 0; j < half; ++j) ref_vals[static_cast<std::size_t>(j)] = seq(j + 1);
  MatrixXc E = assemble_cmv(periodic_table(ref_vals), 0, half, Boundary::periodic_wrap).entries;

  auto in_X = [](long i) { long r = floor_mod(i, 4); return r == 0 || r == 3; };
  // index in the small operator that a sieved site represents
  auto to_small = [half](long i) {
    long r = floor_mod(i, 4);
    long n = (i - r) / 4;
    long s = 0;
    switch (r) {
      case 0: s = 2 * n; break;          // 4n   -> 2n
      case 3: s = 2 * n + 1; break;      // 4n+3 -> 2n+1
      case 1: s = 2 * n; break;          // 4n+1 -> 2n
      case 2: s = 2 * n + 1; break;      // 4n+2 -> 2n+1
    }
    return floor_mod(s, half);
  };

  SieveSquareReport rep{0.0, 0.0, 0.0};
  for (long c = 0; c < dim; ++c) {
    for (long r = 0; r < dim; ++r) {
      const double mag = std::abs(E2(r, c));
      if (in_X(c) != in_X(r)) {
        auto& slot = in_X(c) ? rep.X_invariant_residual : rep.Y_invariant_residual;
        slot = std::max(slot, mag);
        continue;
      }
      const long sr = to_small(r), sc = to_small(c);
      const cplx expected = in_X(c) ? E(sr, sc) : E(sc, sr);
      rep.similarity_residual = std::max(rep.similarity_residual, std::abs(E2(r, c) - expected));
    }
  }
  return rep;
}

/// Largest singular value of a dense matrix.
inline double spectral_norm(const MatrixXc& A) {
  if (A.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(A.adjoint() * A, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// ‖ℰ − ℰ′‖ on a window. With periodic_wrap and two periodic inputs the
/// window must hold a whole number of common periods.
inline double norm_diff(const CoefficientSequence& a, const CoefficientSequence& b, long dim,
                        Boundary boundary = Boundary::periodic_wrap, long offset = 0) {
  if (boundary == Boundary::periodic_wrap && a.period() && b.period()) {
    const long common = std::lcm(*a.period(), *b.period());
    require(dim % common == 0, "norm_diff: window of " + std::to_string(dim) +
                                   " sites does not contain a whole common period " + std::to_string(common));
  }
  MatrixXc D = assemble_cmv(a, offset, dim, boundary).entries - assemble_cmv(b, offset, dim, boundary).entries;
  return spectral_norm(D);
}

}  // namespace cmv
