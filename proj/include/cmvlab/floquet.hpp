#pragma once

// Floquet theory for q-periodic CMV operators: the twisted blocks ℒ_q, ℳ_q(k),
// band eigenpairs, the analytic band derivative, discriminant-based spectra
// and the monodromy-norm bound.

#include "cmvlab/transfer.hpp"

#include <algorithm>
#include <numeric>

namespace cmv {

struct FloquetBlocks {
  MatrixXc L;
  MatrixXc M;
  MatrixXc E() const { return L * M; }
  MatrixXc dual() const { return M * L; }
};

struct FloquetEigenpair {
  double k = 0.0;
  cplx z;
  VectorXc u;
  VectorXc v;
};

namespace detail {

inline void require_floquet_period(const CoefficientSequence& seq, long q, const char* who) {
  require(q > 0 && q % 2 == 0, std::string(who) + ": q must be a positive even integer");
  require(seq.period().has_value() && q % *seq.period() == 0,
          std::string(who) + ": sequence period must divide q");
}

}  // namespace detail

/// ℒ_q = ⊕ϴ(α_{2j}) and ℳ_q(k), whose last block wraps with ρ_{q−1}e^{∓ikq}.
inline FloquetBlocks floquet_blocks(const CoefficientSequence& seq, long q, double k) {
  detail::require_floquet_period(seq, q, "floquet_blocks");
  auto [L, M] = assemble_LM(seq, 0, q, Boundary::periodic_wrap, k * static_cast<double>(q));
  return {std::move(L.entries), std::move(M.entries)};
}

/// Eigenvalues of ℰ_q(k), sorted by angle in [0, 2π).
inline std::vector<cplx> floquet_eigenvalues(const CoefficientSequence& seq, long q, double k) {
  const MatrixXc E = floquet_blocks(seq, q, k).E();
  Eigen::ComplexEigenSolver<MatrixXc> es(E, false);
  if (es.info() != Eigen::Success) throw NumericalError("floquet_eigenvalues: eigensolver failed");
  std::vector<cplx> z(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(z.begin(), z.end(), [](cplx a, cplx b) { return wrap_angle(std::arg(a)) < wrap_angle(std::arg(b)); });
  return z;
}

/// The q eigenpairs of ℰ_q(k) for interior k, sorted by eigenvalue angle.
/// u is unit-normalized and v = ℒ_q⁻¹u.
inline std::vector<FloquetEigenpair> band_eigens(const CoefficientSequence& seq, long q, double k) {
  detail::require_floquet_period(seq, q, "band_eigens");
  const double kmax = std::numbers::pi / static_cast<double>(q);
  require(k > 0.0 && k < kmax, "band_eigens: k must lie strictly inside (0, pi/q)");
  const FloquetBlocks B = floquet_blocks(seq, q, k);
  const MatrixXc E = B.E();
  Eigen::ComplexEigenSolver<MatrixXc> es(E);
  if (es.info() != Eigen::Success) throw NumericalError("band_eigens: eigensolver failed");

  std::vector<FloquetEigenpair> out;
  out.reserve(static_cast<std::size_t>(q));
  for (long i = 0; i < q; ++i) {
    FloquetEigenpair p;
    p.k = k;
    p.z = es.eigenvalues()[i];
    p.u = es.eigenvectors().col(i).normalized();
    p.v = B.L.adjoint() * p.u;
    p.v.normalize();
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return wrap_angle(std::arg(a.z)) < wrap_angle(std::arg(b.z)); });
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::size_t j = (i + 1) % out.size();
    if (j != i && std::abs(out[i].z - out[j].z) < 1e-8)
      throw DegeneracyError("band_eigens: eigenvalues " + std::to_string(i) + " and " + std::to_string(j) +
                            " are closer than 1e-8 at k=" + std::to_string(k));
  }
  return out;
}

/// The eigenpair at k_new on the same band as `pair`, chosen by maximal
/// eigenvector overlap.
inline FloquetEigenpair track_band(const FloquetEigenpair& pair, const CoefficientSequence& seq, long q,
                                   double k_new) {
  auto next = band_eigens(seq, q, k_new);
  std::size_t best = 0;
  double overlap = -1.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double o = std::abs(pair.u.dot(next[i].u));
    if (o > overlap) { overlap = o; best = i; }
  }
  return next[best];
}

/// dz/dk = iqρ_{q−1}[v̄(−1)u(0) − v̄(0)u(−1)] with u(−1) = e^{−ikq}u(q−1).
inline cplx band_derivative(const FloquetEigenpair& pair, const CoefficientSequence& seq, long q) {
  detail::require_floquet_period(seq, q, "band_derivative");
  require(pair.u.size() == q && pair.v.size() == q, "band_derivative: eigenvector length must equal q");
  const cplx phase = unit(-pair.k * static_cast<double>(q));
  const cplx u_m1 = phase * pair.u(q - 1);
  const cplx v_m1 = phase * pair.v(q - 1);
  const double r = seq.rho(q - 1);
  return I * static_cast<double>(q) * r * (std::conj(v_m1) * pair.u(0) - std::conj(pair.v(0)) * u_m1);
}

// ---------------------------------------------------------------------------
// Periodic spectra

/// D(θ) = tr Φ_q(e^{iθ}), which is real for |z| = 1.
inline double discriminant(const CoefficientSequence& seq, long q, double theta) {
  const cplx t = monodromy(seq, q, unit(theta)).trace();
  if (std::abs(t.imag()) > 1e-10 * std::max(1.0, std::abs(t)))
    throw NumericalError("discriminant: trace has imaginary part " + std::to_string(t.imag()));
  return t.real();
}

/// {e^{iθ} : |D(θ)| ≤ 2}, sampled on `resolution` angles with every sign
/// change of 4 − D² refined by bisection to 1e-10. Gaps narrower than 1e-6
/// whose midpoint depth 4 − D² is above −1e-13 are treated as closed.
inline CircleArcSet band_set_discriminant(const CoefficientSequence& seq, long q, std::size_t resolution) {
  detail::require_floquet_period(seq, q, "periodic_spectrum");
  require(resolution >= 8, "periodic_spectrum: resolution must be at least 8");
  auto f = [&](double th) { const double d = discriminant(seq, q, th); return 4.0 - d * d; };
  const auto grid = uniform_grid(resolution);
  std::vector<double> fv(resolution);
  for (std::size_t j = 0; j < resolution; ++j) fv[j] = f(grid[j]);

  auto edge = [&](double a, double b, bool a_in) {
    while (b - a > 1e-10) {
      const double m = 0.5 * (a + b);
      if ((f(m) >= 0.0) == a_in) a = m; else b = m;
    }
    return 0.5 * (a + b);
  };
  std::vector<Arc> arcs;
  for (std::size_t j = 0; j < resolution; ++j) {
    const double a = grid[j];
    const double b = (j + 1 < resolution) ? grid[j + 1] : two_pi;
    const bool ia = fv[j] >= 0.0, ib = fv[(j + 1) % resolution] >= 0.0;
    if (ia && ib) arcs.push_back({a, b});
    else if (ia) arcs.push_back({a, edge(a, b, true)});
    else if (ib) arcs.push_back({edge(a, b, false), b});
  }
  // A tangency |D| = 2 shows up as a gap only a few ulps deep; close those.
  const CircleArcSet gaps = CircleArcSet(arcs).complement();
  for (const Arc& g : gaps.segments()) {
    if (g.length() < 1e-6 && f(0.5 * (g.lo + g.hi)) > -1e-13) arcs.push_back(g);
  }
  return CircleArcSet(arcs);
}

/// ∪_k σ(ℰ_q(k)) over `k_points` values of k in [0, π/q]. Eigenvalues at
/// neighbouring k are paired by the cyclic alignment of their angular order
/// and joined by the short arc between them.
inline CircleArcSet band_set_eigenvalues(const CoefficientSequence& seq, long q, std::size_t k_points) {
  detail::require_floquet_period(seq, q, "band_set_eigenvalues");
  require(k_points >= 2, "band_set_eigenvalues: need at least two k values");
  const double kmax = std::numbers::pi / static_cast<double>(q);
  std::vector<Arc> arcs;
  std::vector<cplx> prev = floquet_eigenvalues(seq, q, 0.0);
  for (std::size_t j = 1; j < k_points; ++j) {
    const double k = kmax * static_cast<double>(j) / static_cast<double>(k_points - 1);
    std::vector<cplx> cur = floquet_eigenvalues(seq, q, k);
    const std::size_t n = cur.size();
    std::size_t shift = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
      double cost = 0.0;
      for (std::size_t i = 0; i < n; ++i) cost = std::max(cost, std::abs(prev[i] - cur[(i + s) % n]));
      if (cost < best) { best = cost; shift = s; }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double a = wrap_angle(std::arg(prev[i]));
      double b = wrap_angle(std::arg(cur[(i + shift) % n]));
      double lo = a, hi = b;
      if (hi < lo) std::swap(lo, hi);
      if (hi - lo > std::numbers::pi) { std::swap(lo, hi); hi += two_pi; }
      arcs.push_back({lo, hi});
    }
    prev = std::move(cur);
  }
  return CircleArcSet(arcs);
}

struct PeriodicSpectrum {
  CircleArcSet bands;
  CircleArcSet eigen_bands;
  double discrepancy = 0.0;  // chordal Hausdorff distance between the two methods
  bool flagged = false;      // discrepancy above 10 grid cells
};

/// σ of a q-periodic CMV operator by the discriminant, cross-checked against
/// the Floquet eigenvalue sweep.
inline PeriodicSpectrum periodic_spectrum(const CoefficientSequence& seq, long q, std::size_t resolution,
                                          std::size_t k_points = 256) {
  PeriodicSpectrum s;
  s.bands = band_set_discriminant(seq, q, resolution);
  s.eigen_bands = band_set_eigenvalues(seq, q, k_points);
  s.discrepancy = hausdorff(s.bands, s.eigen_bands);
  s.flagged = !(s.discrepancy <= 10.0 * two_pi / static_cast<double>(resolution));
  return s;
}

// ---------------------------------------------------------------------------

struct MonodromyBound {
  double lhs;  // ‖Φ_q(z)‖
  double rhs;  // 4q/|dz/dk|
  bool holds;
  double k;
  cplx dzdk;
};

/// ‖Φ_q(z)‖ ≤ 4q/|dz/dk| at a band-interior z, with k the Bloch wave number
/// read off the eigenvalue e^{±ikq} of Φ_q(z).
inline MonodromyBound monodromy_bound_check(const CoefficientSequence& seq, long q, cplx z) {
  detail::require_floquet_period(seq, q, "monodromy_bound_check");
  const Mat2C Phi = monodromy(seq, q, z);
  const double D = discriminant(seq, q, std::arg(z));
  require(std::abs(D) < 2.0, "monodromy_bound_check: z is at or beyond a band edge (|tr| >= 2)");
  const double k = std::acos(D / 2.0) / static_cast<double>(q);
  auto pairs = band_eigens(seq, q, k);
  auto it = std::min_element(pairs.begin(), pairs.end(),
                             [&](const auto& a, const auto& b) { return std::abs(a.z - z) < std::abs(b.z - z); });
  if (std::abs(it->z - z) > 1e-8)
    throw NumericalError("monodromy_bound_check: z is not an eigenvalue of E_q(k); distance " +
                         std::to_string(std::abs(it->z - z)));
  MonodromyBound b{};
  b.k = k;
  b.dzdk = band_derivative(*it, seq, q);
  b.lhs = detail::norm2x2(Phi);
  b.rhs = 4.0 * static_cast<double>(q) / std::abs(b.dzdk);
  b.holds = b.lhs <= b.rhs * (1.0 + 1e-8);
  return b;
}

struct BandRow {
  long q;
  long n;
  double k;
  cplx z;
  cplx dzdk;
};

/// Band functions on `k_points` interior k values, threaded by eigenvector overlap.
inline std::vector<BandRow> band_table(const CoefficientSequence& seq, long q, std::size_t k_points) {
  require(k_points >= 1, "band_table: need at least one k value");
  const double kmax = std::numbers::pi / static_cast<double>(q);
  std::vector<BandRow> rows;
  std::vector<FloquetEigenpair> current;
  for (std::size_t j = 0; j < k_points; ++j) {
    const double k = kmax * (static_cast<double>(j) + 0.5) / static_cast<double>(k_points);
    if (current.empty()) {
      current = band_eigens(seq, q, k);
    } else {
      for (auto& p : current) p = track_band(p, seq, q, k);
    }
    for (std::size_t n = 0; n < current.size(); ++n)
      rows.push_back({q, static_cast<long>(n), k, current[n].z, band_derivative(current[n], seq, q)});
  }
  return rows;
}

}  // namespace cmv
