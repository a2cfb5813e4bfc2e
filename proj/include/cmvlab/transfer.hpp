#pragma once

// Szegő and Gesztesy–Zinchenko transfer matrices, monodromies, Lyapunov
// exponents and the estimate of 𝒵 = {z ∈ ∂𝔻 : L(z) = 0}.

#include "cmvlab/parallel.hpp"
#include "cmvlab/spectral_sets.hpp"

#include <string>
#include <vector>

namespace cmv {

namespace detail {

inline void require_unimodular(cplx z, const char* who) {
  require(std::abs(std::abs(z) - 1.0) < 1e-10, std::string(who) + ": z must lie on the unit circle");
}

/// ‖M‖₂ of a 2×2 matrix from its Frobenius norm and determinant.
inline double norm2x2(const Mat2C& m) {
  const double f2 = m.squaredNorm();
  const double d = std::abs(m.determinant());
  return std::sqrt(0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4.0 * d * d))));
}

inline double spectral_radius2x2(const Mat2C& m) {
  const cplx t = m.trace();
  const cplx disc = std::sqrt(0.25 * t * t - m.determinant());
  return std::max(std::abs(0.5 * t + disc), std::abs(0.5 * t - disc));
}

}  // namespace detail

/// S(α,z) = (1/ρ)·[[z, −ᾱ], [−zα, 1]]
inline Mat2C szego(cplx alpha, cplx z) {
  require(std::abs(alpha) < 1.0, "szego: |alpha| must be < 1");
  require(z != cplx{0.0, 0.0}, "szego: z must be nonzero");
  const double r = rho_of(alpha);
  Mat2C s;
  s << z, -std::conj(alpha), -z * alpha, 1.0;
  return s / r;
}

/// S(α_{first+count−1}, z) ⋯ S(α_first, z)
inline Mat2C szego_product(const CoefficientSequence& seq, long first, long count, cplx z) {
  Mat2C m = Mat2C::Identity();
  for (long n = first; n < first + count; ++n) m = szego(seq(n), z) * m;
  return m;
}

/// One step Y(n,z) of the (u,v) recursion with v = ℒ⁻¹u.
inline Mat2C gz_step(const CoefficientSequence& seq, long n, cplx z) {
  require(z != cplx{0.0, 0.0}, "gz_step: z must be nonzero");
  const cplx a = seq(n);
  require(std::abs(a) < 1.0, "gz_step: |alpha_n| must be < 1");
  const double r = rho_of(a);
  Mat2C y;
  if (floor_mod(n, 2) == 0) {
    y << -a, 1.0, 1.0, -std::conj(a);
  } else {
    y << -std::conj(a), z, 1.0 / z, -a;
  }
  return y / r;
}

/// (1/ρ)·[[α, z], [z⁻¹, ᾱ]], the inverse of an odd step.
inline Mat2C gz_odd_inverse(cplx alpha, cplx z) {
  require(std::abs(alpha) < 1.0, "gz_odd_inverse: |alpha| must be < 1");
  require(z != cplx{0.0, 0.0}, "gz_odd_inverse: z must be nonzero");
  Mat2C y;
  y << alpha, z, 1.0 / z, std::conj(alpha);
  return y / rho_of(alpha);
}

/// Φ_q(z) = Y(q−1,z) ⋯ Y(0,z)
inline Mat2C monodromy(const CoefficientSequence& seq, long q, cplx z) {
  require(q > 0 && q % 2 == 0, "monodromy: q must be a positive even integer");
  detail::require_unimodular(z, "monodromy");
  Mat2C m = Mat2C::Identity();
  for (long n = 0; n < q; ++n) m = gz_step(seq, n, z) * m;
  return m;
}

/// Period used for exact periodic formulas: the sequence period, doubled if odd.
inline long even_period(const CoefficientSequence& seq) {
  require(seq.period().has_value(), "sequence has no period");
  const long p = *seq.period();
  return p % 2 == 0 ? p : 2 * p;
}

/// (1/q)·log ρ(Φ_q(z)) for a periodic sequence.
inline double lyapunov_periodic(const CoefficientSequence& seq, cplx z) {
  const long q = even_period(seq);
  return std::log(detail::spectral_radius2x2(monodromy(seq, q, z))) / static_cast<double>(q);
}

/// Birkhoff average (1/N)·log‖S(α_{N−1},z)⋯S(α_0,z)‖ along the orbit,
/// renormalizing by the largest entry every `scale_every` steps.
inline double lyapunov_orbit(const std::vector<cplx>& alphas, cplx z, int scale_every = 16) {
  require(!alphas.empty(), "lyapunov: N must be positive");
  require(scale_every >= 1, "lyapunov: scale_every must be positive");
  detail::require_unimodular(z, "lyapunov");
  Mat2C m = Mat2C::Identity();
  double log_scale = 0.0;
  int since = 0;
  for (cplx a : alphas) {
    m = szego(a, z) * m;
    if (++since == scale_every) {
      since = 0;
      const double s = m.cwiseAbs().maxCoeff();
      m /= s;
      log_scale += std::log(s);
    }
  }
  return (log_scale + std::log(detail::norm2x2(m))) / static_cast<double>(alphas.size());
}

inline double lyapunov_orbit(const CoefficientSequence& seq, cplx z, long N, int scale_every = 16) {
  require(N > 0, "lyapunov: N must be positive");
  return lyapunov_orbit(seq.sample(0, N), z, scale_every);
}

/// L(z). Periodic sequences use the exact monodromy formula; others the
/// orbit average over N steps.
inline double lyapunov(const CoefficientSequence& seq, cplx z, long N, int scale_every = 16) {
  require(N > 0, "lyapunov: N must be positive");
  detail::require_unimodular(z, "lyapunov");
  if (seq.period()) return lyapunov_periodic(seq, z);
  return lyapunov_orbit(seq, z, N, scale_every);
}

/// n equally spaced angles 2πj/n.
inline std::vector<double> uniform_grid(std::size_t n) {
  require(n >= 1, "uniform_grid: need at least one point");
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = two_pi * static_cast<double>(j) / static_cast<double>(n);
  return g;
}

struct LyapunovSweep {
  std::vector<double> theta;
  std::vector<double> L;
  long N = 0;
  double epsilon = 0.0;
  CircleArcSet zero_set;
  std::vector<std::string> warnings;
};

/// Arcs between consecutive grid angles (cyclically) whose values are both
/// below eps; isolated sub-threshold points become degenerate arcs.
inline CircleArcSet threshold_arcs(const std::vector<double>& theta, const std::vector<double>& values, double eps) {
  require(theta.size() == values.size(), "threshold_arcs: size mismatch");
  const std::size_t n = theta.size();
  std::vector<Arc> arcs;
  bool all = n > 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (values[j] >= eps) { all = false; continue; }
    arcs.push_back({theta[j], theta[j]});
    const std::size_t nx = (j + 1) % n;
    if (n > 1 && values[nx] < eps) {
      const double hi = nx == 0 ? theta[0] + two_pi : theta[nx];
      arcs.push_back({theta[j], hi});
    }
  }
  if (all && n > 1) return CircleArcSet::full();
  return CircleArcSet(arcs);
}

/// Grid estimate of 𝒵 with threshold ε_L.
inline LyapunovSweep estimate_Z(const CoefficientSequence& seq, const std::vector<double>& grid, long N, double eps,
                                unsigned threads = 1, int scale_every = 16) {
  require(!grid.empty(), "estimate_Z: grid must be nonempty");
  require(N > 0, "estimate_Z: N must be positive");
  require(eps > 0.0, "estimate_Z: epsilon must be positive");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    require(grid[j] >= 0.0 && grid[j] < two_pi, "estimate_Z: grid angles must lie in [0, 2pi)");
    if (j > 0) require(grid[j] > grid[j - 1], "estimate_Z: grid must be strictly increasing");
  }
  LyapunovSweep out;
  out.theta = grid;
  out.L.assign(grid.size(), 0.0);
  out.N = N;
  out.epsilon = eps;
  const bool periodic = seq.period().has_value();
  const std::vector<cplx> alphas = periodic ? std::vector<cplx>{} : seq.sample(0, N);
  parallel_for(grid.size(), threads, [&](std::size_t j) {
    const cplx z = unit(grid[j]);
    out.L[j] = periodic ? lyapunov_periodic(seq, z) : lyapunov_orbit(alphas, z, scale_every);
  });
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (out.L[j] < -eps / 10.0)
      out.warnings.push_back("negative Lyapunov estimate " + std::to_string(out.L[j]) + " at theta=" +
                             std::to_string(grid[j]) + "; N may be too small");
  }
  out.zero_set = threshold_arcs(grid, out.L, eps);
  return out;
}

}  // namespace cmv
