#pragma once

// Coined quantum walks 𝐔 = 𝐒𝐐 on ℤ ⊗ ℂ², their CMV form under the ordering
// …, δ_0^+, δ_0^−, δ_1^+, δ_1^−, … and windowed time evolution.

#include "cmvlab/operator.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace cmv {

/// n ↦ Q_n ∈ 𝕌(2).
class CoinSequence {
public:
  using Evaluator = std::function<Mat2C(long)>;

  explicit CoinSequence(Evaluator eval, std::optional<long> period = std::nullopt, std::string kind = "custom")
      : eval_(std::make_shared<const Evaluator>(std::move(eval))), period_(period), kind_(std::move(kind)) {
    require(!period_ || *period_ >= 1, "CoinSequence: period must be positive");
  }

  Mat2C operator()(long n) const { return (*eval_)(n); }
  std::optional<long> period() const { return period_; }
  const std::string& kind() const { return kind_; }

  /// Q_n, rejected with the site index if it is not unitary to 1e-13.
  Mat2C checked(long n) const {
    const Mat2C q = (*eval_)(n);
    const double res = (q * q.adjoint() - Mat2C::Identity()).cwiseAbs().maxCoeff();
    if (!(res < 1e-13))
      throw ValidationError("coin at site " + std::to_string(n) + " is not unitary (residual " + std::to_string(res) +
                            ")");
    return q;
  }

private:
  std::shared_ptr<const Evaluator> eval_;
  std::optional<long> period_;
  std::string kind_;
};

inline CoinSequence constant_coin(const Mat2C& q, std::string kind = "constant") {
  return CoinSequence([q](long) { return q; }, 1, std::move(kind));
}

inline CoinSequence hadamard_coins() {
  Mat2C h;
  h << 1.0, 1.0, 1.0, -1.0;
  return constant_coin(h / std::numbers::sqrt2, "hadamard");
}

inline CoinSequence identity_coins() { return constant_coin(Mat2C::Identity(), "identity"); }

/// Coins periodic in n with Q_{j+nq} = table[j].
inline CoinSequence periodic_coins(std::vector<Mat2C> table) {
  require(!table.empty(), "periodic_coins: need at least one coin");
  const long q = static_cast<long>(table.size());
  auto t = std::make_shared<const std::vector<Mat2C>>(std::move(table));
  return CoinSequence([t, q](long n) { return (*t)[static_cast<std::size_t>(floor_mod(n, q))]; }, q, "periodic");
}

/// [[ρ, −α], [ᾱ, ρ]], the coin whose walk is the CMV operator with
/// α_{2n+1} = α and α_{2n} = 0.
inline Mat2C cgmv_coin(cplx alpha) {
  require(std::abs(alpha) < 1.0, "cgmv_coin: |alpha| must be < 1");
  const double r = rho_of(alpha);
  Mat2C q;
  q << r, -alpha, std::conj(alpha), r;
  return q;
}

// ---------------------------------------------------------------------------

/// Amplitudes (ψ_n⁺, ψ_n⁻) for n_lo ≤ n ≤ n_hi.
struct WalkState {
  long n_lo = 0;
  long n_hi = 0;
  std::vector<cplx> plus;
  std::vector<cplx> minus;

  long size() const { return n_hi - n_lo + 1; }

  static WalkState delta(long n, bool plus_spin, long half_width = 8) {
    WalkState s;
    s.n_lo = n - half_width;
    s.n_hi = n + half_width;
    s.plus.assign(static_cast<std::size_t>(s.size()), 0.0);
    s.minus.assign(static_cast<std::size_t>(s.size()), 0.0);
    (plus_spin ? s.plus : s.minus)[static_cast<std::size_t>(half_width)] = 1.0;
    return s;
  }

  cplx at(long n, bool plus_spin) const {
    if (n < n_lo || n > n_hi) return 0.0;
    return (plus_spin ? plus : minus)[static_cast<std::size_t>(n - n_lo)];
  }

  double norm2() const {
    double s = 0.0;
    for (std::size_t i = 0; i < plus.size(); ++i) s += std::norm(plus[i]) + std::norm(minus[i]);
    return s;
  }

  double probability(long n) const { return std::norm(at(n, true)) + std::norm(at(n, false)); }

  /// Extend the window to [lo, hi] with zeros.
  void grow_to(long lo, long hi) {
    require(lo <= n_lo && hi >= n_hi, "WalkState::grow_to: new window must contain the old one");
    std::vector<cplx> p(static_cast<std::size_t>(hi - lo + 1), 0.0), m(p.size(), 0.0);
    std::copy(plus.begin(), plus.end(), p.begin() + (n_lo - lo));
    std::copy(minus.begin(), minus.end(), m.begin() + (n_lo - lo));
    plus = std::move(p);
    minus = std::move(m);
    n_lo = lo;
    n_hi = hi;
  }
};

enum class WalkPolicy { wrap, absorbing };

/// 𝐔 = 𝐒𝐐 with (𝐔ψ)_n⁺ = (Q_{n−1}ψ_{n−1})⁺ and (𝐔ψ)_n⁻ = (Q_{n+1}ψ_{n+1})⁻.
/// `wrap` identifies n_hi+1 with n_lo on a fixed window; `absorbing` grows
/// the window whenever amplitude reaches its edge.
struct QuantumWalk {
  CoinSequence coins;
  WalkPolicy policy = WalkPolicy::absorbing;
  long n_lo = 0;  // wrap window, ignored for absorbing walks
  long n_hi = 0;
  double edge_tolerance = 1e-8;
  long max_sites = 1L << 22;

  /// Dense matrix on the wrap window, basis (n, +), (n, −) for n = n_lo…n_hi.
  MatrixXc matrix() const {
    require(policy == WalkPolicy::wrap, "QuantumWalk::matrix: only defined for wrap windows");
    const long N = n_hi - n_lo + 1;
    MatrixXc U = MatrixXc::Zero(2 * N, 2 * N);
    for (long i = 0; i < N; ++i) {
      const Mat2C q = coins.checked(n_lo + i);
      const long up = floor_mod(i + 1, N), down = floor_mod(i - 1, N);
      U(2 * up, 2 * i) += q(0, 0);
      U(2 * up, 2 * i + 1) += q(0, 1);
      U(2 * down + 1, 2 * i) += q(1, 0);
      U(2 * down + 1, 2 * i + 1) += q(1, 1);
    }
    return U;
  }
};

inline QuantumWalk build_walk(const CoinSequence& coins, long n_lo, long n_hi, WalkPolicy policy) {
  require(n_hi >= n_lo, "build_walk: window must be nonempty");
  for (long n = n_lo; n <= n_hi; ++n) coins.checked(n);
  return QuantumWalk{coins, policy, n_lo, n_hi};
}

namespace detail {

inline bool touches_edge(const WalkState& s, bool low, double tol) {
  const long margin = std::min<long>(2, s.size());
  for (long i = 0; i < margin; ++i) {
    const long n = low ? s.n_lo + i : s.n_hi - i;
    if (std::sqrt(s.probability(n)) > tol) return true;
  }
  return false;
}

inline WalkState step(const WalkState& s, const QuantumWalk& w) {
  WalkState out;
  out.n_lo = s.n_lo;
  out.n_hi = s.n_hi;
  const long N = s.size();
  out.plus.assign(static_cast<std::size_t>(N), 0.0);
  out.minus.assign(static_cast<std::size_t>(N), 0.0);
  const bool wrap = w.policy == WalkPolicy::wrap;
  for (long i = 0; i < N; ++i) {
    const cplx a = s.plus[static_cast<std::size_t>(i)], b = s.minus[static_cast<std::size_t>(i)];
    if (a == cplx{} && b == cplx{}) continue;
    const Mat2C q = w.coins.checked(s.n_lo + i);
    long up = i + 1, down = i - 1;
    if (wrap) { up = floor_mod(up, N); down = floor_mod(down, N); }
    if (up < N) out.plus[static_cast<std::size_t>(up)] += q(0, 0) * a + q(0, 1) * b;
    if (down >= 0) out.minus[static_cast<std::size_t>(down)] += q(1, 0) * a + q(1, 1) * b;
  }
  return out;
}

}  // namespace detail

/// 𝐔ᵗψ. Wrap walks need the state on exactly the walk window.
inline WalkState evolve(WalkState state, const QuantumWalk& w, long t) {
  require(t >= 0, "evolve: t must be nonnegative");
  require(state.plus.size() == static_cast<std::size_t>(state.size()) && state.minus.size() == state.plus.size(),
          "evolve: amplitude arrays do not match the window");
  if (w.policy == WalkPolicy::wrap)
    require(state.n_lo == w.n_lo && state.n_hi == w.n_hi, "evolve: state window differs from the wrap window");
  for (long s = 0; s < t; ++s) {
    if (w.policy == WalkPolicy::absorbing) {
      const bool lo = detail::touches_edge(state, true, w.edge_tolerance);
      const bool hi = detail::touches_edge(state, false, w.edge_tolerance);
      if (lo || hi) {
        const long pad = std::max<long>(16, state.size() / 2);
        if (state.size() + 2 * pad > w.max_sites)
          throw NumericalError("evolve: window would exceed " + std::to_string(w.max_sites) + " sites");
        state.grow_to(lo ? state.n_lo - pad : state.n_lo, hi ? state.n_hi + pad : state.n_hi);
      }
    }
    state = detail::step(state, w);
  }
  return state;
}

/// Σ_{|j| ≤ J} |⟨δ_j^+, 𝐔ᵗψ⟩|² + |⟨δ_j^−, 𝐔ᵗψ⟩|²
inline double survival_probability(const WalkState& state, long J) {
  require(J >= 0, "survival_probability: J must be nonnegative");
  double s = 0.0;
  for (long j = -J; j <= J; ++j) s += state.probability(j);
  return std::min(1.0, s);
}

inline double survival_probability(const WalkState& state0, const QuantumWalk& w, long J, long t) {
  return survival_probability(evolve(state0, w, t), J);
}

// ---------------------------------------------------------------------------

struct CmvForm {
  CoefficientSequence alpha;
  /// CMV index of δ_n^± (δ_n^+ ↦ 2n+1, δ_n^− ↦ 2n+2).
  static long index(long n, bool plus_spin) { return plus_spin ? 2 * n + 1 : 2 * n + 2; }
};

/// Verblunsky coefficients of the walk, valid when every coin has the form
/// [[ρ, −α], [ᾱ, ρ]] with ρ > 0. Sites n_lo…n_hi are checked (one period
/// suffices for periodic coins); a non-conforming coin is reported by site.
inline CmvForm to_cmv(const CoinSequence& coins, long n_lo, long n_hi) {
  require(n_hi >= n_lo, "to_cmv: window must be nonempty");
  auto alpha_at = [coins](long n) -> cplx {
    const Mat2C q = coins.checked(n);
    const double tol = 1e-13;
    const bool conforming = std::abs(q(0, 0) - q(1, 1)) < tol && std::abs(q(0, 0).imag()) < tol &&
                            q(0, 0).real() > tol && std::abs(q(0, 1) + std::conj(q(1, 0))) < tol;
    if (!conforming)
      throw ValidationError("coin at site " + std::to_string(n) +
                            " is outside the CMV gauge [[rho, -alpha], [conj(alpha), rho]] with rho > 0");
    return std::conj(q(1, 0));
  };
  long lo = n_lo, hi = n_hi;
  if (coins.period()) { lo = 0; hi = *coins.period() - 1; }
  double bound = 0.0;
  for (long n = lo; n <= hi; ++n) bound = std::max(bound, std::abs(alpha_at(n)));
  std::optional<long> period;
  if (coins.period()) period = 2 * *coins.period();
  CoefficientSequence seq(
      [alpha_at](long m) { return floor_mod(m, 2) == 0 ? cplx{} : alpha_at((m - 1) / 2); }, bound, period, "cgmv");
  return {std::move(seq)};
}

/// Walk matrix on a wrap window, permuted into CMV order: local index
/// i ↔ CMV site 2·n_lo + i, with δ_{n_hi}^− wrapping to 0.
inline MatrixXc walk_in_cmv_order(const QuantumWalk& w) {
  const MatrixXc U = w.matrix();
  const long N = w.n_hi - w.n_lo + 1;
  std::vector<long> perm(static_cast<std::size_t>(2 * N));
  for (long i = 0; i < N; ++i) {
    perm[static_cast<std::size_t>(2 * i)] = 2 * i + 1;                      // (n, +)
    perm[static_cast<std::size_t>(2 * i + 1)] = floor_mod(2 * i + 2, 2 * N);  // (n, −)
  }
  MatrixXc out = MatrixXc::Zero(2 * N, 2 * N);
  for (long r = 0; r < 2 * N; ++r)
    for (long c = 0; c < 2 * N; ++c)
      out(perm[static_cast<std::size_t>(r)], perm[static_cast<std::size_t>(c)]) = U(r, c);
  return out;
}

}  // namespace cmv
