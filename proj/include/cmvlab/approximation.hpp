#pragma once

// Desk-scale checks of periodic approximation: the summability criterion
// for limit-periodic families, Leb(Σ^{2q} ∖ 𝒵) along periodizations, and
// the telescoping lower bound on Leb(Σ_n).

#include "cmvlab/floquet.hpp"

namespace cmv {

struct LpCriterion {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double finite_part = 0.0;
  double tail_bound = 0.0;
  std::vector<double> norms;  // ‖ℰ_n − ℰ_{n−1}‖ for n = k+1 … last
};

/// Σ_{n>k} q_n‖ℰ_n − ℰ_{n−1}‖ < ½·Leb(Σ_k).
///
/// Norms of constructed stages come from norm_diff on a wrapped window of
/// 4·q_max sites. The sum past the last stage is bounded through the rate φ:
/// ‖ℰ_n − ℰ_{n−1}‖ ≤ φ(q_n) + φ(q_{n−1}), with periods continuing by the last
/// stage ratio. The bound is accepted when its terms vanish or shrink at
/// least geometrically with ratio ½ over eight consecutive terms.
inline LpCriterion lp_sum_criterion(const LimitPeriodicFamily& family, std::size_t k, double sigma_k_measure) {
  family.validate();
  require(k < family.stages.size(), "lp_sum_criterion: stage index k out of range");
  require(sigma_k_measure >= 0.0, "lp_sum_criterion: sigma_k_measure must be nonnegative");
  require(static_cast<bool>(family.rate), "lp_sum_criterion: family has no rate; the infinite tail cannot be certified");

  LpCriterion out;
  const auto& st = family.stages;
  const long qmax = st.back().period;
  for (std::size_t n = k + 1; n < st.size(); ++n) {
    const double d = norm_diff(st[n].seq, st[n - 1].seq, 4 * qmax);
    out.norms.push_back(d);
    out.finite_part += static_cast<double>(st[n].period) * d;
  }

  const double ratio = st.size() >= 2 ? static_cast<double>(st.back().period) / static_cast<double>(st[st.size() - 2].period)
                                      : 2.0;
  double q_prev = static_cast<double>(st.back().period);
  double tail = 0.0;
  double last_term = -1.0;
  int halving_run = 0;
  bool certified = false;
  for (int j = 0; j < 256; ++j) {
    const double q = q_prev * std::max(ratio, 2.0);
    const double term = q * (family.rate(q) + family.rate(q_prev));
    require(std::isfinite(term) && term >= 0.0, "lp_sum_criterion: rate returned an invalid value");
    tail += term;
    if (term == 0.0) { certified = true; break; }
    halving_run = (last_term > 0.0 && term <= 0.5 * last_term) ? halving_run + 1 : 0;
    last_term = term;
    if (halving_run >= 8) {
      tail += term;  // geometric remainder with ratio ≤ ½
      certified = true;
      break;
    }
    q_prev = q;
  }
  if (!certified) throw NumericalError("lp_sum_criterion: tail bound from rate is not summable");

  out.tail_bound = tail;
  out.lhs = out.finite_part + out.tail_bound;
  out.rhs = 0.5 * sigma_k_measure;
  out.holds = out.lhs < out.rhs;
  return out;
}

// ---------------------------------------------------------------------------

struct ApproximationRow {
  long q;              // Σ^{2q} uses the 2q-periodization
  double sigma_measure;
  double diff_measure;  // Leb(Σ^{2q} ∖ 𝒵_est)
};

struct ApproximationReport {
  LyapunovSweep zero_set;
  std::vector<ApproximationRow> rows;
  std::vector<double> hausdorff_steps;  // d_H(Σ^{2q_i}, Σ^{2q_{i+1}})
};

/// Leb(Σ^{2q} ∖ 𝒵_est) for each q in `qs`, with 𝒵 estimated on `grid`.
inline ApproximationReport periodic_approximation(const CoefficientSequence& seq, const std::vector<long>& qs,
                                                  const std::vector<double>& grid, long N, double eps,
                                                  std::size_t resolution, unsigned threads = 1) {
  require(!qs.empty(), "periodic_approximation: need at least one q");
  ApproximationReport rep;
  rep.zero_set = estimate_Z(seq, grid, N, eps, threads);
  std::vector<CircleArcSet> sigmas;
  for (long q : qs) {
    require(q >= 1, "periodic_approximation: q must be positive");
    const CircleArcSet sigma = band_set_discriminant(periodize(seq, 2 * q), 2 * q, resolution);
    rep.rows.push_back({q, sigma.measure(), diff_measure(sigma, rep.zero_set.zero_set)});
    sigmas.push_back(sigma);
  }
  for (std::size_t i = 0; i + 1 < sigmas.size(); ++i) rep.hausdorff_steps.push_back(hausdorff(sigmas[i], sigmas[i + 1]));
  return rep;
}

struct TelescopingRow {
  long q;
  double measure;      // Leb(Σ_n)
  double norm_step;    // ‖ℰ_n − ℰ_{n−1}‖ (0 for n = 0)
  double lower_bound;  // Leb(Σ_0) − Σ_{1≤j≤n} 2q_j·2arcsin(‖ℰ_j − ℰ_{j−1}‖/2)
};

/// Leb(Σ_n) against the bound from Leb(Σ_{j−1} ∖ Σ_j) ≤ 2q_j·δ_j, with δ_j the
/// angular radius of a chordal ball of size ‖ℰ_j − ℰ_{j−1}‖.
inline std::vector<TelescopingRow> telescoping_bound(const LimitPeriodicFamily& family, std::size_t resolution) {
  family.validate();
  std::vector<TelescopingRow> rows;
  const long qmax = family.stages.back().period;
  double bound = 0.0;
  for (std::size_t n = 0; n < family.stages.size(); ++n) {
    const auto& s = family.stages[n];
    const double meas = band_set_discriminant(s.seq, even_period(s.seq), resolution).measure();
    double step = 0.0;
    if (n == 0) {
      bound = meas;
    } else {
      step = norm_diff(s.seq, family.stages[n - 1].seq, 4 * qmax);
      bound -= 2.0 * static_cast<double>(s.period) * chord_to_angle(step);
    }
    rows.push_back({s.period, meas, step, bound});
  }
  return rows;
}

}  // namespace cmv
