#pragma once

// Verblunsky coefficient sequences: constructors, periodization and the
// limit-periodic (Pastur–Tkachenko type) families built from them.

#include "cmvlab/core.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cmv {

/// A map n ↦ α_n into the open unit disk with a certified sup-norm bound.
///
/// Values are immutable after construction; copies share the evaluator.
class CoefficientSequence {
public:
  using Evaluator = std::function<cplx(long)>;

  CoefficientSequence(Evaluator eval, double sup_norm_bound, std::optional<long> period = std::nullopt,
                      std::string kind = "custom")
      : eval_(std::make_shared<const Evaluator>(std::move(eval))),
        bound_(sup_norm_bound),
        period_(period),
        kind_(std::move(kind)) {
    require(bound_ >= 0.0 && bound_ < 1.0, "sup_norm_bound must lie in [0,1)");
    require(!period_ || *period_ >= 1, "period must be a positive integer");
  }

  cplx operator()(long n) const { return (*eval_)(n); }
  double rho(long n) const { return rho_of((*eval_)(n)); }

  double sup_norm_bound() const { return bound_; }
  std::optional<long> period() const { return period_; }
  const std::string& kind() const { return kind_; }

  /// α_first, …, α_{first+count−1}
  std::vector<cplx> sample(long first, long count) const {
    std::vector<cplx> out(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = (*eval_)(first + i);
    return out;
  }

private:
  std::shared_ptr<const Evaluator> eval_;
  double bound_;
  std::optional<long> period_;
  std::string kind_;
};

inline CoefficientSequence constant_seq(cplx a) {
  require(std::abs(a) < 1.0, "constant_seq: |a| must be < 1");
  return CoefficientSequence([a](long) { return a; }, std::abs(a), 1, "constant");
}

/// α_n = λ·exp(2πi(nβ+θ))
inline CoefficientSequence quasiperiodic_seq(double lambda, double beta, double theta) {
  require(lambda >= 0.0 && lambda < 1.0, "quasiperiodic_seq: lambda must lie in [0,1)");
  return CoefficientSequence(
      [=](long n) {
        // reduce the phase before exponentiating to keep large |n| accurate
        double phase = std::fmod(static_cast<double>(n) * beta, 1.0) + theta;
        return std::polar(lambda, two_pi * phase);
      },
      lambda, std::nullopt, "quasiperiodic");
}

/// q-periodic sequence with α_{j+nq} = values[j].
inline CoefficientSequence periodic_table(std::vector<cplx> values) {
  require(!values.empty(), "periodic_table: need at least one value");
  double bound = 0.0;
  for (cplx v : values) {
    require(std::abs(v) < 1.0, "periodic_table: every |alpha| must be < 1");
    bound = std::max(bound, std::abs(v));
  }
  const long q = static_cast<long>(values.size());
  auto table = std::make_shared<const std::vector<cplx>>(std::move(values));
  return CoefficientSequence([table, q](long n) { return (*table)[static_cast<std::size_t>(floor_mod(n, q))]; },
                             bound, q, "periodic_table");
}

/// Repeat seq(0), …, seq(q−1) with period q.
inline CoefficientSequence periodize(const CoefficientSequence& seq, long q) {
  require(q >= 1, "periodize: q must be >= 1");
  auto seeded = periodic_table(seq.sample(0, q));
  // keep the source bound; the table bound can only be smaller
  return CoefficientSequence([seeded](long n) { return seeded(n); }, seq.sup_norm_bound(), q, "periodized");
}

/// Uniform double in [0,1) from the top 53 bits, identical on every platform.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// q-periodic sequence with values uniform in the disk of radius `bound`.
inline CoefficientSequence random_periodic(long q, double bound, std::uint64_t seed) {
  require(q >= 1, "random_periodic: q must be >= 1");
  require(bound >= 0.0 && bound < 1.0, "random_periodic: bound must lie in [0,1)");
  std::mt19937_64 rng(seed);
  std::vector<cplx> v(static_cast<std::size_t>(q));
  for (auto& a : v) {
    const double r = bound * std::sqrt(unit_uniform(rng));
    a = std::polar(r, two_pi * unit_uniform(rng));
  }
  auto t = periodic_table(std::move(v));
  return CoefficientSequence([t](long n) { return t(n); }, bound, q, "random_periodic");
}

// ---------------------------------------------------------------------------

struct PeriodicStage {
  long period;
  CoefficientSequence seq;
};

/// Periodic approximants α^{(n)} (period q_n) of a limit sequence.
struct LimitPeriodicFamily {
  std::vector<PeriodicStage> stages;
  CoefficientSequence limit;
  /// φ with ‖ℰ_n − ℰ‖ ≤ φ(q_n); empty when no certified rate is known.
  std::function<double(double)> rate;
  /// Closed-form α^{(n)}(j) − α(j); empty means "evaluate by subtraction".
  std::function<cplx(std::size_t, long)> tail;

  cplx stage_minus_limit(std::size_t n, long j) const {
    if (tail) return tail(n, j);
    return stages.at(n).seq(j) - limit(j);
  }

  void validate() const {
    require(!stages.empty(), "LimitPeriodicFamily: needs at least one stage");
    for (std::size_t n = 0; n < stages.size(); ++n) {
      require(stages[n].period >= 1, "LimitPeriodicFamily: periods must be positive");
      require(stages[n].seq.period().has_value() && *stages[n].seq.period() == stages[n].period,
              "LimitPeriodicFamily: stage sequence must carry its period");
      if (n > 0)
        require(stages[n].period % stages[n - 1].period == 0,
                "LimitPeriodicFamily: q_n must divide q_{n+1}");
    }
  }
};

/// Lipschitz constant of α ↦ ℰ in operator norm for sup-norms ≤ bound:
/// ‖ℰ−ℰ′‖ ≤ ‖ℒ−ℒ′‖ + ‖ℳ−ℳ′‖ and ‖ϴ(α)−ϴ(β)‖_F ≤ √2|α−β|/√(1−bound²).
inline double cmv_lipschitz_bound(double bound) { return 2.0 * std::numbers::sqrt2 / std::sqrt(1.0 - bound * bound); }

/// n ↦ base_amp·exp(−q_{n+1}²) with q_n = q0·2ⁿ.
inline std::function<double(int)> gaussian_decay(double base_amp, long q0) {
  return [=](int n) {
    double q = static_cast<double>(q0) * std::ldexp(1.0, n + 1);
    return base_amp * std::exp(-q * q);
  };
}

/// n ↦ base_amp·b^{−q_{n+1}} with q_n = q0·2ⁿ.
inline std::function<double(int)> geometric_decay(double base_amp, long q0, double b) {
  return [=](int n) {
    double q = static_cast<double>(q0) * std::ldexp(1.0, n + 1);
    return base_amp * std::pow(b, -q);
  };
}

/// Stage 0 is the constant base_amp (period q0); stage n+1 adds the
/// q_{n+1}-periodic increment decay(n)·exp(2πij/q_{n+1}); the limit is the
/// final stage. Increments are summed in closed form so differences far
/// below double resolution of α itself remain exact.
inline LimitPeriodicFamily pastur_tkachenko_family(double base_amp, std::function<double(int)> decay, long q0,
                                                   int levels) {
  require(q0 > 0 && q0 % 2 == 0, "pastur_tkachenko_family: q0 must be a positive even integer");
  require(levels >= 0 && levels <= 40, "pastur_tkachenko_family: levels must lie in [0,40]");
  require(base_amp >= 0.0, "pastur_tkachenko_family: base_amp must be nonnegative");
  require(static_cast<bool>(decay), "pastur_tkachenko_family: decay function required");

  std::vector<double> amps(static_cast<std::size_t>(levels));
  std::vector<long> periods(static_cast<std::size_t>(levels) + 1);
  periods[0] = q0;
  double bound = base_amp;
  for (int n = 0; n < levels; ++n) {
    amps[static_cast<std::size_t>(n)] = decay(n);
    require(std::isfinite(amps[static_cast<std::size_t>(n)]) && amps[static_cast<std::size_t>(n)] >= 0.0,
            "pastur_tkachenko_family: decay must be finite and nonnegative");
    periods[static_cast<std::size_t>(n) + 1] = periods[static_cast<std::size_t>(n)] * 2;
    bound += amps[static_cast<std::size_t>(n)];
  }
  require(bound < 1.0, "pastur_tkachenko_family: parameters allow |alpha_n| >= 1");

  auto amp_ptr = std::make_shared<const std::vector<double>>(amps);
  auto per_ptr = std::make_shared<const std::vector<long>>(periods);
  auto increment = [amp_ptr, per_ptr](std::size_t m, long j) {
    const long q = (*per_ptr)[m + 1];
    return std::polar((*amp_ptr)[m], two_pi * static_cast<double>(floor_mod(j, q)) / static_cast<double>(q));
  };
  // α^{(n)}(j) = base + Σ_{m<n} inc_m(j), smallest terms first
  auto partial = [base_amp, increment](std::size_t n, long j) {
    cplx s{0.0, 0.0};
    for (std::size_t m = n; m-- > 0;) s += increment(m, j);
    return cplx(base_amp, 0.0) + s;
  };

  LimitPeriodicFamily fam{{}, constant_seq(0.0), {}, {}};
  for (std::size_t n = 0; n <= static_cast<std::size_t>(levels); ++n) {
    double stage_bound = base_amp;
    for (std::size_t m = 0; m < n; ++m) stage_bound += amps[m];
    CoefficientSequence s([partial, n](long j) { return partial(n, j); }, stage_bound, periods[n], "pt_stage");
    fam.stages.push_back({periods[n], std::move(s)});
  }
  const auto last = static_cast<std::size_t>(levels);
  fam.limit = CoefficientSequence([partial, last](long j) { return partial(last, j); }, bound, std::nullopt, "pt_limit");
  fam.tail = [increment, last](std::size_t n, long j) {
    cplx s{0.0, 0.0};
    for (std::size_t m = last; m-- > n;) s -= increment(m, j);
    return s;
  };
  const double lip = cmv_lipschitz_bound(bound);
  fam.rate = [amp_ptr, per_ptr, lip](double q) {
    // sup_j |α^{(n)}(j) − α(j)| ≤ Σ_{m ≥ n} amp_m for the first n with q_n ≥ q
    double s = 0.0;
    for (std::size_t m = amp_ptr->size(); m-- > 0;)
      if (static_cast<double>((*per_ptr)[m]) >= q) s += (*amp_ptr)[m];
    return lip * s;
  };
  fam.validate();
  return fam;
}

}  // namespace cmv
