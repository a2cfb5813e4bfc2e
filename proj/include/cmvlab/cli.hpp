#pragma once

// Batch subcommands. Each takes a JSON config, writes its outputs and a
// manifest.json into one directory and reports through exit codes
// 0 (success), 2 (validation error) and 3 (numerical error).

#include "cmvlab/approximation.hpp"
#include "cmvlab/config.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cmv::cli {

using json = nlohmann::json;
namespace fs = std::filesystem;

inline constexpr const char* tool_version = "0.1.0";

struct RunOptions {
  fs::path out = ".";
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

/// Collects outputs and writes the manifest that every output refers to.
class Run {
public:
  Run(std::string command, json config, const RunOptions& opt)
      : command_(std::move(command)), config_(std::move(config)), opt_(opt) {
    if (!config_.is_object()) throw ValidationError("config: expected a JSON object");
    if (opt.seed) config_["seed"] = *opt.seed;
    if (config_.contains("seed") && !config_["seed"].is_number_unsigned() && !config_["seed"].is_number_integer())
      throw ValidationError("config.seed: expected an integer");
    seed_ = config_.value("seed", std::uint64_t{0});
    std::error_code ec;
    fs::create_directories(opt.out, ec);
    if (ec) throw ValidationError("--out: cannot create directory " + opt.out.string() + ": " + ec.message());
  }

  const json& config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  unsigned threads() const { return opt_.threads; }

  /// Record an effective parameter (defaults included) in the manifest.
  template <class T>
  T param(const char* key, T value) {
    params_[key] = value;
    return value;
  }

  long int_param(const char* key, long fallback) {
    return param(key, config::detail::integer_or(config_, "config", key, fallback));
  }
  double num_param(const char* key, double fallback) {
    return param(key, config::detail::number_or(config_, "config", key, fallback));
  }
  const json& required(const char* key) const { return config::detail::field(config_, "config", key); }

  void warn(const std::string& w) {
    warnings_.push_back(w);
    std::cerr << "warning: " << w << '\n';
  }

  void write_csv(const std::string& name, const std::string& body) {
    write(name, "# manifest: manifest.json\n" + body);
  }

  void write_json(const std::string& name, json body) {
    body["manifest"] = "manifest.json";
    write(name, body.dump(2) + "\n");
  }

  void finish() {
    json params = config_;
    for (auto& [k, v] : params_.items()) params[k] = v;
    json m = {{"command", command_}, {"parameters", params}, {"seed", seed_}, {"tool_version", tool_version},
              {"outputs", outputs_}, {"warnings", warnings_}};
    std::ofstream f(opt_.out / "manifest.json");
    f << m.dump(2) << '\n';
    if (!f) throw std::runtime_error("failed to write manifest.json");
  }

  const std::vector<std::string>& outputs() const { return outputs_; }

private:
  void write(const std::string& name, const std::string& text) {
    std::ofstream f(opt_.out / name, std::ios::binary);
    f << text;
    if (!f) throw std::runtime_error("failed to write " + (opt_.out / name).string());
    outputs_.push_back(name);
  }

  std::string command_;
  json config_;
  RunOptions opt_;
  std::uint64_t seed_ = 0;
  json params_ = json::object();
  std::vector<std::string> outputs_;
  std::vector<std::string> warnings_;
};

inline CoefficientSequence sequence_of(Run& run) {
  return config::sequence_from_json(run.required("sequence"), "config.sequence", run.seed());
}

// ---------------------------------------------------------------------------

inline void cmd_bands(Run& run) {
  const auto seq = sequence_of(run);
  const long q = run.int_param("q", 0);
  if (q <= 0 || q % 2 != 0) throw ValidationError("config.q: q must be a positive even integer, got " + std::to_string(q));
  if (!seq.period() || q % *seq.period() != 0)
    throw ValidationError("config.q: the sequence period must divide q");
  const long k_points = run.int_param("k_points", 64);
  const long resolution = run.int_param("resolution", 4096);
  const long eigen_k = run.int_param("eigen_k_points", 256);
  if (k_points < 1) throw ValidationError("config.k_points: must be >= 1");

  const auto spec = periodic_spectrum(seq, q, static_cast<std::size_t>(resolution), static_cast<std::size_t>(eigen_k));
  if (spec.flagged)
    run.warn("discriminant and eigenvalue band sets differ by " + io::num(spec.discrepancy));
  std::ostringstream csv;
  io::write_bands_csv(csv, band_table(seq, q, static_cast<std::size_t>(k_points)));
  run.write_csv("bands.csv", csv.str());
  json out = io::to_json(spec.bands);
  out["q"] = q;
  out["method_discrepancy"] = spec.discrepancy;
  out["flagged"] = spec.flagged;
  run.write_json("spectrum.json", out);
}

inline void cmd_lyapunov(Run& run) {
  const auto seq = sequence_of(run);
  const long grid = run.int_param("grid", 1024);
  const long N = run.int_param("N", 100000);
  const double eps = run.num_param("epsilon", 1e-2);
  const long scale_every = run.int_param("scale_every", 16);
  if (grid < 8) throw ValidationError("config.grid: need at least 8 grid points");
  if (N < 1000) throw ValidationError("config.N: need N >= 1000, got " + std::to_string(N));
  if (!(eps > 0.0)) throw ValidationError("config.epsilon: must be positive");
  if (scale_every < 1) throw ValidationError("config.scale_every: must be >= 1");

  auto sweep = estimate_Z(seq, uniform_grid(static_cast<std::size_t>(grid)), N, eps, run.threads(),
                          static_cast<int>(scale_every));
  for (const auto& w : sweep.warnings) run.warn(w);
  std::ostringstream csv;
  io::write_lyapunov_csv(csv, sweep);
  run.write_csv("lyapunov.csv", csv.str());
  json z = io::to_json(sweep.zero_set);
  z["N"] = N;
  z["epsilon"] = eps;
  run.write_json("zero_set.json", z);
}

inline void cmd_approx(Run& run) {
  const auto family = config::family_from_json(run.required("family"), "config.family");
  const long grid = run.int_param("grid", 2048);
  const long N = run.int_param("N", 100000);
  const double eps = run.num_param("epsilon", 1e-2);
  const long resolution = run.int_param("resolution", 4096);
  const long k = run.int_param("k", 0);
  if (grid < 8) throw ValidationError("config.grid: need at least 8 grid points");
  if (N < 1000) throw ValidationError("config.N: need N >= 1000");
  if (k < 0 || k >= static_cast<long>(family.stages.size())) throw ValidationError("config.k: stage index out of range");

  std::vector<long> qs;
  for (const auto& s : family.stages) qs.push_back(s.period / 2);
  const auto rep = periodic_approximation(family.limit, qs, uniform_grid(static_cast<std::size_t>(grid)), N, eps,
                                          static_cast<std::size_t>(resolution), run.threads());
  for (const auto& w : rep.zero_set.warnings) run.warn(w);

  json rows = json::array();
  bool nonincreasing = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& r = rep.rows[i];
    rows.push_back({{"q", r.q}, {"period", 2 * r.q}, {"sigma_measure", r.sigma_measure}, {"diff_measure", r.diff_measure}});
    if (i > 0 && r.diff_measure > rep.rows[i - 1].diff_measure + 1e-9) nonincreasing = false;
  }
  const double sigma_k =
      band_set_discriminant(family.stages[static_cast<std::size_t>(k)].seq,
                            even_period(family.stages[static_cast<std::size_t>(k)].seq), static_cast<std::size_t>(resolution))
          .measure();
  const auto lp = lp_sum_criterion(family, static_cast<std::size_t>(k), sigma_k);
  json tele = json::array();
  for (const auto& t : telescoping_bound(family, static_cast<std::size_t>(resolution)))
    tele.push_back({{"q", t.q}, {"measure", t.measure}, {"norm_step", t.norm_step}, {"lower_bound", t.lower_bound}});

  json out = {{"rows", rows},
              {"diff_measure_nonincreasing", nonincreasing},
              {"zero_set", io::to_json(rep.zero_set.zero_set)},
              {"hausdorff_steps", rep.hausdorff_steps},
              {"lp_criterion",
               {{"k", k}, {"holds", lp.holds}, {"lhs", lp.lhs}, {"rhs", lp.rhs}, {"finite_part", lp.finite_part},
                {"tail_bound", lp.tail_bound}}},
              {"telescoping", tele}};
  run.write_json("report.json", out);
}

inline void cmd_walk(Run& run) {
  const auto coins = config::coins_from_json(run.required("coins"), "config.coins");
  const long steps = run.int_param("steps", -1);
  const long J = run.int_param("J", 5);
  if (steps < 0) throw ValidationError("config.steps: required nonnegative integer");
  if (J < 0) throw ValidationError("config.J: must be nonnegative");

  long site = 0;
  bool plus = true;
  if (run.config().contains("initial")) {
    const json& init = run.config().at("initial");
    site = config::detail::integer_or(init, "config.initial", "site", 0);
    const std::string spin = init.value("spin", std::string("+"));
    if (spin != "+" && spin != "-") throw ValidationError("config.initial.spin: expected \"+\" or \"-\"");
    plus = spin == "+";
  }
  std::vector<long> snapshots{steps};
  if (run.config().contains("snapshots")) {
    snapshots.clear();
    const json& s = run.config().at("snapshots");
    if (!s.is_array()) throw ValidationError("config.snapshots: expected a list of times");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const long t = config::detail::integer(s[i], "config.snapshots[" + std::to_string(i) + "]");
      if (t < 0 || t > steps) throw ValidationError("config.snapshots[" + std::to_string(i) + "]: must lie in [0, steps]");
      snapshots.push_back(t);
    }
  }
  std::sort(snapshots.begin(), snapshots.end());

  const QuantumWalk walk{coins};
  WalkState state = WalkState::delta(site, plus);
  std::ostringstream dist, surv;
  surv << "t,survival,norm\n";
  bool header = true;
  std::size_t next = 0;
  for (long t = 0; t <= steps; ++t) {
    if (t > 0) state = evolve(std::move(state), walk, 1);
    const double norm = state.norm2();
    if (std::abs(norm - 1.0) > 1e-9 * static_cast<double>(std::max<long>(t, 1)))
      throw NumericalError("walk: norm drifted to " + io::num(norm) + " at t=" + std::to_string(t));
    surv << t << ',' << io::num(survival_probability(state, J)) << ',' << io::num(norm) << '\n';
    while (next < snapshots.size() && snapshots[next] == t) {
      io::write_distribution_csv(dist, t, state, header);
      header = false;
      ++next;
    }
  }
  run.write_csv("distribution.csv", dist.str());
  run.write_csv("survival.csv", surv.str());
}

inline void cmd_sieve_check(Run& run) {
  const auto seq = sequence_of(run);
  const long dim = run.int_param("dim", 16);
  const auto r = verify_sieve_square(seq, dim);
  const double tol = run.num_param("tolerance", 1e-12);
  run.write_json("sieve_check.json",
                 {{"dim", dim},
                  {"X_invariant_residual", r.X_invariant_residual},
                  {"Y_invariant_residual", r.Y_invariant_residual},
                  {"similarity_residual", r.similarity_residual},
                  {"pass", std::max({r.X_invariant_residual, r.Y_invariant_residual, r.similarity_residual}) < tol}});
}

inline void cmd_weyl_defect(Run& run) {
  const auto seq = sequence_of(run);
  const long k = run.int_param("k", 0);
  const long samples = run.int_param("samples", 16);
  std::vector<double> radii{0.9, 0.99};
  if (run.config().contains("radii")) {
    radii.clear();
    const json& rs = run.config().at("radii");
    if (!rs.is_array() || rs.empty()) throw ValidationError("config.radii: expected a nonempty list");
    for (std::size_t i = 0; i < rs.size(); ++i)
      radii.push_back(config::detail::number(rs[i], "config.radii[" + std::to_string(i) + "]"));
  }
  run.param("radii", radii);
  const std::string convention = run.param("convention", run.config().value("convention", std::string("glue")));
  if (convention != "glue" && convention != "literal")
    throw ValidationError("config.convention: expected \"glue\" or \"literal\"");
  const GlueSite site = convention == "glue" ? GlueSite::glue : GlueSite::literal;

  CircleArcSet S = CircleArcSet::full();
  if (run.config().contains("set")) {
    S = io::arcs_from_json(run.config().at("set"), "config.set");
  } else if (seq.period()) {
    S = band_set_discriminant(seq, even_period(seq), 4096);
  }
  std::vector<DefectSample> all;
  json per_r = json::array();
  for (double r : radii) {
    auto rows = defect_sweep(seq, k, S, r, static_cast<std::size_t>(samples), 0, site);
    double worst = 0.0;
    for (const auto& s : rows) worst = std::max(worst, s.defect);
    per_r.push_back({{"r", r}, {"defect", worst}});
    all.insert(all.end(), rows.begin(), rows.end());
  }
  std::ostringstream csv;
  io::write_defect_csv(csv, all);
  run.write_csv("defect.csv", csv.str());
  run.write_json("defect.json", {{"k", k}, {"set", io::to_json(S)}, {"max_defect", per_r}});
}

inline const std::vector<std::pair<std::string, void (*)(Run&)>>& commands() {
  static const std::vector<std::pair<std::string, void (*)(Run&)>> table{
      {"bands", cmd_bands},           {"lyapunov", cmd_lyapunov},         {"approx", cmd_approx},
      {"walk", cmd_walk},             {"sieve-check", cmd_sieve_check},   {"weyl-defect", cmd_weyl_defect}};
  return table;
}

/// Run one subcommand and map failures to exit codes.
inline int execute(const std::string& command, const json& config, const RunOptions& opt, std::ostream& err = std::cerr) {
  try {
    for (const auto& [name, fn] : commands()) {
      if (name != command) continue;
      Run run(command, config, opt);
      fn(run);
      run.finish();
      return 0;
    }
    throw ValidationError("unknown command '" + command + "'");
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

inline json load_config(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("--config: cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError("--config " + path.string() + ": " + e.what());
  }
}

}  // namespace cmv::cli
