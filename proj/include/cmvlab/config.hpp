#pragma once

// JSON specs for coefficient sequences, limit-periodic families and coin
// sequences. Every validation error names the offending field path.

#include "cmvlab/io.hpp"

namespace cmv::config {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ValidationError(path + ": " + what);
}

inline const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long>();
}

inline double number_or(const json& j, const std::string& path, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : number(*it, path + "." + key);
}

inline long integer_or(const json& j, const std::string& path, const char* key, long fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : integer(*it, path + "." + key);
}

/// A number or a [re, im] pair.
inline cplx complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(path, "expected a number or a [re, im] pair");
}

/// Rethrow library validation errors with the field path prepended.
template <class Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline std::string kind_of(const json& j, const std::string& path) {
  const json& k = field(j, path, "kind");
  if (!k.is_string()) fail(path + ".kind", "expected a string");
  return k.get<std::string>();
}

}  // namespace detail

inline std::function<double(int)> decay_from_json(const json& j, const std::string& path, double base_amp, long q0) {
  if (j.is_null()) return gaussian_decay(base_amp, q0);
  const std::string kind = detail::kind_of(j, path);
  const double amp = detail::number_or(j, path, "amplitude", base_amp);
  if (kind == "gaussian") return gaussian_decay(amp, q0);
  if (kind == "geometric") {
    const double b = detail::number(detail::field(j, path, "b"), path + ".b");
    if (!(b > 1.0)) detail::fail(path + ".b", "must be > 1");
    return geometric_decay(amp, q0, b);
  }
  detail::fail(path + ".kind", "unknown decay kind '" + kind + "' (expected gaussian or geometric)");
}

inline LimitPeriodicFamily family_from_json(const json& j, const std::string& path = "family") {
  const std::string kind = detail::kind_of(j, path);
  if (kind != "pt_family") detail::fail(path + ".kind", "expected 'pt_family'");
  const double base = detail::number_or(j, path, "base_amp", 0.1);
  const long q0 = detail::integer_or(j, path, "q0", 2);
  const long levels = detail::integer_or(j, path, "levels", 3);
  auto dec = j.contains("decay") ? decay_from_json(j.at("decay"), path + ".decay", base, q0) : gaussian_decay(base, q0);
  return detail::at_path(path, [&] { return pastur_tkachenko_family(base, dec, q0, static_cast<int>(levels)); });
}

inline CoefficientSequence sequence_from_json(const json& j, const std::string& path = "sequence",
                                              std::uint64_t default_seed = 0) {
  const std::string kind = detail::kind_of(j, path);
  if (kind == "constant") {
    const cplx a = detail::complex_value(detail::field(j, path, "a"), path + ".a");
    return detail::at_path(path + ".a", [&] { return constant_seq(a); });
  }
  if (kind == "quasiperiodic") {
    const double lambda = detail::number(detail::field(j, path, "lambda"), path + ".lambda");
    const double beta = detail::number(detail::field(j, path, "beta"), path + ".beta");
    const double theta = detail::number_or(j, path, "theta", 0.0);
    return detail::at_path(path + ".lambda", [&] { return quasiperiodic_seq(lambda, beta, theta); });
  }
  if (kind == "periodic_table") {
    const json& vals = detail::field(j, path, "values");
    if (!vals.is_array() || vals.empty()) detail::fail(path + ".values", "expected a nonempty list");
    std::vector<cplx> v;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const std::string p = path + ".values[" + std::to_string(i) + "]";
      v.push_back(detail::complex_value(vals[i], p));
      if (!(std::abs(v.back()) < 1.0)) detail::fail(p, "|alpha| must be < 1");
    }
    return periodic_table(std::move(v));
  }
  if (kind == "random_periodic") {
    const long q = detail::integer(detail::field(j, path, "q"), path + ".q");
    const double bound = detail::number_or(j, path, "bound", 0.5);
    const std::uint64_t seed =
        j.contains("seed") ? static_cast<std::uint64_t>(detail::integer(j.at("seed"), path + ".seed")) : default_seed;
    return detail::at_path(path, [&] { return random_periodic(q, bound, seed); });
  }
  if (kind == "pt_family") return family_from_json(j, path).limit;
  if (kind == "sieve") return sieve(sequence_from_json(detail::field(j, path, "of"), path + ".of", default_seed));
  if (kind == "periodize") {
    const long q = detail::integer(detail::field(j, path, "q"), path + ".q");
    auto inner = sequence_from_json(detail::field(j, path, "of"), path + ".of", default_seed);
    return detail::at_path(path + ".q", [&] { return periodize(inner, q); });
  }
  detail::fail(path + ".kind", "unknown sequence kind '" + kind + "'");
}

inline Mat2C matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) detail::fail(path, "expected a 2x2 matrix [[a, b], [c, d]]");
  Mat2C m;
  for (int r = 0; r < 2; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[static_cast<std::size_t>(r)].is_array() || j[static_cast<std::size_t>(r)].size() != 2)
      detail::fail(rp, "expected a row of two entries");
    for (int c = 0; c < 2; ++c)
      m(r, c) = detail::complex_value(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                                      rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

/// Coin specs: hadamard, identity, constant {matrix}, periodic {matrices}
/// (site n uses matrices[n mod q]) and cgmv {alphas}.
inline CoinSequence coins_from_json(const json& j, const std::string& path = "coins") {
  const std::string kind = detail::kind_of(j, path);
  auto checked_table = [&](std::vector<Mat2C> table, const std::string& list) {
    for (std::size_t i = 0; i < table.size(); ++i) {
      const double res = (table[i] * table[i].adjoint() - Mat2C::Identity()).cwiseAbs().maxCoeff();
      if (!(res < 1e-13))
        detail::fail(list + "[" + std::to_string(i) + "]",
                     "coin for site " + std::to_string(i) + " (mod period) is not unitary");
    }
    return table;
  };
  if (kind == "hadamard") return hadamard_coins();
  if (kind == "identity") return identity_coins();
  if (kind == "constant") {
    auto t = checked_table({matrix_from_json(detail::field(j, path, "matrix"), path + ".matrix")}, path + ".matrix");
    return constant_coin(t[0]);
  }
  if (kind == "periodic") {
    const json& list = detail::field(j, path, "matrices");
    if (!list.is_array() || list.empty()) detail::fail(path + ".matrices", "expected a nonempty list");
    std::vector<Mat2C> t;
    for (std::size_t i = 0; i < list.size(); ++i)
      t.push_back(matrix_from_json(list[i], path + ".matrices[" + std::to_string(i) + "]"));
    return periodic_coins(checked_table(std::move(t), path + ".matrices"));
  }
  if (kind == "cgmv") {
    const json& list = detail::field(j, path, "alphas");
    if (!list.is_array() || list.empty()) detail::fail(path + ".alphas", "expected a nonempty list");
    std::vector<Mat2C> t;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = path + ".alphas[" + std::to_string(i) + "]";
      const cplx a = detail::complex_value(list[i], p);
      t.push_back(detail::at_path(p, [&] { return cgmv_coin(a); }));
    }
    return periodic_coins(std::move(t));
  }
  detail::fail(path + ".kind", "unknown coin kind '" + kind + "'");
}

}  // namespace cmv::config
