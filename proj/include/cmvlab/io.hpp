#pragma once

// JSON and CSV serialization of matrices, arc sets, band tables, Lyapunov
// sweeps and walk output. Numbers in CSV files carry 17 significant digits.

#include "cmvlab/floquet.hpp"
#include "cmvlab/qwalk.hpp"
#include "cmvlab/weyl.hpp"

#include <json.hpp>

#include <cstdio>
#include <ostream>

namespace cmv::io {

using json = nlohmann::json;

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const BandedUnitary& U) {
  json entries = json::array();
  for (long i = 0; i < U.dim; ++i)
    for (long j = 0; j < U.dim; ++j) entries.push_back(complex_json(U.entries(i, j)));
  return {{"offset", U.offset}, {"dim", U.dim}, {"boundary", std::string(to_string(U.boundary))}, {"entries", entries}};
}

/// Nonzero entries as rows i,j,re,im.
inline void write_matrix_csv(std::ostream& os, const BandedUnitary& U, double drop = 0.0) {
  os << "i,j,re,im\n";
  for (long i = 0; i < U.dim; ++i)
    for (long j = 0; j < U.dim; ++j) {
      const cplx v = U.entries(i, j);
      if (std::abs(v) > drop) os << i << ',' << j << ',' << num(v.real()) << ',' << num(v.imag()) << '\n';
    }
}

inline json to_json(const CircleArcSet& S) {
  json arcs = json::array();
  for (const Arc& a : S.arcs()) arcs.push_back(json::array({a.lo, a.hi}));
  return {{"arcs", arcs}, {"measure", S.measure()}};
}

inline CircleArcSet arcs_from_json(const json& j, const std::string& where = "arcs") {
  const json& list = j.is_object() ? j.at("arcs") : j;
  if (!list.is_array()) throw ValidationError(where + ": expected a list of [lo, hi] pairs");
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& a = list[i];
    if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
      throw ValidationError(where + "[" + std::to_string(i) + "]: expected [lo, hi]");
    arcs.push_back({a[0].get<double>(), a[1].get<double>()});
  }
  return CircleArcSet(arcs);
}

inline void write_arcs_csv(std::ostream& os, const CircleArcSet& S) {
  os << "lo,hi\n";
  for (const Arc& a : S.arcs()) os << num(a.lo) << ',' << num(a.hi) << '\n';
}

inline void write_bands_csv(std::ostream& os, const std::vector<BandRow>& rows) {
  os << "q,n,k,re_z,im_z,re_dzdk,im_dzdk\n";
  for (const auto& r : rows)
    os << r.q << ',' << r.n << ',' << num(r.k) << ',' << num(r.z.real()) << ',' << num(r.z.imag()) << ','
       << num(r.dzdk.real()) << ',' << num(r.dzdk.imag()) << '\n';
}

inline void write_lyapunov_csv(std::ostream& os, const LyapunovSweep& s) {
  os << "theta,L,N,epsilon\n";
  for (std::size_t j = 0; j < s.theta.size(); ++j)
    os << num(s.theta[j]) << ',' << num(s.L[j]) << ',' << s.N << ',' << num(s.epsilon) << '\n';
}

inline json to_json(const LyapunovSweep& s) {
  return {{"theta", s.theta}, {"L", s.L}, {"N", s.N}, {"epsilon", s.epsilon}, {"zero_set", to_json(s.zero_set)},
          {"warnings", s.warnings}};
}

inline void write_distribution_csv(std::ostream& os, long t, const WalkState& s, bool header) {
  if (header) os << "t,n,p_plus,p_minus\n";
  for (long n = s.n_lo; n <= s.n_hi; ++n)
    os << t << ',' << n << ',' << num(std::norm(s.at(n, true))) << ',' << num(std::norm(s.at(n, false))) << '\n';
}

inline void write_defect_csv(std::ostream& os, const std::vector<DefectSample>& rows) {
  os << "theta,r,defect\n";
  for (const auto& r : rows) os << num(r.theta) << ',' << num(r.r) << ',' << num(r.defect) << '\n';
}

}  // namespace cmv::io
