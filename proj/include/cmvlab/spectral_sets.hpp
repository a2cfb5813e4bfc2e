#pragma once

// Finite unions of closed arcs on the unit circle and the set-level
// quantities used to compare spectra: Lebesgue measure, chordal Hausdorff
// distance, ε-neighbourhoods, set differences and the z ↦ z² preimage.

#include "cmvlab/operator.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace cmv {

struct Arc {
  double lo;
  double hi;
  double length() const { return hi - lo; }
  friend bool operator==(const Arc&, const Arc&) = default;
};

/// Canonical finite union of closed arcs.
///
/// Internally the set is kept as sorted, disjoint segments inside [0, 2π]
/// (an arc through angle 0 is split there). `arcs()` returns the merged
/// form where such an arc is reported once as [lo, hi] with hi > 2π.
/// Endpoints closer than `tolerance` are merged.
class CircleArcSet {
public:
  static constexpr double tolerance = 1e-12;

  CircleArcSet() = default;

  explicit CircleArcSet(const std::vector<Arc>& arcs) {
    std::vector<Arc> raw;
    raw.reserve(arcs.size() + 1);
    for (const Arc& a : arcs) {
      require(std::isfinite(a.lo) && std::isfinite(a.hi) && a.hi >= a.lo, "CircleArcSet: arcs need lo <= hi");
      if (a.hi - a.lo >= two_pi - tolerance) {
        segs_ = {{0.0, two_pi}};
        return;
      }
      const double lo = wrap_angle(a.lo);
      const double hi = lo + (a.hi - a.lo);
      if (hi <= two_pi) {
        raw.push_back({lo, hi});
      } else {
        raw.push_back({lo, two_pi});
        raw.push_back({0.0, hi - two_pi});
      }
    }
    segs_ = normalize(std::move(raw));
  }

  static CircleArcSet full() { return CircleArcSet({{0.0, two_pi}}); }
  static CircleArcSet empty() { return {}; }

  /// Degenerate arcs, one per angle.
  static CircleArcSet points(const std::vector<double>& angles) {
    std::vector<Arc> a;
    a.reserve(angles.size());
    for (double t : angles) a.push_back({t, t});
    return CircleArcSet(a);
  }

  bool is_empty() const { return segs_.empty(); }
  bool is_full() const { return segs_.size() == 1 && segs_[0].lo <= tolerance && segs_[0].hi >= two_pi - tolerance; }

  const std::vector<Arc>& segments() const { return segs_; }

  std::vector<Arc> arcs() const {
    if (is_full() || segs_.size() < 2) return is_full() ? std::vector<Arc>{{0.0, two_pi}} : segs_;
    std::vector<Arc> out = segs_;
    if (out.front().lo <= tolerance && out.back().hi >= two_pi - tolerance) {
      out.back().hi = two_pi + out.front().hi;
      out.erase(out.begin());
    }
    return out;
  }

  double measure() const {
    double m = 0.0;
    for (const Arc& a : segs_) m += a.length();
    return m;
  }

  bool contains(double theta) const {
    const double t = wrap_angle(theta);
    for (const Arc& a : segs_)
      if (t >= a.lo - tolerance && t <= a.hi + tolerance) return true;
    return false;
  }

  /// Closure of the complement.
  CircleArcSet complement() const {
    if (segs_.empty()) return full();
    std::vector<Arc> out;
    double cursor = 0.0;
    for (const Arc& a : segs_) {
      if (a.lo > cursor + tolerance) out.push_back({cursor, a.lo});
      cursor = std::max(cursor, a.hi);
    }
    if (cursor < two_pi - tolerance) out.push_back({cursor, two_pi});
    CircleArcSet c;
    c.segs_ = normalize(std::move(out));
    return c;
  }

  CircleArcSet unite(const CircleArcSet& o) const {
    std::vector<Arc> all = segs_;
    all.insert(all.end(), o.segs_.begin(), o.segs_.end());
    CircleArcSet c;
    c.segs_ = normalize(std::move(all));
    return c;
  }

  CircleArcSet intersect(const CircleArcSet& o) const {
    std::vector<Arc> out;
    std::size_t i = 0, j = 0;
    while (i < segs_.size() && j < o.segs_.size()) {
      const double lo = std::max(segs_[i].lo, o.segs_[j].lo);
      const double hi = std::min(segs_[i].hi, o.segs_[j].hi);
      if (hi >= lo - tolerance) out.push_back({lo, std::max(lo, hi)});
      if (segs_[i].hi < o.segs_[j].hi) ++i; else ++j;
    }
    CircleArcSet c;
    c.segs_ = normalize(std::move(out));
    return c;
  }

  /// Closure of S ∖ T.
  CircleArcSet subtract(const CircleArcSet& o) const { return intersect(o.complement()); }

  friend bool operator==(const CircleArcSet&, const CircleArcSet&) = default;

private:
  static bool seg_less(const Arc& a, const Arc& b) { return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi); }

  static std::vector<Arc> normalize(std::vector<Arc> raw) {
    std::sort(raw.begin(), raw.end(), seg_less);
    std::vector<Arc> out;
    for (Arc a : raw) {
      a.lo = std::clamp(a.lo, 0.0, two_pi);
      a.hi = std::clamp(a.hi, a.lo, two_pi);
      if (!out.empty() && a.lo <= out.back().hi + tolerance) {
        out.back().hi = std::max(out.back().hi, a.hi);
      } else {
        out.push_back(a);
      }
    }
    if (out.size() == 1 && out[0].lo <= tolerance && out[0].hi >= two_pi - tolerance) out[0] = {0.0, two_pi};
    return out;
  }

  std::vector<Arc> segs_;
};

inline double measure(const CircleArcSet& s) { return s.measure(); }

/// Leb(S ∖ T)
inline double diff_measure(const CircleArcSet& s, const CircleArcSet& t) { return s.subtract(t).measure(); }

namespace detail {

/// Angular distance from θ to the nearest point of a nonempty set.
inline double angular_distance(double theta, const CircleArcSet& t) {
  const auto& segs = t.segments();
  const double x = wrap_angle(theta);
  auto it = std::upper_bound(segs.begin(), segs.end(), x, [](double v, const Arc& a) { return v < a.lo; });
  // it: first segment starting after x; the one before may contain x
  double best = std::numeric_limits<double>::infinity();
  auto consider = [&](const Arc& a) {
    if (x >= a.lo && x <= a.hi) { best = 0.0; return; }
    for (double e : {a.lo, a.hi}) {
      double d = std::abs(x - e);
      best = std::min(best, std::min(d, two_pi - d));
    }
  };
  if (it != segs.end()) consider(*it);
  if (it != segs.begin()) consider(*std::prev(it));
  consider(segs.front());
  consider(segs.back());
  return best;
}

/// sup_{s∈S} dist(s, T), in angle.
inline double directed_hausdorff_angle(const CircleArcSet& s, const CircleArcSet& t) {
  double worst = 0.0;
  for (const Arc& a : s.segments()) {
    worst = std::max(worst, angular_distance(a.lo, t));
    worst = std::max(worst, angular_distance(a.hi, t));
  }
  // interior maxima sit at midpoints of the gaps of T
  const auto& ts = t.segments();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double lo = ts[i].hi;
    const double hi = (i + 1 < ts.size()) ? ts[i + 1].lo : ts.front().lo + two_pi;
    if (hi - lo <= 0.0) continue;
    const double mid = 0.5 * (lo + hi);
    if (s.contains(mid)) worst = std::max(worst, angular_distance(mid, t));
  }
  return worst;
}

}  // namespace detail

/// Hausdorff distance in the chordal metric |z − x|; +∞ if either set is empty.
inline double hausdorff(const CircleArcSet& s, const CircleArcSet& t) {
  if (s.is_empty() || t.is_empty()) return std::numeric_limits<double>::infinity();
  const double ang = std::max(detail::directed_hausdorff_angle(s, t), detail::directed_hausdorff_angle(t, s));
  return chord(ang);
}

/// B_ε(S): each arc dilated by the angular radius 2·arcsin(ε/2).
inline CircleArcSet eps_neighborhood(const CircleArcSet& s, double eps) {
  require(eps > 0.0, "eps_neighborhood: eps must be positive");
  if (eps >= 2.0) return CircleArcSet::full();
  const double delta = chord_to_angle(eps);
  std::vector<Arc> grown;
  for (const Arc& a : s.arcs()) grown.push_back({a.lo - delta, a.hi + delta});
  return CircleArcSet(grown);
}

/// E₂⁻¹(S) for the double cover z ↦ z².
inline CircleArcSet preimage_double(const CircleArcSet& s) {
  std::vector<Arc> out;
  for (const Arc& a : s.segments()) {
    out.push_back({a.lo / 2.0, a.hi / 2.0});
    out.push_back({a.lo / 2.0 + std::numbers::pi, a.hi / 2.0 + std::numbers::pi});
  }
  return CircleArcSet(out);
}

/// ∩_{m ≥ tail_start} ∪_{n ≥ m} sets[n], evaluated over the finite list.
inline CircleArcSet limsup_surrogate(const std::vector<CircleArcSet>& sets, std::size_t tail_start) {
  require(sets.size() >= tail_start + 1, "limsup_surrogate: list shorter than tail_start+1");
  CircleArcSet tail_union = CircleArcSet::empty();
  CircleArcSet result = CircleArcSet::full();
  for (std::size_t m = sets.size(); m-- > tail_start;) {
    tail_union = tail_union.unite(sets[m]);
    result = result.intersect(tail_union);
  }
  return result;
}

// ---------------------------------------------------------------------------

inline std::vector<double> eigen_angles(const MatrixXc& U) {
  Eigen::ComplexEigenSolver<MatrixXc> es(U, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed to converge");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(U.rows()));
  for (long i = 0; i < es.eigenvalues().size(); ++i) out.push_back(wrap_angle(std::arg(es.eigenvalues()[i])));
  return out;
}

struct SpectralVariationReport {
  double dH;
  double norm;
  bool holds;
};

/// d_H(σ(U), σ(V)) ≤ ‖U − V‖ for two unitary windows of the same shape.
inline SpectralVariationReport spectral_variation_check(const BandedUnitary& U, const BandedUnitary& V) {
  require(U.dim == V.dim && U.offset == V.offset, "spectral_variation_check: windows differ");
  require(U.boundary != Boundary::raw_cut && V.boundary != Boundary::raw_cut,
          "spectral_variation_check: raw_cut windows are not unitary");
  require(U.unitarity_residual() < 1e-10 && V.unitarity_residual() < 1e-10,
          "spectral_variation_check: inputs must be unitary");
  SpectralVariationReport r{};
  r.dH = hausdorff(CircleArcSet::points(eigen_angles(U.entries)), CircleArcSet::points(eigen_angles(V.entries)));
  r.norm = spectral_norm(U.entries - V.entries);
  r.holds = r.dH <= r.norm * (1.0 + 1e-10);
  return r;
}

}  // namespace cmv
