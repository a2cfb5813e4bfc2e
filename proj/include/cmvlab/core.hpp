#pragma once

// Shared scalar types, error types and small numeric helpers.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cmv {

using cplx = std::complex<double>;
using Mat2C = Eigen::Matrix2cd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Bad input: violated precondition or malformed configuration.
class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not deliver the accuracy its contract promises.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Two Floquet eigenvalues closer than the separation threshold.
class DegeneracyError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

/// A resolvent entry changed too much when the truncation window doubled.
class TruncationError : public NumericalError {
public:
  using NumericalError::NumericalError;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

/// ρ = √(1−|α|²)
inline double rho_of(cplx alpha) { return std::sqrt(std::max(0.0, 1.0 - std::norm(alpha))); }

/// Mathematical modulo: result in [0, m).
inline long floor_mod(long n, long m) {
  long r = n % m;
  return r < 0 ? r + m : r;
}

/// Angle reduced to [0, 2π).
inline double wrap_angle(double theta) {
  double t = std::fmod(theta, two_pi);
  if (t < 0) t += two_pi;
  if (t >= two_pi) t = 0.0;
  return t;
}

/// Chordal distance |e^{iφ} − 1| for an angular separation φ.
inline double chord(double angle) { return 2.0 * std::sin(std::min(std::abs(angle), std::numbers::pi) / 2.0); }

/// Angular radius of a chordal ball of radius ε on the unit circle.
inline double chord_to_angle(double eps) { return eps >= 2.0 ? std::numbers::pi : 2.0 * std::asin(eps / 2.0); }

inline cplx unit(double theta) { return std::polar(1.0, theta); }

}  // namespace cmv
