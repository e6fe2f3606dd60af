#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <stdexcept>
#include <string>

namespace tlsph
{
using Real = double;

template <int Dim>
using Vec = Eigen::Matrix<Real, Dim, 1>;

template <int Dim>
using Mat = Eigen::Matrix<Real, Dim, Dim>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using Mat2 = Mat<2>;
using Mat3 = Mat<3>;

/// Raised when a caller breaks an operation's precondition (negative radius, bad spec).
class ContractViolation : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for degenerate particle geometry: empty lattices, coincident particles,
/// singular correction matrices.
class GeometryError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Raised when the simulation can no longer continue: inverted elements (det F <= 0),
/// non-finite state or velocity blow-up.
class NumericalFailure : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Raised for malformed or out-of-range run configuration.
class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

template <int Dim>
inline Mat<Dim> deviatoric(const Mat<Dim> &m)
{
    return m - (m.trace() / Real(Dim)) * Mat<Dim>::Identity();
}
} // namespace tlsph
