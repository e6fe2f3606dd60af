#pragma once

#include "tlsph/base.hpp"

namespace tlsph
{
/**
 * Wendland C2 kernel W(q) = alpha_d (1 - q/2)^4 (2q + 1), q = r/h in [0, 2],
 * with smoothing length h = 1.15 dp and compact support 2h = 2.3 dp.
 * Only evaluated at reference-configuration distances.
 */
class KernelModel
{
  public:
    KernelModel(Real dp, int dimension);

    Real dp() const { return dp_; }
    Real h() const { return h_; }
    Real cutoff() const { return cutoff_; }
    int dimension() const { return dimension_; }
    Real normalization() const { return normalization_; }

    /** Kernel value W(r, h). Zero at and beyond the cutoff. */
    Real value(Real r) const;
    /** dW/dr, non-positive everywhere, zero at r = 0 and beyond the cutoff. */
    Real radial_derivative(Real r) const;
    Real value_at_zero() const { return normalization_; }

  private:
    Real dp_;
    Real h_;
    Real cutoff_;
    int dimension_;
    Real normalization_;
};
} // namespace tlsph
