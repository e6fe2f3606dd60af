#include "tlsph/kernel.hpp"

#include <cmath>
#include <numbers>

namespace tlsph
{
//=================================================================================================//
KernelModel::KernelModel(Real dp, int dimension)
    : dp_(dp), h_(1.15 * dp), cutoff_(2.3 * dp), dimension_(dimension), normalization_(0.0)
{
    if (!(dp > 0.0) || !std::isfinite(dp))
        throw ContractViolation("kernel: particle spacing must be positive and finite");
    if (dimension != 2 && dimension != 3)
        throw ContractViolation("kernel: dimension must be 2 or 3");
    const Real pi = std::numbers::pi;
    normalization_ = dimension == 2 ? 7.0 / (4.0 * pi * h_ * h_)
                                    : 21.0 / (16.0 * pi * h_ * h_ * h_);
}
//=================================================================================================//
Real KernelModel::value(Real r) const
{
    if (!(r >= 0.0))
        throw ContractViolation("kernel: negative distance");
    if (r >= cutoff_)
        return 0.0;
    const Real q = r / h_;
    const Real s = 1.0 - 0.5 * q;
    return normalization_ * s * s * s * s * (2.0 * q + 1.0);
}
//=================================================================================================//
Real KernelModel::radial_derivative(Real r) const
{
    if (!(r >= 0.0))
        throw ContractViolation("kernel: negative distance");
    if (r >= cutoff_)
        return 0.0;
    const Real q = r / h_;
    const Real s = 1.0 - 0.5 * q;
    return -5.0 * normalization_ * q * s * s * s / h_;
}
//=================================================================================================//
} // namespace tlsph
