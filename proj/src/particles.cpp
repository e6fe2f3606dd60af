#include "tlsph/particles.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace tlsph
{
//=================================================================================================//
int lattice_count(Real length, Real dp)
{
    const Real ratio = length / dp;
    const Real nearest = std::round(ratio);
    if (std::abs(ratio - nearest) < 1.0e-6 * std::max<Real>(1.0, ratio))
        return static_cast<int>(nearest);
    return static_cast<int>(std::floor(ratio));
}
//=================================================================================================//
template <int Dim>
std::size_t ParticleSet<Dim>::count(ConstraintKind kind) const
{
    return static_cast<std::size_t>(std::count(constraint.begin(), constraint.end(), kind));
}
//=================================================================================================//
template <int Dim>
void ParticleSet<Dim>::push_back(const VecD &position, Real volume, Real density,
                                 ConstraintKind kind, int region_index)
{
    r0.push_back(position);
    r.push_back(position);
    vel.push_back(VecD::Zero());
    acc.push_back(VecD::Zero());
    F.push_back(MatD::Identity());
    dF.push_back(MatD::Zero());
    B0.push_back(MatD::Identity());
    rho0.push_back(density);
    rho.push_back(density);
    V0.push_back(volume);
    constraint.push_back(kind);
    region.push_back(region_index);
    material.push_back(0);
}
//=================================================================================================//
namespace
{
template <int Dim>
void validate(const LatticeSpec<Dim> &spec)
{
    if (!(spec.dp > 0.0))
        throw ContractViolation("lattice: dp must be positive");
    if (!(spec.rho0 > 0.0))
        throw ContractViolation("lattice: reference density must be positive");
    if (spec.shape == ShapeKind::box)
    {
        for (int a = 0; a < Dim; ++a)
            if (lattice_count(spec.lengths[a], spec.dp) < 1)
                throw GeometryError("lattice: box is empty at this resolution");
    }
    else
    {
        if (Dim != 3)
            throw ContractViolation("lattice: cylinders are three-dimensional");
        if (lattice_count(2.0 * spec.radius, spec.dp) < 1 || lattice_count(spec.length, spec.dp) < 1)
            throw GeometryError("lattice: cylinder is empty at this resolution");
    }
    const auto &regions = spec.constrained_regions;
    for (std::size_t a = 0; a < regions.size(); ++a)
    {
        if (regions[a].axis < 0 || regions[a].axis >= Dim || regions[a].layers < 1)
            throw ContractViolation("lattice: constrained region '" + regions[a].name + "' is malformed");
        if (spec.shape == ShapeKind::cylinder && regions[a].axis != Dim - 1)
            throw ContractViolation("lattice: cylinder constraints must lie along the cylinder axis");
        if (regions[a].kind == ConstraintKind::prescribed && !regions[a].profile)
            throw ContractViolation("lattice: prescribed region '" + regions[a].name + "' has no profile");
        if (regions[a].kind == ConstraintKind::free)
            throw ContractViolation("lattice: constrained region '" + regions[a].name + "' is free");
        for (std::size_t b = a + 1; b < regions.size(); ++b)
            if (regions[a].axis == regions[b].axis && regions[a].upper == regions[b].upper)
                throw ContractViolation("lattice: constrained regions '" + regions[a].name + "' and '" +
                                        regions[b].name + "' overlap");
    }
}
} // namespace
//=================================================================================================//
template <int Dim>
ParticleSet<Dim> generate_lattice(const LatticeSpec<Dim> &spec)
{
    using VecD = Vec<Dim>;
    validate(spec);
    const Real dp = spec.dp;

    std::array<int, Dim> n{};
    VecD lower = spec.origin;
    if (spec.shape == ShapeKind::box)
    {
        for (int a = 0; a < Dim; ++a)
            n[a] = lattice_count(spec.lengths[a], dp);
    }
    else
    {
        const int nr = lattice_count(2.0 * spec.radius, dp);
        for (int a = 0; a < Dim - 1; ++a)
        {
            n[a] = nr;
            lower[a] = spec.origin[a] - 0.5 * nr * dp;
        }
        n[Dim - 1] = lattice_count(spec.length, dp);
    }

    // per axis and side, the region index extending that face
    std::array<std::array<int, 2>, Dim> face_region{};
    for (auto &f : face_region)
        f = {-1, -1};
    std::array<int, Dim> lo{}, hi{};
    for (int a = 0; a < Dim; ++a)
        hi[a] = n[a];
    for (std::size_t k = 0; k < spec.constrained_regions.size(); ++k)
    {
        const auto &reg = spec.constrained_regions[k];
        face_region[reg.axis][reg.upper ? 1 : 0] = static_cast<int>(k);
        if (reg.upper)
            hi[reg.axis] = n[reg.axis] + reg.layers;
        else
            lo[reg.axis] = -reg.layers;
    }

    ParticleSet<Dim> set;
    set.dp = dp;
    set.regions = spec.constrained_regions;
    const Real base_volume = std::pow(dp, Dim);

    std::array<int, Dim> idx = lo;
    while (true)
    {
        int outside_axes = 0;
        int region_index = -1;
        for (int a = 0; a < Dim; ++a)
        {
            if (idx[a] < 0 || idx[a] >= n[a])
            {
                ++outside_axes;
                region_index = face_region[a][idx[a] < 0 ? 0 : 1];
            }
        }
        VecD pos;
        for (int a = 0; a < Dim; ++a)
            pos[a] = lower[a] + (idx[a] + 0.5) * dp;

        bool keep = outside_axes == 0 || (outside_axes == 1 && region_index >= 0);
        if (keep && spec.shape == ShapeKind::cylinder)
        {
            Real radial2 = 0.0;
            for (int a = 0; a < Dim - 1; ++a)
                radial2 += (pos[a] - spec.origin[a]) * (pos[a] - spec.origin[a]);
            keep = radial2 <= spec.radius * spec.radius * (1.0 + 1.0e-12);
        }
        if (keep)
        {
            Real volume = base_volume;
            if (spec.position_map)
            {
                if (spec.volume_ratio)
                    volume *= spec.volume_ratio(pos);
                pos = spec.position_map(pos);
            }
            const ConstraintKind kind =
                outside_axes == 0 ? ConstraintKind::free : spec.constrained_regions[region_index].kind;
            set.push_back(pos, volume, spec.rho0, kind, outside_axes == 0 ? -1 : region_index);
        }

        // odometer, first axis fastest
        int a = 0;
        for (; a < Dim; ++a)
        {
            if (++idx[a] < hi[a])
                break;
            idx[a] = lo[a];
        }
        if (a == Dim)
            break;
    }
    if (set.count(ConstraintKind::free) == 0)
        throw GeometryError("lattice: no free particles generated");
    return set;
}
//=================================================================================================//
template <int Dim>
void apply_initial_velocity(ParticleSet<Dim> &set, const std::function<Vec<Dim>(const Vec<Dim> &)> &field)
{
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        switch (set.constraint[i])
        {
        case ConstraintKind::free:
            set.vel[i] = field(set.r0[i]);
            break;
        case ConstraintKind::clamped:
            set.vel[i].setZero();
            break;
        case ConstraintKind::prescribed:
            set.vel[i] = set.regions[set.region[i]].profile(0.0);
            break;
        }
    }
}
//=================================================================================================//
template struct ParticleSet<2>;
template struct ParticleSet<3>;
template ParticleSet<2> generate_lattice(const LatticeSpec<2> &);
template ParticleSet<3> generate_lattice(const LatticeSpec<3> &);
template void apply_initial_velocity(ParticleSet<2> &, const std::function<Vec<2>(const Vec<2> &)> &);
template void apply_initial_velocity(ParticleSet<3> &, const std::function<Vec<3>(const Vec<3> &)> &);
//=================================================================================================//
} // namespace tlsph
