#pragma once

#include "tlsph/base.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tlsph
{
enum class ConstraintKind : std::uint8_t
{
    free,
    clamped,
    prescribed
};

template <int Dim>
using VelocityProfile = std::function<Vec<Dim>(Real time)>;

/**
 * Layers of constrained particles generated beyond one face of the shape.
 * The layers extrude the shape's cross-section along `axis`, below the lower
 * face or above the upper face.
 */
template <int Dim>
struct ConstrainedRegion
{
    std::string name;
    int axis = 0;
    bool upper = false;
    int layers = 4;
    ConstraintKind kind = ConstraintKind::clamped;
    VelocityProfile<Dim> profile; ///< prescribed regions only
};

enum class ShapeKind
{
    box,
    cylinder
};

template <int Dim>
struct LatticeSpec
{
    ShapeKind shape = ShapeKind::box;
    Vec<Dim> origin = Vec<Dim>::Zero();  ///< box: lower corner; cylinder: center of the base
    Vec<Dim> lengths = Vec<Dim>::Zero(); ///< box only
    Real radius = 0.0;                   ///< cylinder only, axis along the last coordinate
    Real length = 0.0;                   ///< cylinder only
    Real dp = 0.0;
    Real rho0 = 1.0;
    std::vector<ConstrainedRegion<Dim>> constrained_regions;
    /// Optional smooth map applied to lattice positions, with its local volume ratio.
    std::function<Vec<Dim>(const Vec<Dim> &)> position_map;
    std::function<Real(const Vec<Dim> &)> volume_ratio;
};

/** Structure-of-arrays particle storage. */
template <int Dim>
struct ParticleSet
{
    using VecD = Vec<Dim>;
    using MatD = Mat<Dim>;

    Real dp = 0.0;
    std::vector<VecD> r0, r, vel, acc;
    std::vector<MatD> F, dF, B0;
    std::vector<Real> rho0, rho, V0;
    std::vector<ConstraintKind> constraint;
    std::vector<int> region; ///< -1 for free particles
    std::vector<int> material;
    std::vector<ConstrainedRegion<Dim>> regions;

    std::size_t size() const { return r0.size(); }
    std::size_t count(ConstraintKind kind) const;
    void push_back(const VecD &position, Real volume, Real density, ConstraintKind kind, int region_index);
    Real mass(std::size_t i) const { return rho0[i] * V0[i]; }
};

template <int Dim>
ParticleSet<Dim> generate_lattice(const LatticeSpec<Dim> &spec);

/** Assigns vel = field(r0) on free particles; clamped particles stay at rest and
 *  prescribed particles take their profile at t = 0. */
template <int Dim>
void apply_initial_velocity(ParticleSet<Dim> &set, const std::function<Vec<Dim>(const Vec<Dim> &)> &field);

/** Number of lattice cells of size dp needed to fill `length`. */
int lattice_count(Real length, Real dp);
} // namespace tlsph
