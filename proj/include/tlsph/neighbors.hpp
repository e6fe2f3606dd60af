#pragma once

#include "tlsph/kernel.hpp"
#include "tlsph/particles.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace tlsph
{
/// Reference-configuration pair data of particle i with neighbor j.
/// e0 points from j toward i, so grad_i W_ij = dWdr0 * e0.
template <int Dim>
struct NeighborBond
{
    std::uint32_t j = 0;
    Real r0 = 0.0;
    Vec<Dim> e0 = Vec<Dim>::Zero();
    Real W0 = 0.0;
    Real dWdr0 = 0.0;
    Real V0_j = 0.0;
};

/** Compressed per-particle bond lists, built once at t = 0 and immutable afterwards. */
template <int Dim>
class Neighborhoods
{
  public:
    Neighborhoods() = default;
    Neighborhoods(std::vector<std::size_t> offsets, std::vector<NeighborBond<Dim>> bonds)
        : offsets_(std::move(offsets)), bonds_(std::move(bonds)) {}

    std::span<const NeighborBond<Dim>> of(std::size_t i) const
    {
        return {bonds_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::size_t particle_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t bond_count() const { return bonds_.size(); }

  private:
    std::vector<std::size_t> offsets_;
    std::vector<NeighborBond<Dim>> bonds_;
};

/** Cell-list search for all pairs with 0 < |r0_j - r0_i| < cutoff; lists sorted by j. */
template <int Dim>
Neighborhoods<Dim> build_neighborhoods(const ParticleSet<Dim> &set, const KernelModel &kernel);

/** The summed tensor sum_j V0_j (r0_j - r0_i) (x) grad_i W_ij whose inverse is B0_i. */
template <int Dim>
Mat<Dim> correction_sum(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds, std::size_t i);

/** Fills set.B0; throws GeometryError naming the particle when the sum is singular. */
template <int Dim>
void compute_correction_matrices(ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds);

/// |det| below which a correction sum counts as singular.
inline constexpr Real kCorrectionSingularity = 1.0e-10;
} // namespace tlsph
