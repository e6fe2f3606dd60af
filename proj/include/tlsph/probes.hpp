#pragma once

#include "tlsph/solver.hpp"

#include <string>
#include <vector>

namespace tlsph
{
enum class ProbeKind
{
    point_position,     ///< r[axis] of the particle nearest `target` in the reference configuration
    point_displacement, ///< (r - r0)[axis] of that particle
    reaction_force,     ///< sum of m a[axis] over the particles of constrained region `region`
    body_extent,        ///< max - min of r[axis] over free particles, plus dp
    radial_extent,      ///< max distance of free particles from the line through `target` along `axis`, plus dp/2
    layer_displacement, ///< mean (r - r0)[axis] over the free layer nearest `target` along `slab_axis`
    section_extent      ///< extent of r[axis] over the free slab nearest `target` along `slab_axis`, plus dp
};

template <int Dim>
struct ProbeSpec
{
    std::string name;
    ProbeKind kind = ProbeKind::point_position;
    int axis = 0;
    int slab_axis = 0;
    Vec<Dim> target = Vec<Dim>::Zero();
    int region = -1; ///< point probes: search this constrained region instead of the free particles
    Real scale = 1.0;
    Real offset = 0.0; ///< value = scale * sample + offset
};

/** A probe bound to the particles it reads. */
template <int Dim>
class Probe
{
  public:
    Probe(ProbeSpec<Dim> spec, const ParticleSet<Dim> &set);

    Real sample(const ParticleSet<Dim> &set) const;
    const ProbeSpec<Dim> &spec() const { return spec_; }
    const std::vector<std::size_t> &members() const { return members_; }

  private:
    ProbeSpec<Dim> spec_;
    std::vector<std::size_t> members_;
};

struct ProbeSeries
{
    std::vector<std::string> columns;
    std::vector<Real> time;
    std::vector<std::vector<Real>> rows;

    std::vector<Real> column(const std::string &name) const;
};

/**
 * Period of an oscillating signal from successive same-direction zero crossings
 * of the mean-removed samples, averaged over all cycles. A linear drift estimated
 * from the per-cycle means is removed first when at least two cycles are present.
 */
Real extract_period(const std::vector<Real> &time, const std::vector<Real> &value);
} // namespace tlsph
