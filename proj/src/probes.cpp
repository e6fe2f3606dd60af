#include "tlsph/probes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tlsph
{
namespace
{
template <int Dim>
std::vector<std::size_t> nearest_in(const ParticleSet<Dim> &set, int region, const Vec<Dim> &target, int axis,
                                    bool slab)
{
    Real best = std::numeric_limits<Real>::infinity();
    auto distance = [&](std::size_t i) {
        return slab ? std::abs(set.r0[i][axis] - target[axis]) : (set.r0[i] - target).norm();
    };
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set.region[i] == region)
            best = std::min(best, distance(i));
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        if (set.region[i] != region)
            continue;
        if (distance(i) <= best + 1.0e-6 * set.dp)
        {
            members.push_back(i);
            if (!slab)
                break;
        }
    }
    return members;
}

struct Crossings
{
    std::vector<Real> up, down;
};

Crossings zero_crossings(const std::vector<Real> &time, const std::vector<Real> &value)
{
    Crossings out;
    for (std::size_t k = 1; k < value.size(); ++k)
    {
        const Real a = value[k - 1], b = value[k];
        if ((a < 0.0) == (b < 0.0))
            continue;
        const Real t = time[k - 1] + (time[k] - time[k - 1]) * a / (a - b);
        (a < 0.0 ? out.up : out.down).push_back(t);
    }
    return out;
}

Real mean_period(const Crossings &c)
{
    Real total = 0.0;
    int cycles = 0;
    for (const auto *list : {&c.up, &c.down})
        for (std::size_t k = 1; k < list->size(); ++k)
        {
            total += (*list)[k] - (*list)[k - 1];
            ++cycles;
        }
    if (cycles == 0)
        throw ContractViolation("extract_period: no complete oscillation cycle in the series");
    return total / cycles;
}

Real time_average(const std::vector<Real> &time, const std::vector<Real> &value, Real t0, Real t1)
{
    Real integral = 0.0, span = 0.0;
    for (std::size_t k = 1; k < time.size(); ++k)
    {
        const Real a = std::max(time[k - 1], t0), b = std::min(time[k], t1);
        if (b <= a)
            continue;
        const Real dt = time[k] - time[k - 1];
        auto at = [&](Real t) { return value[k - 1] + (value[k] - value[k - 1]) * (t - time[k - 1]) / dt; };
        integral += 0.5 * (at(a) + at(b)) * (b - a);
        span += b - a;
    }
    return integral / span;
}
} // namespace
//=================================================================================================//
template <int Dim>
Probe<Dim>::Probe(ProbeSpec<Dim> spec, const ParticleSet<Dim> &set) : spec_(std::move(spec))
{
    if (spec_.axis < 0 || spec_.axis >= Dim || spec_.slab_axis < 0 || spec_.slab_axis >= Dim)
        throw ContractViolation("probe '" + spec_.name + "': axis out of range");
    if (spec_.region < -1 || spec_.region >= static_cast<int>(set.regions.size()) ||
        (spec_.kind == ProbeKind::reaction_force && spec_.region < 0))
        throw ContractViolation("probe '" + spec_.name + "': unknown constrained region");
    switch (spec_.kind)
    {
    case ProbeKind::point_position:
    case ProbeKind::point_displacement:
        members_ = nearest_in(set, spec_.region, spec_.target, spec_.axis, false);
        break;
    case ProbeKind::reaction_force:
        for (std::size_t i = 0; i < set.size(); ++i)
            if (set.region[i] == spec_.region)
                members_.push_back(i);
        break;
    case ProbeKind::body_extent:
    case ProbeKind::radial_extent:
        for (std::size_t i = 0; i < set.size(); ++i)
            if (set.constraint[i] == ConstraintKind::free)
                members_.push_back(i);
        break;
    case ProbeKind::layer_displacement:
    case ProbeKind::section_extent:
        members_ = nearest_in(set, -1, spec_.target, spec_.slab_axis, true);
        break;
    }
    if (members_.empty())
        throw ContractViolation("probe '" + spec_.name + "' selects no particles");
}
//=================================================================================================//
template <int Dim>
Real Probe<Dim>::sample(const ParticleSet<Dim> &set) const
{
    const int axis = spec_.axis;
    Real value = 0.0;
    switch (spec_.kind)
    {
    case ProbeKind::point_position:
        value = set.r[members_.front()][axis];
        break;
    case ProbeKind::point_displacement:
        value = set.r[members_.front()][axis] - set.r0[members_.front()][axis];
        break;
    case ProbeKind::reaction_force:
        for (std::size_t i : members_)
            value += set.mass(i) * set.acc[i][axis];
        break;
    case ProbeKind::body_extent:
    case ProbeKind::section_extent:
    {
        Real lo = std::numeric_limits<Real>::infinity(), hi = -lo;
        for (std::size_t i : members_)
        {
            lo = std::min(lo, set.r[i][axis]);
            hi = std::max(hi, set.r[i][axis]);
        }
        value = hi - lo + set.dp;
        break;
    }
    case ProbeKind::radial_extent:
    {
        Real radius = 0.0;
        for (std::size_t i : members_)
        {
            Vec<Dim> d = set.r[i] - spec_.target;
            d[axis] = 0.0;
            radius = std::max(radius, d.norm());
        }
        value = radius + 0.5 * set.dp;
        break;
    }
    case ProbeKind::layer_displacement:
        for (std::size_t i : members_)
            value += set.r[i][axis] - set.r0[i][axis];
        value /= static_cast<Real>(members_.size());
        break;
    }
    return spec_.scale * value + spec_.offset;
}
//=================================================================================================//
std::vector<Real> ProbeSeries::column(const std::string &name) const
{
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end())
        throw ContractViolation("probe series has no column '" + name + "'");
    const std::size_t c = static_cast<std::size_t>(it - columns.begin());
    std::vector<Real> out;
    out.reserve(rows.size());
    for (const auto &row : rows)
        out.push_back(row[c]);
    return out;
}
//=================================================================================================//
Real extract_period(const std::vector<Real> &time, const std::vector<Real> &value)
{
    if (time.size() != value.size() || time.size() < 3)
        throw ContractViolation("extract_period: need at least three samples");
    for (std::size_t k = 1; k < time.size(); ++k)
        if (!(time[k] > time[k - 1]))
            throw ContractViolation("extract_period: times must increase strictly");

    const Real mean = time_average(time, value, time.front(), time.back());
    std::vector<Real> centered(value.size());
    std::transform(value.begin(), value.end(), centered.begin(), [&](Real v) { return v - mean; });
    Crossings crossings = zero_crossings(time, centered);
    if (crossings.up.size() + crossings.down.size() < 2)
        throw ContractViolation("extract_period: fewer than two zero crossings");

    const std::vector<Real> &marks = crossings.up.size() >= crossings.down.size() ? crossings.up : crossings.down;
    if (marks.size() >= 3)
    {
        // linear drift from the per-cycle means
        std::vector<Real> mid, level;
        for (std::size_t k = 1; k < marks.size(); ++k)
        {
            mid.push_back(0.5 * (marks[k - 1] + marks[k]));
            level.push_back(time_average(time, value, marks[k - 1], marks[k]));
        }
        const Real t_bar = std::accumulate(mid.begin(), mid.end(), 0.0) / mid.size();
        const Real v_bar = std::accumulate(level.begin(), level.end(), 0.0) / level.size();
        Real num = 0.0, den = 0.0;
        for (std::size_t k = 0; k < mid.size(); ++k)
        {
            num += (mid[k] - t_bar) * (level[k] - v_bar);
            den += (mid[k] - t_bar) * (mid[k] - t_bar);
        }
        const Real slope = den > 0.0 ? num / den : 0.0;
        for (std::size_t k = 0; k < value.size(); ++k)
            centered[k] = value[k] - v_bar - slope * (time[k] - t_bar);
        crossings = zero_crossings(time, centered);
    }
    return mean_period(crossings);
}
//=================================================================================================//
template class Probe<2>;
template class Probe<3>;
//=================================================================================================//
} // namespace tlsph
