#include "tlsph/neighbors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace tlsph
{
//=================================================================================================//
template <int Dim>
Neighborhoods<Dim> build_neighborhoods(const ParticleSet<Dim> &set, const KernelModel &kernel)
{
    using VecD = Vec<Dim>;
    if (kernel.dimension() != Dim)
        throw ContractViolation("neighbors: kernel dimension does not match particle set");
    const std::size_t n = set.size();
    const Real cutoff = kernel.cutoff();

    VecD lower = VecD::Constant(std::numeric_limits<Real>::max());
    VecD upper = VecD::Constant(std::numeric_limits<Real>::lowest());
    for (const auto &p : set.r0)
    {
        lower = lower.cwiseMin(p);
        upper = upper.cwiseMax(p);
    }
    std::array<long, Dim> cells{};
    for (int a = 0; a < Dim; ++a)
        cells[a] = n == 0 ? 1 : static_cast<long>(std::floor((upper[a] - lower[a]) / cutoff)) + 1;

    auto cell_coords = [&](const VecD &p) {
        std::array<long, Dim> c{};
        for (int a = 0; a < Dim; ++a)
            c[a] = std::clamp<long>(static_cast<long>(std::floor((p[a] - lower[a]) / cutoff)), 0, cells[a] - 1);
        return c;
    };
    auto linear = [&](const std::array<long, Dim> &c) {
        long k = 0;
        for (int a = Dim - 1; a >= 0; --a)
            k = k * cells[a] + c[a];
        return static_cast<std::size_t>(k);
    };

    std::size_t total_cells = 1;
    for (int a = 0; a < Dim; ++a)
        total_cells *= static_cast<std::size_t>(cells[a]);

    // counting sort of particle indices by cell
    std::vector<std::size_t> cell_start(total_cells + 1, 0);
    std::vector<std::size_t> cell_of(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        cell_of[i] = linear(cell_coords(set.r0[i]));
        ++cell_start[cell_of[i] + 1];
    }
    for (std::size_t c = 0; c < total_cells; ++c)
        cell_start[c + 1] += cell_start[c];
    std::vector<std::size_t> sorted(n);
    {
        std::vector<std::size_t> fill(cell_start.begin(), cell_start.end() - 1);
        for (std::size_t i = 0; i < n; ++i)
            sorted[fill[cell_of[i]]++] = i;
    }

    std::vector<std::vector<NeighborBond<Dim>>> lists(n);
    std::vector<std::size_t> duplicate_of(n, n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
    {
        const VecD &pi = set.r0[i];
        const auto ci = cell_coords(pi);
        auto &list = lists[i];
        std::array<long, Dim> offset{};
        offset.fill(-1);
        while (true)
        {
            std::array<long, Dim> cj{};
            bool valid = true;
            for (int a = 0; a < Dim; ++a)
            {
                cj[a] = ci[a] + offset[a];
                valid = valid && cj[a] >= 0 && cj[a] < cells[a];
            }
            if (valid)
            {
                const std::size_t c = linear(cj);
                for (std::size_t s = cell_start[c]; s < cell_start[c + 1]; ++s)
                {
                    const std::size_t j = sorted[s];
                    if (j == i)
                        continue;
                    const VecD diff = pi - set.r0[j];
                    const Real dist = diff.norm();
                    if (dist == 0.0)
                        duplicate_of[i] = std::min(duplicate_of[i], j);
                    else if (dist < cutoff)
                    {
                        NeighborBond<Dim> bond;
                        bond.j = static_cast<std::uint32_t>(j);
                        bond.r0 = dist;
                        bond.e0 = diff / dist;
                        bond.W0 = kernel.value(dist);
                        bond.dWdr0 = kernel.radial_derivative(dist);
                        bond.V0_j = set.V0[j];
                        list.push_back(bond);
                    }
                }
            }
            int a = 0;
            for (; a < Dim; ++a)
            {
                if (++offset[a] <= 1)
                    break;
                offset[a] = -1;
            }
            if (a == Dim)
                break;
        }
        std::sort(list.begin(), list.end(), [](const auto &x, const auto &y) { return x.j < y.j; });
    }

    for (std::size_t i = 0; i < n; ++i)
        if (duplicate_of[i] != n)
            throw GeometryError("neighbors: particles " + std::to_string(i) + " and " +
                                std::to_string(duplicate_of[i]) + " share a position");

    std::vector<std::size_t> offsets(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i)
        offsets[i + 1] = offsets[i] + lists[i].size();
    std::vector<NeighborBond<Dim>> bonds;
    bonds.reserve(offsets[n]);
    for (auto &list : lists)
        bonds.insert(bonds.end(), list.begin(), list.end());
    return Neighborhoods<Dim>(std::move(offsets), std::move(bonds));
}
//=================================================================================================//
template <int Dim>
Mat<Dim> correction_sum(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds, std::size_t i)
{
    Mat<Dim> sum = Mat<Dim>::Zero();
    for (const auto &b : bonds.of(i))
        sum += b.V0_j * (set.r0[b.j] - set.r0[i]) * (b.dWdr0 * b.e0).transpose();
    return sum;
}
//=================================================================================================//
template <int Dim>
void compute_correction_matrices(ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds)
{
    if (bonds.particle_count() != set.size())
        throw ContractViolation("neighbors: bond lists do not match the particle set");
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        const Mat<Dim> sum = correction_sum(set, bonds, i);
        const Real det = sum.determinant();
        if (!std::isfinite(det) || std::abs(det) < kCorrectionSingularity)
            throw GeometryError("neighbors: correction matrix of particle " + std::to_string(i) +
                                " is singular (det = " + std::to_string(det) + ")");
        set.B0[i] = sum.inverse();
    }
}
//=================================================================================================//
template Neighborhoods<2> build_neighborhoods(const ParticleSet<2> &, const KernelModel &);
template Neighborhoods<3> build_neighborhoods(const ParticleSet<3> &, const KernelModel &);
template Mat<2> correction_sum(const ParticleSet<2> &, const Neighborhoods<2> &, std::size_t);
template Mat<3> correction_sum(const ParticleSet<3> &, const Neighborhoods<3> &, std::size_t);
template void compute_correction_matrices(ParticleSet<2> &, const Neighborhoods<2> &);
template void compute_correction_matrices(ParticleSet<3> &, const Neighborhoods<3> &);
//=================================================================================================//
} // namespace tlsph
