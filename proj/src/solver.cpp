#include "tlsph/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace tlsph
{
//=================================================================================================//
void HourglassParams::validate() const
{
    if (!(alpha >= 0.0) || !(limiter_low >= 0.0) || !(limiter_span > 0.0))
        throw ContractViolation("hourglass: alpha and limiter bounds must be non-negative");
}
//=================================================================================================//
void StepControls::validate() const
{
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw ContractViolation("controls: CFL number must lie in (0, 1]");
    if (!(damping_scale >= 0.0) || !(end_time >= 0.0) || !(output_interval >= 0.0))
        throw ContractViolation("controls: damping scale, end time and output interval must be non-negative");
}
//=================================================================================================//
namespace
{
template <int Dim>
Vec<Dim> discrepancy_from_inverses(const Mat<Dim> &Finv_i, const Mat<Dim> &Finv_j, const Vec<Dim> &r_ij,
                                   Real r0_ij, const Vec<Dim> &e0_ij)
{
    return 0.5 * (Finv_i + Finv_j) * (r_ij / r0_ij) - e0_ij;
}

/** e0 + phi e_hat for one bond; also reports |e_hat|. */
template <int Dim>
Vec<Dim> corrected_direction(const NeighborBond<Dim> &b, const Mat<Dim> &Finv_i, const Mat<Dim> &Finv_j,
                             const Vec<Dim> &r_ij, const HourglassParams &hg, Real W_at_zero, Real &e_hat_norm)
{
    const Vec<Dim> e_hat = discrepancy_from_inverses<Dim>(Finv_i, Finv_j, r_ij, b.r0, b.e0);
    e_hat_norm = e_hat.norm();
    Real phi = 0.0;
    if (hg.phi_override)
        phi = *hg.phi_override;
    else if (hg.enabled)
        phi = hourglass_coefficient(b.W0, W_at_zero, e_hat_norm, hg, Dim);
    return b.e0 + phi * e_hat;
}

template <int Dim>
Mat<Dim> checked_inverse(const Mat<Dim> &F, std::size_t i)
{
    const Real J = F.determinant();
    if (!(J > 0.0) || !std::isfinite(J))
        throw NumericalFailure("solver: inverted deformation gradient at particle " + std::to_string(i));
    return F.inverse();
}

std::string describe(const char *what, std::size_t i, Real time)
{
    std::ostringstream os;
    os << "solver: " << what << " at particle " << i << ", t = " << time;
    return os.str();
}
} // namespace
//=================================================================================================//
template <int Dim>
Vec<Dim> discrepancy(const Mat<Dim> &F_i, const Mat<Dim> &F_j, const Vec<Dim> &r_ij, Real r0_ij, const Vec<Dim> &e0_ij)
{
    if (std::abs(F_i.determinant()) == 0.0 || std::abs(F_j.determinant()) == 0.0)
        throw NumericalFailure("solver: singular deformation gradient in discrepancy");
    return discrepancy_from_inverses<Dim>(F_i.inverse(), F_j.inverse(), r_ij, r0_ij, e0_ij);
}
//=================================================================================================//
Real hourglass_coefficient(Real W0_ij, Real W_at_zero, Real e_hat_norm, const HourglassParams &params, int dimension)
{
    if (!(W_at_zero > 0.0))
        throw ContractViolation("hourglass: kernel value at zero must be positive");
    const Real beta = W0_ij / W_at_zero;
    const Real gamma = std::min(std::max(e_hat_norm - params.limiter_low, 0.0), params.limiter_span);
    return params.alpha * dimension * beta * gamma;
}
//=================================================================================================//
template <int Dim>
std::vector<Vec<Dim>> shear_acceleration(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds,
                                         const std::vector<StressDecomposition<Dim>> &stress,
                                         const HourglassParams &hg, Real W_at_zero)
{
    const std::size_t n = set.size();
    std::vector<Mat<Dim>> F_inv(n), A(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        F_inv[i] = checked_inverse<Dim>(set.F[i], i);
        A[i] = stress[i].c * stress[i].b_e * F_inv[i].transpose() * set.B0[i];
    }
    std::vector<Vec<Dim>> acc(n, Vec<Dim>::Zero());
    for (std::size_t i = 0; i < n; ++i)
    {
        Vec<Dim> sum = Vec<Dim>::Zero();
        for (const auto &b : bonds.of(i))
        {
            Real e_hat_norm = 0.0;
            const Vec<Dim> dir =
                corrected_direction<Dim>(b, F_inv[i], F_inv[b.j], set.r[i] - set.r[b.j], hg, W_at_zero, e_hat_norm);
            sum += (A[i] + A[b.j]) * (b.dWdr0 * b.V0_j * dir);
        }
        acc[i] = sum / set.rho0[i];
    }
    return acc;
}
//=================================================================================================//
template <int Dim>
std::vector<Vec<Dim>> remaining_acceleration(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds,
                                             const std::vector<StressDecomposition<Dim>> &stress)
{
    const std::size_t n = set.size();
    std::vector<Mat<Dim>> M(n);
    for (std::size_t i = 0; i < n; ++i)
        M[i] = stress[i].tau_r * checked_inverse<Dim>(set.F[i], i).transpose() * set.B0[i].transpose();
    std::vector<Vec<Dim>> acc(n, Vec<Dim>::Zero());
    for (std::size_t i = 0; i < n; ++i)
    {
        Vec<Dim> sum = Vec<Dim>::Zero();
        for (const auto &b : bonds.of(i))
            sum += (M[i] + M[b.j]) * (b.dWdr0 * b.V0_j * b.e0);
        acc[i] = sum / set.rho0[i];
    }
    return acc;
}
//=================================================================================================//
template <int Dim>
std::vector<Mat<Dim>> deformation_rate(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds)
{
    const std::size_t n = set.size();
    std::vector<Mat<Dim>> rate(n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
    {
        Mat<Dim> sum = Mat<Dim>::Zero();
        for (const auto &b : bonds.of(i))
            sum += (b.V0_j * b.dWdr0) * (set.vel[b.j] - set.vel[i]) * b.e0.transpose();
        rate[i] = sum * set.B0[i];
    }
    return rate;
}
//=================================================================================================//
template <int Dim>
std::vector<Real> particle_sound_speeds(const ParticleSet<Dim> &set, const std::vector<MaterialModel> &materials)
{
    std::vector<Real> speeds(set.size());
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        const int m = set.material[i];
        if (m < 0 || static_cast<std::size_t>(m) >= materials.size())
            throw ContractViolation("solver: particle " + std::to_string(i) + " refers to a missing material");
        speeds[i] = sound_speed(materials[m]);
    }
    return speeds;
}
//=================================================================================================//
template <int Dim>
Real compute_timestep(const ParticleSet<Dim> &set, const std::vector<Real> &sound_speed, Real h, Real cfl)
{
    Real velocity_bound = std::numeric_limits<Real>::infinity();
    Real acceleration_max = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i)
    {
        const Real v = set.vel[i].norm();
        const Real a = set.acc[i].norm();
        if (!std::isfinite(v) || !std::isfinite(a))
            throw NumericalFailure("solver: non-finite velocity or acceleration at particle " + std::to_string(i));
        velocity_bound = std::min(velocity_bound, h / (sound_speed[i] + v));
        if (set.constraint[i] == ConstraintKind::free)
            acceleration_max = std::max(acceleration_max, a);
    }
    Real dt = velocity_bound;
    if (acceleration_max > 0.0)
        dt = std::min(dt, std::sqrt(h / acceleration_max));
    return cfl * dt;
}
//=================================================================================================//
template <int Dim>
Simulation<Dim>::Simulation(ParticleSet<Dim> particles, std::vector<MaterialModel> materials,
                            HourglassParams hourglass, StepControls controls)
    : set_(std::move(particles)), materials_(std::move(materials)), hourglass_(hourglass), controls_(controls),
      kernel_(set_.dp, Dim)
{
    hourglass_.validate();
    controls_.validate();
    if (materials_.empty())
        throw ContractViolation("solver: at least one material is required");
    for (const auto &model : materials_)
    {
        std::visit(
            [](const auto &m) {
                using M = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<M, HolzapfelOgdenModel>)
                {
                    if (Dim != 3)
                        throw ContractViolation("solver: the Holzapfel-Ogden model is three-dimensional");
                }
                m.params.validate();
            },
            model);
    }
    sound_speed_ = particle_sound_speeds(set_, materials_);
    bonds_ = build_neighborhoods(set_, kernel_);
    compute_correction_matrices(set_, bonds_);

    const std::size_t n = set_.size();
    plastic_.assign(n, PlasticState<Dim>{});
    stress_.assign(n, StressDecomposition<Dim>{});
    shear_coeff_.assign(n, MatD::Zero());
    remaining_coeff_.assign(n, MatD::Zero());
    F_inv_.assign(n, MatD::Identity());
    discrepancy_peak_.assign(n, 0.0);
    potential_.assign(n, 0.0);

    Real c_max = 0.0, v_max = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        c_max = std::max(c_max, sound_speed_[i]);
        v_max = std::max(v_max, set_.vel[i].norm());
        set_.rho[i] = set_.rho0[i] / set_.F[i].determinant();
    }
    velocity_limit_ = 100.0 * (c_max + v_max);
    set_.dF = deformation_rate(set_, bonds_);
}
//=================================================================================================//
template <int Dim>
void Simulation<Dim>::set_wall(const WallContact<Dim> &wall)
{
    if (wall.axis < 0 || wall.axis >= Dim)
        throw ContractViolation("solver: wall axis out of range");
    wall_ = wall;
    apply_wall();
}
//=================================================================================================//
template <int Dim>
void Simulation<Dim>::set_activation(std::vector<Real> potential, Real ramp_time)
{
    if (potential.size() != set_.size())
        throw ContractViolation("solver: activation field size does not match the particle count");
    if (!(ramp_time >= 0.0))
        throw ContractViolation("solver: activation ramp time must be non-negative");
    potential_ = std::move(potential);
    ramp_time_ = ramp_time;
}
//=================================================================================================//
template <int Dim>
Real Simulation<Dim>::activation(std::size_t i) const
{
    const Real ramp = ramp_time_ > 0.0 ? std::min(time_ / ramp_time_, 1.0) : 1.0;
    return potential_[i] * ramp;
}
//=================================================================================================//
template <int Dim>
void Simulation<Dim>::apply_wall()
{
    if (!wall_)
        return;
    const int axis = wall_->axis;
    const Real plane = wall_->position;
    for (std::size_t i = 0; i < set_.size(); ++i)
    {
        if (set_.constraint[i] != ConstraintKind::free)
            continue;
        if (set_.r[i][axis] <= plane)
        {
            set_.r[i][axis] = plane;
            set_.vel[i][axis] = std::max(set_.vel[i][axis], 0.0);
        }
    }
}
//=================================================================================================//
template <int Dim>
void Simulation<Dim>::update_half(Real dt)
{
    const std::size_t n = set_.size();
    std::vector<char> inverted(n, 0);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
    {
        set_.F[i] += 0.5 * dt * set_.dF[i];
        const Real J = set_.F[i].determinant();
        if (!(J > 0.0) || !std::isfinite(J))
            inverted[i] = 1;
        else
            set_.rho[i] = set_.rho0[i] / J;
        if (set_.constraint[i] != ConstraintKind::clamped)
            set_.r[i] += 0.5 * dt * set_.vel[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        if (inverted[i])
            throw NumericalFailure(describe("inverted element (det F <= 0)", i, time_));
    apply_wall();
}
//=================================================================================================//
template <int Dim>
void Simulation<Dim>::evaluate_stress(Real dt)
{
    const std::size_t n = set_.size();
    const Real h = kernel_.h();
    const Real scale = controls_.damping_scale;
    const Real midpoint_time = time_ + 0.5 * dt;
    const Real ramp = ramp_time_ > 0.0 ? std::min(midpoint_time / ramp_time_, 1.0) : 1.0;
    std::vector<char> failed(n, 0);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
    {
        try
        {
            const MatD &F = set_.F[i];
            const MatD &Fdot = set_.dF[i];
            const MaterialModel &model = materials_[set_.material[i]];
            StressDecomposition<Dim> s;
            if (const auto *nh = std::get_if<NeoHookeanModel>(&model))
            {
                const DampingParams d{nh->params.rho0, nh->params.K, h};
                s = neo_hookean_stress<Dim>(F, nh->params, damping_stress<Dim>(F, Fdot, d, scale));
            }
            else if (const auto *pl = std::get_if<PlasticModel>(&model))
            {
                const auto &p = pl->params;
                const ReturnMapResult<Dim> result =
                    std::holds_alternative<HerschelBulkley>(p.hardening)
                        ? herschel_bulkley_return_map<Dim>(F, plastic_[i], p, dt)
                        : plastic_return_map<Dim>(F, plastic_[i], p);
                plastic_[i] = result.state;
                s = result.stress;
                const DampingParams d{p.base.rho0, p.base.K, h};
                s.tau_r += damping_stress<Dim>(F, Fdot, d, scale);
            }
            else if constexpr (Dim == 3)
            {
                const auto &p = std::get<HolzapfelOgdenModel>(model).params;
                const DampingParams d{p.rho0, p.bulk_modulus(), h};
                s = holzapfel_ogden_stress(F, p, damping_stress<3>(F, Fdot, d, scale));
                if (potential_[i] != 0.0)
                    s.tau_r += active_stress(F, potential_[i] * ramp, p);
            }
            stress_[i] = s;
            F_inv_[i] = F.inverse();
            const MatD F_inv_T = F_inv_[i].transpose();
            shear_coeff_[i] = s.c * s.b_e * F_inv_T * set_.B0[i];
            remaining_coeff_[i] = s.tau_r * F_inv_T * set_.B0[i].transpose();
        }
        catch (const std::exception &)
        {
            failed[i] = 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (failed[i])
            throw NumericalFailure(describe("constitutive evaluation failed", i, time_));
}
//=================================================================================================//
template <int Dim>
void Simulation<Dim>::assemble_accelerations()
{
    const std::size_t n = set_.size();
    const Real W_zero = kernel_.value_at_zero();
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i)
    {
        VecD shear = VecD::Zero();
        VecD remaining = VecD::Zero();
        Real peak = 0.0;
        for (const auto &b : bonds_.of(i))
        {
            Real e_hat_norm = 0.0;
            const VecD dir = corrected_direction<Dim>(b, F_inv_[i], F_inv_[b.j], set_.r[i] - set_.r[b.j],
                                                      hourglass_, W_zero, e_hat_norm);
            peak = std::max(peak, e_hat_norm);
            const Real weight = b.dWdr0 * b.V0_j;
            shear += (shear_coeff_[i] + shear_coeff_[b.j]) * (weight * dir);
            remaining += (remaining_coeff_[i] + remaining_coeff_[b.j]) * (weight * b.e0);
        }
        discrepancy_peak_[i] = peak;
        set_.acc[i] = (shear + remaining) / set_.rho0[i] + body_acceleration_;
    }
    max_discrepancy_ = 0.0;
    for (Real p : discrepancy_peak_)
        max_discrepancy_ = std::max(max_discrepancy_, p);
}
//=================================================================================================//
template <int Dim>
Real Simulation<Dim>::step()
{
    const Real dt = compute_timestep(set_, sound_speed_, kernel_.h(), controls_.cfl);
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw NumericalFailure("solver: invalid time step at t = " + std::to_string(time_));

    update_half(dt);
    evaluate_stress(dt);
    assemble_accelerations();

    const Real next_time = time_ + dt;
    const std::size_t n = set_.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        switch (set_.constraint[i])
        {
        case ConstraintKind::free:
            set_.vel[i] += dt * set_.acc[i];
            break;
        case ConstraintKind::clamped:
            break;
        case ConstraintKind::prescribed:
            set_.vel[i] = set_.regions[set_.region[i]].profile(next_time);
            break;
        }
    }
    apply_wall();
    for (std::size_t i = 0; i < n; ++i)
    {
        const Real v = set_.vel[i].norm();
        if (!std::isfinite(v) || v > velocity_limit_)
            throw NumericalFailure(describe("velocity diverged", i, next_time));
    }

    set_.dF = deformation_rate(set_, bonds_);
    update_half(dt);
    time_ = next_time;
    ++steps_;
    return dt;
}
//=================================================================================================//
template <int Dim>
Real Simulation<Dim>::kinetic_energy() const
{
    Real energy = 0.0;
    for (std::size_t i = 0; i < set_.size(); ++i)
        if (set_.constraint[i] == ConstraintKind::free)
            energy += 0.5 * set_.mass(i) * set_.vel[i].squaredNorm();
    return energy;
}
//=================================================================================================//
template <int Dim>
Vec<Dim> Simulation<Dim>::linear_momentum() const
{
    VecD momentum = VecD::Zero();
    for (std::size_t i = 0; i < set_.size(); ++i)
        momentum += set_.mass(i) * set_.vel[i];
    return momentum;
}
//=================================================================================================//
template <int Dim>
Real Simulation<Dim>::min_bond_distance() const
{
    Real smallest = std::numeric_limits<Real>::infinity();
    for (std::size_t i = 0; i < set_.size(); ++i)
        for (const auto &b : bonds_.of(i))
            smallest = std::min(smallest, (set_.r[i] - set_.r[b.j]).norm());
    return smallest;
}
//=================================================================================================//
template class Simulation<2>;
template class Simulation<3>;
template Vec<2> discrepancy(const Mat<2> &, const Mat<2> &, const Vec<2> &, Real, const Vec<2> &);
template Vec<3> discrepancy(const Mat<3> &, const Mat<3> &, const Vec<3> &, Real, const Vec<3> &);
template std::vector<Vec<2>> shear_acceleration(const ParticleSet<2> &, const Neighborhoods<2> &,
                                                const std::vector<StressDecomposition<2>> &, const HourglassParams &, Real);
template std::vector<Vec<3>> shear_acceleration(const ParticleSet<3> &, const Neighborhoods<3> &,
                                                const std::vector<StressDecomposition<3>> &, const HourglassParams &, Real);
template std::vector<Vec<2>> remaining_acceleration(const ParticleSet<2> &, const Neighborhoods<2> &,
                                                    const std::vector<StressDecomposition<2>> &);
template std::vector<Vec<3>> remaining_acceleration(const ParticleSet<3> &, const Neighborhoods<3> &,
                                                    const std::vector<StressDecomposition<3>> &);
template std::vector<Mat<2>> deformation_rate(const ParticleSet<2> &, const Neighborhoods<2> &);
template std::vector<Mat<3>> deformation_rate(const ParticleSet<3> &, const Neighborhoods<3> &);
template std::vector<Real> particle_sound_speeds(const ParticleSet<2> &, const std::vector<MaterialModel> &);
template std::vector<Real> particle_sound_speeds(const ParticleSet<3> &, const std::vector<MaterialModel> &);
template Real compute_timestep(const ParticleSet<2> &, const std::vector<Real> &, Real, Real);
template Real compute_timestep(const ParticleSet<3> &, const std::vector<Real> &, Real, Real);
//=================================================================================================//
} // namespace tlsph
