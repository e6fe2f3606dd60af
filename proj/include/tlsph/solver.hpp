#pragma once

#include "tlsph/kernel.hpp"
#include "tlsph/materials.hpp"
#include "tlsph/neighbors.hpp"
#include "tlsph/particles.hpp"

#include <optional>
#include <vector>

namespace tlsph
{
struct HourglassParams
{
    Real alpha = 8.0;
    Real limiter_low = 0.05;
    Real limiter_span = 1.0;
    bool enabled = true;
    /// Forces phi on every bond; used to compare against the unlimited reformulation.
    std::optional<Real> phi_override;

    void validate() const;
};

struct StepControls
{
    Real cfl = 0.6;
    Real damping_scale = 1.0;
    Real end_time = 0.0;
    Real output_interval = 0.0;

    void validate() const;
};

/** Tracing-back mismatch 0.5 (F_i^-1 + F_j^-1) r_ij / r0_ij - e0_ij. */
template <int Dim>
Vec<Dim> discrepancy(const Mat<Dim> &F_i, const Mat<Dim> &F_j, const Vec<Dim> &r_ij, Real r0_ij, const Vec<Dim> &e0_ij);

/** phi = alpha d beta gamma with beta = W0_ij / W(0) and gamma the clamped discrepancy. */
Real hourglass_coefficient(Real W0_ij, Real W_at_zero, Real e_hat_norm, const HourglassParams &params, int dimension);

/** Per-particle acceleration of the shear part c b_e, with the hourglass correction. */
template <int Dim>
std::vector<Vec<Dim>> shear_acceleration(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds,
                                         const std::vector<StressDecomposition<Dim>> &stress,
                                         const HourglassParams &hg, Real W_at_zero);

/** Per-particle acceleration of the remaining stress tau_r. */
template <int Dim>
std::vector<Vec<Dim>> remaining_acceleration(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds,
                                             const std::vector<StressDecomposition<Dim>> &stress);

template <int Dim>
std::vector<Mat<Dim>> deformation_rate(const ParticleSet<Dim> &set, const Neighborhoods<Dim> &bonds);

/** Sound speed per particle, sqrt(K / rho0) of its material. */
template <int Dim>
std::vector<Real> particle_sound_speeds(const ParticleSet<Dim> &set, const std::vector<MaterialModel> &materials);

/**
 * CFL * min(h / (c + |v|), sqrt(h / |a|)) over particles. Constrained particles
 * enter the velocity bound only, and the acceleration bound is skipped while all
 * accelerations are zero.
 */
template <int Dim>
Real compute_timestep(const ParticleSet<Dim> &set, const std::vector<Real> &sound_speed, Real h, Real cfl);

/// Rigid frictionless plane n . r >= position for particle centers.
template <int Dim>
struct WallContact
{
    int axis = Dim - 1;
    Real position = 0.0;
};

template <int Dim>
class Simulation
{
  public:
    using VecD = Vec<Dim>;
    using MatD = Mat<Dim>;

    Simulation(ParticleSet<Dim> particles, std::vector<MaterialModel> materials, HourglassParams hourglass,
               StepControls controls);

    /** Advances one position-based Verlet step and returns the step size. */
    Real step();
    /** Steps until end_time (or the given time), invoking the observer after every step. */
    template <class Observer>
    void run_until(Real end_time, Observer &&observer)
    {
        while (time_ < end_time)
        {
            step();
            observer(*this);
        }
    }

    void set_wall(const WallContact<Dim> &wall);
    void set_body_acceleration(const VecD &g) { body_acceleration_ = g; }
    /** Transmembrane potential per particle, ramped linearly in time from 0 over ramp_time. */
    void set_activation(std::vector<Real> potential, Real ramp_time);

    Real time() const { return time_; }
    std::size_t step_count() const { return steps_; }
    const ParticleSet<Dim> &particles() const { return set_; }
    const Neighborhoods<Dim> &bonds() const { return bonds_; }
    const KernelModel &kernel() const { return kernel_; }
    const std::vector<MaterialModel> &materials() const { return materials_; }
    const HourglassParams &hourglass() const { return hourglass_; }
    const StepControls &controls() const { return controls_; }
    const std::vector<PlasticState<Dim>> &plastic_states() const { return plastic_; }
    /** Kirchhoff stress split from the most recent constitutive evaluation. */
    const std::vector<StressDecomposition<Dim>> &stresses() const { return stress_; }
    Real velocity_limit() const { return velocity_limit_; }
    Real max_discrepancy() const { return max_discrepancy_; }

    Real kinetic_energy() const;
    VecD linear_momentum() const;
    /** Smallest current distance over all reference bonds. */
    Real min_bond_distance() const;
    Real activation(std::size_t i) const;

  private:
    void update_half(Real dt);
    void evaluate_stress(Real dt);
    void assemble_accelerations();
    void apply_wall();

    ParticleSet<Dim> set_;
    std::vector<MaterialModel> materials_;
    HourglassParams hourglass_;
    StepControls controls_;
    KernelModel kernel_;
    Neighborhoods<Dim> bonds_;
    std::vector<Real> sound_speed_;
    std::vector<PlasticState<Dim>> plastic_;
    std::vector<StressDecomposition<Dim>> stress_;
    std::vector<MatD> shear_coeff_, remaining_coeff_, F_inv_;
    std::vector<Real> discrepancy_peak_;
    std::optional<WallContact<Dim>> wall_;
    VecD body_acceleration_ = VecD::Zero();
    std::vector<Real> potential_;
    Real ramp_time_ = 0.0;
    Real time_ = 0.0;
    std::size_t steps_ = 0;
    Real velocity_limit_ = 0.0;
    Real max_discrepancy_ = 0.0;
};
} // namespace tlsph
