#pragma once

#include "tlsph/base.hpp"

#include <variant>

namespace tlsph
{
struct ElasticParams
{
    Real rho0 = 1.0;
    Real K = 1.0; ///< bulk modulus
    Real G = 1.0; ///< shear modulus

    /** Converts (E, nu) with the three-dimensional relations, also used for plane strain. */
    static ElasticParams from_young(Real rho0, Real youngs_modulus, Real poisson_ratio);
    Real sound_speed() const;
    void validate() const;
};

struct PerfectPlasticity
{
};

struct LinearHardening
{
    Real kappa = 0.0;
};

/// tau_flow(xi) = tau_y0 + kappa_lin xi + (tau_sat - tau_y0)(1 - exp(-exponent xi)),
/// where tau_y0 is PlasticParams::yield_stress.
struct SaturationHardening
{
    Real tau_sat = 0.0;
    Real exponent = 0.0;
    Real kappa_lin = 0.0;
};

/// Rate-dependent overstress flow, gamma_dot = ((|tau_de| - sqrt(2/3) tau_y) / viscosity)^(1/power).
struct HerschelBulkley
{
    Real viscosity = 1.0;
    Real power = 1.0;
};

using Hardening = std::variant<PerfectPlasticity, LinearHardening, SaturationHardening, HerschelBulkley>;

struct PlasticParams
{
    ElasticParams base;
    Real yield_stress = 0.0;
    Hardening hardening = PerfectPlasticity{};

    /** Flow stress (kappa xi + tau_y for linear hardening). */
    Real flow_stress(Real xi) const;
    /** d flow_stress / d xi. */
    Real hardening_slope(Real xi) const;
    void validate() const;
};

template <int Dim>
struct PlasticState
{
    Mat<Dim> Cp_inv = Mat<Dim>::Identity();
    Real xi = 0.0;
};

struct HolzapfelOgdenParams
{
    Real rho0 = 1.0;
    Real a = 0.0, b = 0.0;
    Real a_f = 0.0, b_f = 0.0;
    Real a_s = 0.0, b_s = 0.0;
    Real a_fs = 0.0, b_fs = 0.0;
    Real lambda = 0.0;
    Vec3 f0 = Vec3::UnitX();
    Vec3 s0 = Vec3::UnitY();

    /** Small-strain bulk modulus lambda + 2a/3, used for the sound speed. */
    Real bulk_modulus() const { return lambda + 2.0 * a / 3.0; }
    Real sound_speed() const;
    void validate() const;
};

/**
 * Kirchhoff stress split tau = c b_e + tau_r, where c b_e carries the main shear
 * part discretized with hourglass correction and tau_r the remainder.
 */
template <int Dim>
struct StressDecomposition
{
    Real c = 0.0;
    Mat<Dim> b_e = Mat<Dim>::Identity();
    Mat<Dim> tau_r = Mat<Dim>::Zero();

    Mat<Dim> kirchhoff() const { return c * b_e + tau_r; }
};

template <int Dim>
struct ReturnMapResult
{
    StressDecomposition<Dim> stress;
    PlasticState<Dim> state;
    Mat<Dim> tau_de; ///< deviatoric Kirchhoff stress after the return
    bool yielded = false;
};

template <int Dim>
StressDecomposition<Dim> neo_hookean_stress(const Mat<Dim> &F, const ElasticParams &params, const Mat<Dim> &damping);

template <int Dim>
Real yield_function(const Mat<Dim> &tau_de, Real xi, const PlasticParams &params);

/** J2 radial return for perfect, linear and saturation hardening. */
template <int Dim>
ReturnMapResult<Dim> plastic_return_map(const Mat<Dim> &F, const PlasticState<Dim> &state, const PlasticParams &params);

/** Viscoplastic return: the overstress relaxes along the flow ODE over dt. */
template <int Dim>
ReturnMapResult<Dim> herschel_bulkley_return_map(const Mat<Dim> &F, const PlasticState<Dim> &state,
                                                 const PlasticParams &params, Real dt);

/** Full Kirchhoff stress of the Holzapfel-Ogden model, no damping. */
Mat3 holzapfel_ogden_kirchhoff(const Mat3 &F, const HolzapfelOgdenParams &params);

StressDecomposition<3> holzapfel_ogden_stress(const Mat3 &F, const HolzapfelOgdenParams &params, const Mat3 &damping);

/** T_a F (f0 x f0) F^T with T_a = -0.5 Vm. */
Mat3 active_stress(const Mat3 &F, Real Vm, const HolzapfelOgdenParams &params);

inline constexpr Real kActiveStressPerPotential = -0.5;

struct DampingParams
{
    Real rho0 = 1.0;
    Real bulk_modulus = 1.0;
    Real smoothing_length = 1.0;
};

/** Kelvin-Voigt stress scale (chi/2) db/dt with chi = rho c h / 2, c = sqrt(K / rho). */
template <int Dim>
Mat<Dim> damping_stress(const Mat<Dim> &F, const Mat<Dim> &Fdot, const DampingParams &params, Real damping_scale);

struct NeoHookeanModel
{
    ElasticParams params;
};

struct PlasticModel
{
    PlasticParams params;
};

struct HolzapfelOgdenModel
{
    HolzapfelOgdenParams params;
};

using MaterialModel = std::variant<NeoHookeanModel, PlasticModel, HolzapfelOgdenModel>;

Real reference_density(const MaterialModel &model);
Real bulk_modulus(const MaterialModel &model);
Real sound_speed(const MaterialModel &model);
bool is_plastic(const MaterialModel &model);
} // namespace tlsph
