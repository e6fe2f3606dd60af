#include "tlsph/materials.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace tlsph
{
namespace
{
const Real sqrt_2_over_3 = std::sqrt(2.0 / 3.0);

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

template <int Dim>
Real checked_determinant(const Mat<Dim> &F)
{
    const Real J = F.determinant();
    if (!(J > 0.0) || !std::isfinite(J))
        throw NumericalFailure("material: inverted deformation gradient (det F = " + std::to_string(J) + ")");
    return J;
}

template <int Dim>
StressDecomposition<Dim> isochoric_split(const Mat<Dim> &b_e, Real J, const ElasticParams &params)
{
    StressDecomposition<Dim> out;
    out.c = std::pow(b_e.determinant(), -1.0 / Dim) * params.G;
    out.b_e = b_e;
    out.tau_r = (0.5 * params.K * (J * J - 1.0) - out.c * b_e.trace() / Dim) * Mat<Dim>::Identity();
    return out;
}

Real exp_energy_slope(Real a, Real b, Real x)
{
    return a * x * std::exp(b * x * x);
}
} // namespace
//=================================================================================================//
ElasticParams ElasticParams::from_young(Real rho0, Real youngs_modulus, Real poisson_ratio)
{
    if (!(poisson_ratio > -1.0 && poisson_ratio < 0.5))
        throw ContractViolation("material: Poisson ratio must lie in (-1, 0.5)");
    ElasticParams p;
    p.rho0 = rho0;
    p.K = youngs_modulus / (3.0 * (1.0 - 2.0 * poisson_ratio));
    p.G = youngs_modulus / (2.0 * (1.0 + poisson_ratio));
    p.validate();
    return p;
}
//=================================================================================================//
Real ElasticParams::sound_speed() const
{
    return std::sqrt(K / rho0);
}
//=================================================================================================//
void ElasticParams::validate() const
{
    if (!(rho0 > 0.0) || !(K > 0.0) || !(G > 0.0))
        throw ContractViolation("material: density, bulk and shear modulus must be positive");
}
//=================================================================================================//
Real PlasticParams::flow_stress(Real xi) const
{
    return std::visit(overloaded{
                          [&](const PerfectPlasticity &) { return yield_stress; },
                          [&](const LinearHardening &h) { return yield_stress + h.kappa * xi; },
                          [&](const SaturationHardening &h) {
                              return yield_stress + h.kappa_lin * xi +
                                     (h.tau_sat - yield_stress) * (1.0 - std::exp(-h.exponent * xi));
                          },
                          [&](const HerschelBulkley &) { return yield_stress; },
                      },
                      hardening);
}
//=================================================================================================//
Real PlasticParams::hardening_slope(Real xi) const
{
    return std::visit(overloaded{
                          [](const PerfectPlasticity &) { return 0.0; },
                          [](const LinearHardening &h) { return h.kappa; },
                          [&](const SaturationHardening &h) {
                              return h.kappa_lin + (h.tau_sat - yield_stress) * h.exponent * std::exp(-h.exponent * xi);
                          },
                          [](const HerschelBulkley &) { return 0.0; },
                      },
                      hardening);
}
//=================================================================================================//
void PlasticParams::validate() const
{
    base.validate();
    if (!(yield_stress >= 0.0))
        throw ContractViolation("material: yield stress must be non-negative");
    std::visit(overloaded{
                   [](const PerfectPlasticity &) {},
                   [](const LinearHardening &h) {
                       if (!(h.kappa >= 0.0))
                           throw ContractViolation("material: hardening modulus must be non-negative");
                   },
                   [&](const SaturationHardening &h) {
                       if (!(h.tau_sat >= yield_stress) || !(h.exponent >= 0.0) || !(h.kappa_lin >= 0.0))
                           throw ContractViolation("material: saturation hardening parameters out of range");
                   },
                   [](const HerschelBulkley &h) {
                       if (!(h.viscosity > 0.0) || !(h.power > 0.0))
                           throw ContractViolation("material: Herschel-Bulkley viscosity and power must be positive");
                   },
               },
               hardening);
}
//=================================================================================================//
Real HolzapfelOgdenParams::sound_speed() const
{
    return std::sqrt(bulk_modulus() / rho0);
}
//=================================================================================================//
void HolzapfelOgdenParams::validate() const
{
    if (!(rho0 > 0.0) || !(lambda > 0.0))
        throw ContractViolation("material: Holzapfel-Ogden density and lambda must be positive");
    for (Real v : {a, b, a_f, b_f, a_s, b_s, a_fs, b_fs})
        if (!(v >= 0.0))
            throw ContractViolation("material: Holzapfel-Ogden constants must be non-negative");
    if (std::abs(f0.norm() - 1.0) > 1.0e-12 || std::abs(s0.norm() - 1.0) > 1.0e-12)
        throw ContractViolation("material: fiber and sheet directions must be unit vectors");
}
//=================================================================================================//
template <int Dim>
StressDecomposition<Dim> neo_hookean_stress(const Mat<Dim> &F, const ElasticParams &params, const Mat<Dim> &damping)
{
    const Real J = checked_determinant(F);
    StressDecomposition<Dim> out = isochoric_split<Dim>(F * F.transpose(), J, params);
    out.tau_r += damping;
    return out;
}
//=================================================================================================//
template <int Dim>
Real yield_function(const Mat<Dim> &tau_de, Real xi, const PlasticParams &params)
{
    return tau_de.norm() - sqrt_2_over_3 * params.flow_stress(xi);
}
//=================================================================================================//
namespace
{
struct TrialState
{
    Real J;
    Real det_be;
    Real trace_be;
    Real norm;
    Real G_tilde;
};

template <int Dim>
ReturnMapResult<Dim> apply_radial_return(const Mat<Dim> &F, const Mat<Dim> &tau_trial,
                                         const TrialState &trial, const PlasticState<Dim> &state,
                                         const PlasticParams &params, Real increment)
{
    ReturnMapResult<Dim> out;
    out.yielded = true;
    out.state.xi = state.xi + sqrt_2_over_3 * increment;
    out.tau_de = tau_trial * (1.0 - 2.0 * trial.G_tilde * increment / trial.norm);
    // deviator rescaled back from the unit-determinant configuration, trace kept
    const Mat<Dim> be = std::pow(trial.det_be, 1.0 / Dim) * out.tau_de / params.base.G +
                        (trial.trace_be / Dim) * Mat<Dim>::Identity();
    const Mat<Dim> F_inv = F.inverse();
    const Mat<Dim> cp_inv = F_inv * be * F_inv.transpose();
    out.state.Cp_inv = 0.5 * (cp_inv + cp_inv.transpose());
    out.stress = isochoric_split<Dim>(be, trial.J, params.base);
    return out;
}

template <int Dim>
ReturnMapResult<Dim> elastic_result(const Mat<Dim> &be_trial, const Mat<Dim> &tau_trial, Real J,
                                    const PlasticState<Dim> &state, const PlasticParams &params)
{
    ReturnMapResult<Dim> out;
    out.state = state;
    out.tau_de = tau_trial;
    out.stress = isochoric_split<Dim>(be_trial, J, params.base);
    return out;
}
} // namespace
//=================================================================================================//
template <int Dim>
ReturnMapResult<Dim> plastic_return_map(const Mat<Dim> &F, const PlasticState<Dim> &state, const PlasticParams &params)
{
    if (std::holds_alternative<HerschelBulkley>(params.hardening))
        throw ContractViolation("material: Herschel-Bulkley flow needs the rate-dependent return map");
    const Real J = checked_determinant(F);
    const Mat<Dim> be_trial = F * state.Cp_inv * F.transpose();
    TrialState trial;
    trial.J = J;
    trial.det_be = be_trial.determinant();
    trial.trace_be = be_trial.trace();
    const Mat<Dim> be_bar = std::pow(trial.det_be, -1.0 / Dim) * be_trial;
    const Mat<Dim> tau_trial = params.base.G * deviatoric<Dim>(be_bar);
    const Real f_trial = yield_function<Dim>(tau_trial, state.xi, params);
    if (f_trial <= 0.0)
        return elastic_result<Dim>(be_trial, tau_trial, J, state, params);

    trial.norm = tau_trial.norm();
    assert(trial.norm > 0.0);
    trial.G_tilde = be_bar.trace() / Dim * params.base.G;

    Real increment = 0.0;
    if (std::holds_alternative<SaturationHardening>(params.hardening))
    {
        // consistency |tau| - 2 G~ d - sqrt(2/3) tau_flow(xi + sqrt(2/3) d) = 0
        const Real tolerance = 1.0e-10 * params.yield_stress;
        increment = 0.5 * f_trial / (trial.G_tilde + params.hardening_slope(state.xi) / 3.0);
        for (int iteration = 0; iteration < 50; ++iteration)
        {
            const Real xi = state.xi + sqrt_2_over_3 * increment;
            const Real residual = trial.norm - 2.0 * trial.G_tilde * increment - sqrt_2_over_3 * params.flow_stress(xi);
            if (std::abs(residual) <= tolerance)
                break;
            const Real slope = -2.0 * trial.G_tilde - (2.0 / 3.0) * params.hardening_slope(xi);
            increment = std::max(0.0, increment - residual / slope);
        }
    }
    else
    {
        increment = 0.5 * f_trial / (trial.G_tilde + params.hardening_slope(state.xi) / 3.0);
    }
    return apply_radial_return<Dim>(F, tau_trial, trial, state, params, increment);
}
//=================================================================================================//
template <int Dim>
ReturnMapResult<Dim> herschel_bulkley_return_map(const Mat<Dim> &F, const PlasticState<Dim> &state,
                                                 const PlasticParams &params, Real dt)
{
    const auto *flow = std::get_if<HerschelBulkley>(&params.hardening);
    if (flow == nullptr)
        throw ContractViolation("material: Herschel-Bulkley return map needs Herschel-Bulkley parameters");
    if (!(dt > 0.0))
        throw ContractViolation("material: viscoplastic return map needs a positive time step");
    const Real J = checked_determinant(F);
    const Mat<Dim> be_trial = F * state.Cp_inv * F.transpose();
    TrialState trial;
    trial.J = J;
    trial.det_be = be_trial.determinant();
    trial.trace_be = be_trial.trace();
    const Mat<Dim> be_bar = std::pow(trial.det_be, -1.0 / Dim) * be_trial;
    const Mat<Dim> tau_trial = params.base.G * deviatoric<Dim>(be_bar);
    const Real f_trial = yield_function<Dim>(tau_trial, state.xi, params);
    if (f_trial <= 0.0)
        return elastic_result<Dim>(be_trial, tau_trial, J, state, params);

    trial.norm = tau_trial.norm();
    trial.G_tilde = be_bar.trace() / Dim * params.base.G;

    // overstress x = |tau| - sqrt(2/3) tau_y follows dx/dt = -2 G~ (x / eta)^(1/n), integrated exactly
    const Real rate = 2.0 * trial.G_tilde * std::pow(flow->viscosity, -1.0 / flow->power);
    Real overstress = f_trial;
    if (std::abs(flow->power - 1.0) < 1.0e-12)
    {
        overstress = f_trial * std::exp(-rate * dt);
    }
    else
    {
        const Real p = 1.0 - 1.0 / flow->power;
        const Real transformed = std::pow(f_trial, p) - p * rate * dt;
        overstress = transformed > 0.0 ? std::pow(transformed, 1.0 / p) : 0.0;
    }
    const Real increment = (f_trial - overstress) / (2.0 * trial.G_tilde);
    return apply_radial_return<Dim>(F, tau_trial, trial, state, params, increment);
}
//=================================================================================================//
Mat3 holzapfel_ogden_kirchhoff(const Mat3 &F, const HolzapfelOgdenParams &p)
{
    const Real J = checked_determinant(F);
    const Mat3 C = F.transpose() * F;
    const Vec3 Ff = F * p.f0;
    const Vec3 Fs = F * p.s0;
    const Real I1 = C.trace();
    const Real Iff = p.f0.dot(C * p.f0);
    const Real Iss = p.s0.dot(C * p.s0);
    const Real Ifs = p.f0.dot(C * p.s0);

    Mat3 tau = (p.lambda * std::log(J) - p.a) * Mat3::Identity() + p.a * std::exp(p.b * (I1 - 3.0)) * (F * F.transpose());
    tau += 2.0 * exp_energy_slope(p.a_f, p.b_f, Iff - 1.0) * Ff * Ff.transpose();
    tau += 2.0 * exp_energy_slope(p.a_s, p.b_s, Iss - 1.0) * Fs * Fs.transpose();
    tau += exp_energy_slope(p.a_fs, p.b_fs, Ifs) * (Ff * Fs.transpose() + Fs * Ff.transpose());
    return tau;
}
//=================================================================================================//
StressDecomposition<3> holzapfel_ogden_stress(const Mat3 &F, const HolzapfelOgdenParams &p, const Mat3 &damping)
{
    StressDecomposition<3> out;
    out.b_e = F * F.transpose();
    out.c = p.a * std::exp(p.b * (out.b_e.trace() - 3.0));
    out.tau_r = holzapfel_ogden_kirchhoff(F, p) - out.c * out.b_e + damping;
    return out;
}
//=================================================================================================//
Mat3 active_stress(const Mat3 &F, Real Vm, const HolzapfelOgdenParams &params)
{
    const Vec3 Ff = F * params.f0;
    return (kActiveStressPerPotential * Vm) * Ff * Ff.transpose();
}
//=================================================================================================//
template <int Dim>
Mat<Dim> damping_stress(const Mat<Dim> &F, const Mat<Dim> &Fdot, const DampingParams &params, Real damping_scale)
{
    const Real c = std::sqrt(params.bulk_modulus / params.rho0);
    const Real chi = 0.5 * params.rho0 * c * params.smoothing_length;
    const Mat<Dim> rate = Fdot * F.transpose();
    return (damping_scale * 0.5 * chi) * (rate + rate.transpose());
}
//=================================================================================================//
Real reference_density(const MaterialModel &model)
{
    return std::visit(overloaded{
                          [](const NeoHookeanModel &m) { return m.params.rho0; },
                          [](const PlasticModel &m) { return m.params.base.rho0; },
                          [](const HolzapfelOgdenModel &m) { return m.params.rho0; },
                      },
                      model);
}
//=================================================================================================//
Real bulk_modulus(const MaterialModel &model)
{
    return std::visit(overloaded{
                          [](const NeoHookeanModel &m) { return m.params.K; },
                          [](const PlasticModel &m) { return m.params.base.K; },
                          [](const HolzapfelOgdenModel &m) { return m.params.bulk_modulus(); },
                      },
                      model);
}
//=================================================================================================//
Real sound_speed(const MaterialModel &model)
{
    return std::sqrt(bulk_modulus(model) / reference_density(model));
}
//=================================================================================================//
bool is_plastic(const MaterialModel &model)
{
    return std::holds_alternative<PlasticModel>(model);
}
//=================================================================================================//
template StressDecomposition<2> neo_hookean_stress(const Mat2 &, const ElasticParams &, const Mat2 &);
template StressDecomposition<3> neo_hookean_stress(const Mat3 &, const ElasticParams &, const Mat3 &);
template Real yield_function(const Mat2 &, Real, const PlasticParams &);
template Real yield_function(const Mat3 &, Real, const PlasticParams &);
template ReturnMapResult<2> plastic_return_map(const Mat2 &, const PlasticState<2> &, const PlasticParams &);
template ReturnMapResult<3> plastic_return_map(const Mat3 &, const PlasticState<3> &, const PlasticParams &);
template ReturnMapResult<2> herschel_bulkley_return_map(const Mat2 &, const PlasticState<2> &, const PlasticParams &, Real);
template ReturnMapResult<3> herschel_bulkley_return_map(const Mat3 &, const PlasticState<3> &, const PlasticParams &, Real);
template Mat2 damping_stress(const Mat2 &, const Mat2 &, const DampingParams &, Real);
template Mat3 damping_stress(const Mat3 &, const Mat3 &, const DampingParams &, Real);
//=================================================================================================//
} // namespace tlsph
