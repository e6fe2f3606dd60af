#include "tlsph/cases.hpp"
#include "tlsph/io.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace tlsph
{
namespace
{
constexpr Real kPlateYoungsModulus = 2.0e6;
constexpr Real kPlateDensity = 1000.0;
constexpr Real kPlateWavenumberLength = 1.875;

constexpr Real kColumnLength = 6.0;
constexpr Real kColumnHeight = 1.0;
constexpr Real kColumnDensity = 1100.0;
constexpr Real kColumnYoungsModulus = 17.0e6;
constexpr Real kColumnShearParameter = 5.86e6;

constexpr Real kMuscleBulkModulus = 450.0;

constexpr Real kNeckingLength = 53.334e-3;
constexpr Real kNeckingHeight = 12.826e-3;
constexpr Real kNeckingReduction = 0.982;
constexpr Real kNeckingYield = 450.0e6;
constexpr Real kNeckingDisplacement = 8.0e-3;

constexpr Real kTaylorEndTime = 80.0e-6;

Real parameter(const CaseParameters &p, const std::string &key)
{
    const auto it = p.find(key);
    if (it == p.end())
        throw ContractViolation("case parameter '" + key + "' missing");
    return it->second;
}

HolzapfelOgdenParams column_holzapfel_ogden(Real nu, Real anisotropy_ratio, const Vec3 &fiber, const Vec3 &sheet)
{
    const ElasticParams reference = ElasticParams::from_young(kColumnDensity, kColumnYoungsModulus, nu);
    HolzapfelOgdenParams p;
    p.rho0 = kColumnDensity;
    p.a = kColumnShearParameter;
    p.b = 1.0;
    p.a_f = anisotropy_ratio * p.a;
    p.lambda = reference.K - 2.0 * p.a / 3.0;
    p.f0 = fiber;
    p.s0 = sheet;
    return p;
}

template <int Dim>
ProbeSpec<Dim> probe(const std::string &name, ProbeKind kind, int axis, const Vec<Dim> &target = Vec<Dim>::Zero())
{
    ProbeSpec<Dim> spec;
    spec.name = name;
    spec.kind = kind;
    spec.axis = axis;
    spec.slab_axis = axis;
    spec.target = target;
    return spec;
}

Real last(const ProbeSeries &series, const std::string &column)
{
    const auto values = series.column(column);
    if (values.empty())
        throw ContractViolation("probe series is empty");
    return values.back();
}
} // namespace
//=================================================================================================//
Real plate_mode_shape(Real x, Real k, Real L)
{
    const Real kL = k * L, kx = k * x;
    return (std::sin(kL) + std::sinh(kL)) * (std::cos(kx) - std::cosh(kx)) -
           (std::cos(kL) + std::cosh(kL)) * (std::sin(kx) - std::sinh(kx));
}
//=================================================================================================//
Real plate_theory_period(Real L, Real H, Real nu, Real youngs_modulus, Real density)
{
    const Real k = kPlateWavenumberLength / L;
    const Real omega2 = youngs_modulus * H * H * std::pow(k, 4) / (12.0 * density * (1.0 - nu * nu));
    return 2.0 * std::numbers::pi / std::sqrt(omega2);
}
//=================================================================================================//
CaseDefinition<2> oscillating_plate_case(Real vf, Real nu, Real L, Real H, Real dp_ratio)
{
    if (!(L > 0.0) || !(H > 0.0) || !(dp_ratio >= 1.0))
        throw ContractViolation("oscillating plate: length, height and resolution must be positive");
    CaseDefinition<2> def;
    def.name = "oscillating_plate";
    const ElasticParams material = ElasticParams::from_young(kPlateDensity, kPlateYoungsModulus, nu);
    def.materials = {NeoHookeanModel{material}};

    def.lattice.dp = H / dp_ratio;
    def.lattice.rho0 = kPlateDensity;
    def.lattice.lengths = Vec2(L, H);
    ConstrainedRegion<2> clamp;
    clamp.name = "clamp";
    clamp.axis = 0;
    def.lattice.constrained_regions = {clamp};

    const Real k = kPlateWavenumberLength / L;
    const Real tip = plate_mode_shape(L, k, L);
    const Real amplitude = vf * material.sound_speed();
    def.initial_velocity = [=](const Vec2 &r0) { return Vec2(0.0, amplitude * plate_mode_shape(r0[0], k, L) / tip); };

    const Real period = plate_theory_period(L, H, nu, kPlateYoungsModulus, kPlateDensity);
    def.controls.end_time = 1.75 * period;
    def.probe_interval = period / 400.0;
    def.probes = {probe<2>("tip_y", ProbeKind::point_position, 1, Vec2(L, 0.5 * H))};
    def.references = {{"period", period, 0.10, "thin-plate theory"}};
    def.summarize = [period](const ProbeSeries &series, Measurements &m) {
        m["theory_period"] = period;
        try
        {
            m["period"] = extract_period(series.time, series.column("tip_y"));
        }
        catch (const ContractViolation &)
        {
            return; // too short to contain an oscillation
        }
        m["period_error"] = std::abs(m["period"] - period) / period;
    };
    return def;
}
//=================================================================================================//
CaseDefinition<3> bending_column_case(Real v0_magnitude, ColumnMaterial material, Real anisotropy_ratio,
                                      Real dp_ratio)
{
    if (!(dp_ratio >= 2.0) || !(anisotropy_ratio >= 0.0))
        throw ContractViolation("bending column: resolution must be at least 2 and anisotropy non-negative");
    CaseDefinition<3> def;
    def.name = "bending_column";
    const Real nu = 0.45;
    if (material == ColumnMaterial::neo_hookean)
        def.materials = {NeoHookeanModel{ElasticParams::from_young(kColumnDensity, kColumnYoungsModulus, nu)}};
    else
        def.materials = {HolzapfelOgdenModel{column_holzapfel_ogden(nu, anisotropy_ratio, Vec3::UnitZ(), Vec3::UnitX())}};

    const Real H = kColumnHeight, L = kColumnLength;
    def.lattice.dp = H / dp_ratio;
    def.lattice.rho0 = kColumnDensity;
    def.lattice.origin = Vec3(-0.5 * H, -0.5 * H, 0.0);
    def.lattice.lengths = Vec3(H, H, L);
    ConstrainedRegion<3> clamp;
    clamp.name = "clamp";
    clamp.axis = 2;
    def.lattice.constrained_regions = {clamp};

    const Vec3 v0 = v0_magnitude * Vec3(std::sqrt(3.0) / 2.0, 0.5, 0.0);
    def.initial_velocity = [v0](const Vec3 &) { return v0; };
    def.controls.end_time = 1.0;
    def.probe_interval = 1.0e-3;
    const Vec3 corner(0.5 * H, 0.5 * H, L);
    for (int a = 0; a < 3; ++a)
    {
        auto p = probe<3>(std::string("S_") + "xyz"[a], ProbeKind::point_displacement, a, corner);
        def.probes.push_back(p);
    }
    def.summarize = [](const ProbeSeries &series, Measurements &m) {
        const auto sz = series.column("S_z");
        m["S_z_min"] = *std::min_element(sz.begin(), sz.end());
        m["S_z_final"] = sz.back();
    };
    return def;
}
//=================================================================================================//
CaseDefinition<3> twisting_column_case(Real omega0, Real nu, Real anisotropy_ratio, Real dp_ratio)
{
    if (!(omega0 > 0.0))
        throw ContractViolation("twisting column: angular velocity must be positive");
    if (!(dp_ratio >= 2.0) || !(anisotropy_ratio >= 0.0))
        throw ContractViolation("twisting column: resolution must be at least 2 and anisotropy non-negative");
    CaseDefinition<3> def;
    def.name = "twisting_column";
    if (anisotropy_ratio > 0.0)
        def.materials = {HolzapfelOgdenModel{column_holzapfel_ogden(nu, anisotropy_ratio, Vec3::UnitY(), Vec3::UnitX())}};
    else
        def.materials = {NeoHookeanModel{ElasticParams::from_young(kColumnDensity, kColumnYoungsModulus, nu)}};

    const Real H = kColumnHeight, L = kColumnLength;
    def.lattice.dp = H / dp_ratio;
    def.lattice.rho0 = kColumnDensity;
    def.lattice.origin = Vec3(-0.5 * H, 0.0, -0.5 * H);
    def.lattice.lengths = Vec3(H, L, H);
    ConstrainedRegion<3> clamp;
    clamp.name = "clamp";
    clamp.axis = 1;
    def.lattice.constrained_regions = {clamp};

    def.initial_velocity = [=](const Vec3 &r0) {
        const Vec3 omega(0.0, omega0 * std::sin(std::numbers::pi * r0[1] / (2.0 * L)), 0.0);
        return Vec3(omega.cross(Vec3(r0[0], 0.0, r0[2])));
    };
    def.controls.end_time = 0.3;
    def.probe_interval = 1.0e-3;
    const Vec3 corner(0.5 * H, L, 0.5 * H);
    for (int a = 0; a < 3; ++a)
        def.probes.push_back(probe<3>(std::string("S_") + "xyz"[a], ProbeKind::point_displacement, a, corner));
    def.summarize = [](const ProbeSeries &series, Measurements &m) {
        const auto sx = series.column("S_x");
        m["S_x_max"] = *std::max_element(sx.begin(), sx.end());
        m["completed"] = 1.0;
    };
    return def;
}
//=================================================================================================//
CaseDefinition<3> muscle_contraction_case(Real Vm_top, bool anisotropic, Real dp)
{
    if (!(Vm_top >= 0.0))
        throw ContractViolation("muscle contraction: top potential must be non-negative");
    if (!(dp > 0.0 && dp <= 0.5))
        throw ContractViolation("muscle contraction: spacing must lie in (0, 0.5]");
    CaseDefinition<3> def;
    def.name = "muscle_contraction";
    HolzapfelOgdenParams p;
    p.rho0 = 1.0;
    p.a = 0.059;
    p.b = 8.023;
    if (anisotropic)
    {
        p.a_f = 18.472, p.b_f = 16.026;
        p.a_s = 2.841, p.b_s = 11.12;
        p.a_fs = 0.216, p.b_fs = 11.436;
    }
    p.lambda = kMuscleBulkModulus - 2.0 * p.a / 3.0;
    p.f0 = Vec3::UnitZ();
    p.s0 = Vec3::UnitX();
    def.materials = {HolzapfelOgdenModel{p}};

    def.lattice.dp = dp;
    def.lattice.rho0 = p.rho0;
    def.lattice.lengths = Vec3(1.0, 1.0, 1.0);
    ConstrainedRegion<3> clamp;
    clamp.name = "clamp";
    clamp.axis = 2;
    def.lattice.constrained_regions = {clamp};

    def.potential = [Vm_top](const Vec3 &r0) { return Vm_top * std::clamp(r0[2], 0.0, 1.0); };
    def.activation_ramp = 1.0;
    def.controls.end_time = 40.0;
    // exponential stiffening outruns the bulk sound speed near the stretched top edges
    def.controls.cfl = 0.15;
    def.steady_state = {true, 1.0e-6, 0.1, def.activation_ramp};
    def.probe_interval = 0.01;
    def.probes = {probe<3>("top_displacement", ProbeKind::layer_displacement, 2, Vec3(0.0, 0.0, 1.0))};

    if (!anisotropic && std::abs(Vm_top - 30.0) < 1.0e-12)
    {
        const std::pair<Real, Real> table[] = {{0.1, 0.4988}, {0.05, 0.5248}, {0.025, 0.5355}};
        for (const auto &[spacing, value] : table)
            if (std::abs(dp - spacing) < 1.0e-9)
                def.references.push_back({"displacement", value, 0.03, "isotropic top-face displacement"});
    }
    def.summarize = [](const ProbeSeries &series, Measurements &m) {
        m["displacement"] = last(series, "top_displacement");
    };
    return def;
}
//=================================================================================================//
namespace
{
PlasticParams copper()
{
    PlasticParams p;
    p.base = ElasticParams::from_young(8930.0, 117.0e9, 0.35);
    p.yield_stress = 0.4e9;
    p.hardening = LinearHardening{0.1e9};
    return p;
}

PlasticParams aluminium()
{
    PlasticParams p;
    p.base = ElasticParams::from_young(2700.0, 78.2e9, 0.3);
    p.yield_stress = 0.29e9;
    p.hardening = PerfectPlasticity{};
    return p;
}

template <int Dim>
void taylor_controls(CaseDefinition<Dim> &def)
{
    def.controls.cfl = 0.1;
    def.controls.damping_scale = 0.125;
    def.controls.end_time = kTaylorEndTime;
    def.probe_interval = 0.5e-6;
    def.wall = WallContact<Dim>{Dim - 1, 0.5 * def.lattice.dp};
}
} // namespace
//=================================================================================================//
AnyCase taylor_bar_case(TaylorGeometry geometry, Real v0, Real resolution)
{
    if (!(v0 >= 0.0))
        throw ContractViolation("taylor bar: impact speed must be non-negative");
    if (!(resolution >= 2.0))
        throw ContractViolation("taylor bar: resolution must be at least 2");
    if (geometry == TaylorGeometry::planar)
    {
        const Real H = 6.0e-3, L = 0.03;
        CaseDefinition<2> def;
        def.name = "taylor_bar_planar";
        const PlasticParams p = copper();
        def.materials = {PlasticModel{p}};
        def.lattice.dp = H / resolution;
        def.lattice.rho0 = p.base.rho0;
        def.lattice.origin = Vec2(-0.5 * H, 0.0);
        def.lattice.lengths = Vec2(H, L);
        def.initial_velocity = [v0](const Vec2 &) { return Vec2(0.0, -v0); };
        taylor_controls(def);
        def.probes = {probe<2>("length", ProbeKind::body_extent, 1), probe<2>("width", ProbeKind::body_extent, 0)};
        def.summarize = [](const ProbeSeries &series, Measurements &m) {
            m["length"] = last(series, "length");
            m["width"] = last(series, "width");
        };
        return def;
    }

    CaseDefinition<3> def;
    if (geometry == TaylorGeometry::square3d)
    {
        const Real H = 6.0e-3, L = 0.03;
        def.name = "taylor_bar_square";
        const PlasticParams p = copper();
        def.materials = {PlasticModel{p}};
        def.lattice.dp = H / resolution;
        def.lattice.rho0 = p.base.rho0;
        def.lattice.origin = Vec3(-0.5 * H, -0.5 * H, 0.0);
        def.lattice.lengths = Vec3(H, H, L);
        taylor_controls(def);
        auto s = probe<3>("S_x", ProbeKind::point_position, 0, Vec3(0.5 * H, 0.5 * H, 0.0));
        s.offset = 0.5 * def.lattice.dp;
        def.probes = {probe<3>("length", ProbeKind::body_extent, 2), s};
        def.references = {{"S_x", 6.953e-3, 0.05, "finest-resolution corner position"}};
        def.summarize = [](const ProbeSeries &series, Measurements &m) {
            m["length"] = last(series, "length");
            m["S_x"] = last(series, "S_x");
        };
    }
    else
    {
        const Real R = 0.391e-2, L = 2.346e-2;
        def.name = "taylor_bar_round";
        const PlasticParams p = aluminium();
        def.materials = {PlasticModel{p}};
        def.lattice.shape = ShapeKind::cylinder;
        def.lattice.radius = R;
        def.lattice.length = L;
        def.lattice.dp = R / resolution;
        def.lattice.rho0 = p.base.rho0;
        taylor_controls(def);
        def.probes = {probe<3>("length", ProbeKind::body_extent, 2), probe<3>("radius", ProbeKind::radial_extent, 2)};
        const Real table[][3] = {{8.0, 1.4908e-2, 0.9075e-2}, {12.0, 1.4631e-2, 0.9323e-2}, {16.0, 1.4546e-2, 0.9616e-2}};
        if (std::abs(v0 - 373.0) < 1.0e-9)
            for (const auto &row : table)
                if (std::abs(resolution - row[0]) < 1.0e-9)
                {
                    def.references.push_back({"length", row[1], 0.03, "final bar length"});
                    def.references.push_back({"radius", row[2], 0.05, "final mushroom radius"});
                }
        def.summarize = [](const ProbeSeries &series, Measurements &m) {
            m["length"] = last(series, "length");
            m["radius"] = last(series, "radius");
        };
    }
    def.initial_velocity = [v0](const Vec3 &) { return Vec3(0.0, 0.0, -v0); };
    return def;
}
//=================================================================================================//
Real necking_limit_load()
{
    return 2.0 / std::sqrt(3.0) * kNeckingYield * kNeckingReduction * kNeckingHeight;
}
//=================================================================================================//
CaseDefinition<2> necking_bar_case(Real dp_ratio)
{
    if (!(dp_ratio >= 4.0))
        throw ContractViolation("necking bar: resolution must be at least 4");
    CaseDefinition<2> def;
    def.name = "necking_bar";
    PlasticParams p;
    p.base.rho0 = 7850.0;
    p.base.K = 164.21e9;
    p.base.G = 80.1938e9;
    p.yield_stress = kNeckingYield;
    p.hardening = SaturationHardening{715.0e6, 16.93, 129.24e6};
    def.materials = {PlasticModel{p}};

    const Real H = kNeckingHeight;
    const Real dp = H / dp_ratio;
    const Real L = lattice_count(kNeckingLength, dp) * dp;
    def.lattice.dp = dp;
    def.lattice.rho0 = p.base.rho0;
    def.lattice.origin = Vec2(0.0, -0.5 * H);
    def.lattice.lengths = Vec2(kNeckingLength, H);
    const Real loading_time = 4.0e-3;
    const Real ramp = 0.1 * loading_time;
    const Real v_max = 0.5 * kNeckingDisplacement / (loading_time - 0.5 * ramp);
    auto speed = [=](Real t) { return v_max * std::min(t / ramp, 1.0); };
    ConstrainedRegion<2> left, right;
    left.name = "left_grip";
    left.axis = 0;
    left.kind = ConstraintKind::prescribed;
    left.profile = [speed](Real t) { return Vec2(-speed(t), 0.0); };
    right = left;
    right.name = "right_grip";
    right.upper = true;
    right.profile = [speed](Real t) { return Vec2(speed(t), 0.0); };
    def.lattice.constrained_regions = {left, right};

    // half-height tapers linearly from the ends to the reduced center
    const Real center = 0.5 * L;
    auto factor = [=](const Vec2 &x) {
        const Real s = std::clamp(std::abs(x[0] - center) / center, 0.0, 1.0);
        return kNeckingReduction + (1.0 - kNeckingReduction) * s;
    };
    def.lattice.position_map = [factor](const Vec2 &x) { return Vec2(x[0], x[1] * factor(x)); };
    def.lattice.volume_ratio = factor;

    def.controls.end_time = loading_time;
    def.probe_interval = loading_time / 800.0;
    auto reaction = probe<2>("reaction", ProbeKind::reaction_force, 0);
    reaction.region = 1;
    reaction.scale = -1.0;
    auto right_end = probe<2>("right_end", ProbeKind::point_displacement, 0, Vec2(L, 0.0));
    right_end.region = 1;
    auto left_end = probe<2>("left_end", ProbeKind::point_displacement, 0, Vec2(0.0, 0.0));
    left_end.region = 0;
    auto section = probe<2>("center_height", ProbeKind::section_extent, 1, Vec2(center, 0.0));
    section.slab_axis = 0;
    def.probes = {reaction, right_end, left_end, section};
    def.summarize = [](const ProbeSeries &series, Measurements &m) {
        const auto force = series.column("reaction");
        const auto height = series.column("center_height");
        m["peak_force"] = *std::max_element(force.begin(), force.end());
        m["limit_load"] = necking_limit_load();
        m["peak_ratio"] = m["peak_force"] / m["limit_load"];
        m["necking_displacement"] = 0.5 * (height.front() - height.back());
        m["imposed_displacement"] = last(series, "right_end") - last(series, "left_end");
    };
    return def;
}
//=================================================================================================//
const std::vector<CaseEntry> &case_registry()
{
    static const std::vector<CaseEntry> registry = {
        {"oscillating_plate",
         "2D clamped plate strip released with its first bending mode velocity",
         {{"vf", 0.05}, {"nu", 0.4}, {"length", 0.2}, {"height", 0.02}, {"resolution", 10.0}},
         [](const CaseParameters &p) -> AnyCase {
             return oscillating_plate_case(parameter(p, "vf"), parameter(p, "nu"), parameter(p, "length"),
                                           parameter(p, "height"), parameter(p, "resolution"));
         }},
        {"bending_column",
         "3D column clamped at the bottom with a uniform oblique initial velocity",
         {{"velocity", 10.0}, {"holzapfel_ogden", 0.0}, {"anisotropy", 0.0}, {"resolution", 6.0}},
         [](const CaseParameters &p) -> AnyCase {
             return bending_column_case(parameter(p, "velocity"),
                                        parameter(p, "holzapfel_ogden") != 0.0 ? ColumnMaterial::holzapfel_ogden
                                                                               : ColumnMaterial::neo_hookean,
                                        parameter(p, "anisotropy"), parameter(p, "resolution"));
         }},
        {"twisting_column",
         "3D column clamped at the bottom with a sinusoidal twisting velocity",
         {{"omega", 105.0}, {"nu", 0.499}, {"anisotropy", 0.0}, {"resolution", 6.0}},
         [](const CaseParameters &p) -> AnyCase {
             return twisting_column_case(parameter(p, "omega"), parameter(p, "nu"), parameter(p, "anisotropy"),
                                         parameter(p, "resolution"));
         }},
        {"muscle_contraction",
         "unit muscle cube contracting under a linear transmembrane potential",
         {{"potential", 30.0}, {"anisotropic", 0.0}, {"spacing", 0.1}},
         [](const CaseParameters &p) -> AnyCase {
             return muscle_contraction_case(parameter(p, "potential"), parameter(p, "anisotropic") != 0.0,
                                            parameter(p, "spacing"));
         }},
        {"taylor_bar_planar",
         "2D plane-strain copper bar impacting a rigid wall",
         {{"velocity", 227.0}, {"resolution", 10.0}},
         [](const CaseParameters &p) {
             return taylor_bar_case(TaylorGeometry::planar, parameter(p, "velocity"), parameter(p, "resolution"));
         }},
        {"taylor_bar_square",
         "3D square copper bar impacting a rigid wall",
         {{"velocity", 227.0}, {"resolution", 8.0}},
         [](const CaseParameters &p) {
             return taylor_bar_case(TaylorGeometry::square3d, parameter(p, "velocity"), parameter(p, "resolution"));
         }},
        {"taylor_bar_round",
         "3D round aluminium bar impacting a rigid wall",
         {{"velocity", 373.0}, {"resolution", 8.0}},
         [](const CaseParameters &p) {
             return taylor_bar_case(TaylorGeometry::round3d, parameter(p, "velocity"), parameter(p, "resolution"));
         }},
        {"necking_bar",
         "2D plane-strain bar stretched until a neck forms",
         {{"resolution", 20.0}},
         [](const CaseParameters &p) -> AnyCase { return necking_bar_case(parameter(p, "resolution")); }},
    };
    return registry;
}
//=================================================================================================//
const CaseEntry &find_case(const std::string &name)
{
    for (const auto &entry : case_registry())
        if (entry.name == name)
            return entry;
    throw ConfigError("unknown case '" + name + "'");
}
//=================================================================================================//
AnyCase build_case(const std::string &name, const CaseParameters &overrides)
{
    const CaseEntry &entry = find_case(name);
    CaseParameters params = entry.defaults;
    for (const auto &[key, value] : overrides)
    {
        if (params.count(key) == 0)
            throw ConfigError("case '" + name + "' has no parameter '" + key + "'");
        params[key] = value;
    }
    try
    {
        return entry.build(params);
    }
    catch (const ContractViolation &e)
    {
        throw ConfigError(e.what());
    }
}
//=================================================================================================//
template <int Dim>
CaseResult run_case(const CaseDefinition<Dim> &def, const RunOptions &options)
{
    ParticleSet<Dim> set = generate_lattice(def.lattice);
    std::function<Vec<Dim>(const Vec<Dim> &)> velocity = def.initial_velocity;
    if (!velocity)
        velocity = [](const Vec<Dim> &) { return Vec<Dim>::Zero().eval(); };
    apply_initial_velocity<Dim>(set, velocity);
    HourglassParams hg = def.hourglass;
    if (options.hourglass_enabled)
        hg.enabled = *options.hourglass_enabled;
    if (options.alpha)
        hg.alpha = *options.alpha;
    StepControls controls = def.controls;
    if (options.cfl)
        controls.cfl = *options.cfl;
    if (options.end_time)
        controls.end_time = *options.end_time;

    Simulation<Dim> sim(std::move(set), def.materials, hg, controls);
    const ParticleSet<Dim> &particles = sim.particles();
    if (def.wall)
        sim.set_wall(*def.wall);
    if (def.potential)
    {
        std::vector<Real> potential(particles.size(), 0.0);
        for (std::size_t i = 0; i < particles.size(); ++i)
            if (particles.constraint[i] == ConstraintKind::free)
                potential[i] = def.potential(particles.r0[i]);
        sim.set_activation(std::move(potential), def.activation_ramp);
    }

    std::vector<Probe<Dim>> probes;
    CaseResult result;
    result.name = def.name;
    result.references = def.references;
    result.particles = particles.size();
    for (const auto &spec : def.probes)
    {
        probes.emplace_back(spec, particles);
        result.series.columns.push_back(spec.name);
    }
    if (def.track_bond_distance)
        result.series.columns.push_back("min_bond_distance");
    result.series.columns.push_back("kinetic_energy");

    Real running_min_bond = def.track_bond_distance ? sim.min_bond_distance() : 0.0;
    Real interval_min_bond = running_min_bond;
    auto sample = [&] {
        std::vector<Real> row;
        for (const auto &p : probes)
            row.push_back(p.sample(particles));
        if (def.track_bond_distance)
        {
            row.push_back(interval_min_bond);
            interval_min_bond = std::numeric_limits<Real>::infinity();
        }
        row.push_back(sim.kinetic_energy());
        result.series.time.push_back(sim.time());
        result.series.rows.push_back(std::move(row));
    };

    const std::string &dir = options.output_dir;
    int snapshot_index = 0;
    auto snapshot = [&] {
        std::ostringstream name;
        name << def.name << '_' << std::setw(5) << std::setfill('0') << snapshot_index++ << ".vtk";
        write_snapshot(sim, (std::filesystem::path(dir) / name.str()).string());
    };
    const bool snapshots = !dir.empty() && options.snapshot_interval > 0.0;
    const Real probe_interval = options.probe_interval > 0.0 ? options.probe_interval : def.probe_interval;

    sample();
    if (snapshots)
        snapshot();
    Real next_probe = probe_interval;
    Real next_snapshot = options.snapshot_interval;
    Real peak_energy = sim.kinetic_energy();
    Real quiet_since = -1.0;
    while (sim.time() < controls.end_time)
    {
        sim.step();
        if (def.track_bond_distance)
        {
            const Real d = sim.min_bond_distance();
            running_min_bond = std::min(running_min_bond, d);
            interval_min_bond = std::min(interval_min_bond, d);
        }
        const Real t = sim.time();
        if (t >= next_probe)
        {
            sample();
            while (next_probe <= t)
                next_probe += probe_interval;
        }
        if (snapshots && t >= next_snapshot)
        {
            snapshot();
            while (next_snapshot <= t)
                next_snapshot += options.snapshot_interval;
        }
        if (options.progress)
            options.progress(t, sim.step_count());
        if (def.steady_state.enabled)
        {
            const Real energy = sim.kinetic_energy();
            peak_energy = std::max(peak_energy, energy);
            if (t >= def.steady_state.min_time && energy < def.steady_state.threshold * peak_energy)
            {
                if (quiet_since < 0.0)
                    quiet_since = t;
                if (t - quiet_since >= def.steady_state.hold_time)
                    break;
            }
            else
                quiet_since = -1.0;
        }
    }
    if (result.series.time.back() < sim.time())
        sample();
    if (snapshots)
        snapshot();

    result.steps = sim.step_count();
    result.end_time = sim.time();
    if (def.summarize)
        def.summarize(result.series, result.measured);
    if (def.track_bond_distance)
        result.measured["min_bond_distance"] = running_min_bond;
    result.measured["steady_state_reached"] = quiet_since >= 0.0 ? 1.0 : 0.0;
    if (!dir.empty())
        write_probe(result.series, (std::filesystem::path(dir) / (def.name + "_probes.csv")).string());
    return result;
}
//=================================================================================================//
CaseResult run_case(const AnyCase &definition, const RunOptions &options)
{
    return std::visit([&](const auto &def) { return run_case(def, options); }, definition);
}
//=================================================================================================//
std::vector<std::string> failed_references(const CaseResult &result)
{
    std::vector<std::string> failed;
    for (const auto &ref : result.references)
    {
        const auto it = result.measured.find(ref.quantity);
        if (it == result.measured.end() || !(std::abs(it->second - ref.value) <= ref.tolerance * std::abs(ref.value)))
            failed.push_back(ref.quantity);
    }
    return failed;
}
//=================================================================================================//
template CaseResult run_case(const CaseDefinition<2> &, const RunOptions &);
template CaseResult run_case(const CaseDefinition<3> &, const RunOptions &);
//=================================================================================================//
} // namespace tlsph
