#pragma once

#include "tlsph/probes.hpp"
#include "tlsph/solver.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace tlsph
{
/// A reference value with the relative tolerance used by `check`.
struct Reference
{
    std::string quantity;
    Real value = 0.0;
    Real tolerance = 0.0;
    std::string note;
};

/// Stop once kinetic energy stays below `threshold` of its peak for `hold_time`, after `min_time`.
struct SteadyState
{
    bool enabled = false;
    Real threshold = 1.0e-6;
    Real hold_time = 0.0;
    Real min_time = 0.0;
};

using Measurements = std::map<std::string, Real>;

template <int Dim>
struct CaseDefinition
{
    std::string name;
    LatticeSpec<Dim> lattice;
    std::vector<MaterialModel> materials;
    std::function<Vec<Dim>(const Vec<Dim> &)> initial_velocity;
    std::function<Real(const Vec<Dim> &)> potential; ///< transmembrane potential on free particles
    Real activation_ramp = 0.0;
    std::optional<WallContact<Dim>> wall;
    HourglassParams hourglass;
    StepControls controls;
    std::vector<ProbeSpec<Dim>> probes;
    Real probe_interval = 0.0;
    SteadyState steady_state;
    bool track_bond_distance = false;
    std::vector<Reference> references;
    /// Turns the probe series into named scalar results.
    std::function<void(const ProbeSeries &, Measurements &)> summarize;
};

using AnyCase = std::variant<CaseDefinition<2>, CaseDefinition<3>>;

/** Clamped-free beam mode shape with k the first-mode wavenumber. */
Real plate_mode_shape(Real x, Real k, Real L);
/** Thin-plate first-mode period with omega^2 = E H^2 k^4 / (12 rho (1 - nu^2)), kL = 1.875. */
Real plate_theory_period(Real L, Real H, Real nu, Real youngs_modulus, Real density);

CaseDefinition<2> oscillating_plate_case(Real vf, Real nu, Real L, Real H, Real dp_ratio);

enum class ColumnMaterial
{
    neo_hookean,
    holzapfel_ogden
};

CaseDefinition<3> bending_column_case(Real v0_magnitude, ColumnMaterial material, Real anisotropy_ratio,
                                      Real dp_ratio);
CaseDefinition<3> twisting_column_case(Real omega0, Real nu, Real anisotropy_ratio, Real dp_ratio);
CaseDefinition<3> muscle_contraction_case(Real Vm_top, bool anisotropic, Real dp);

enum class TaylorGeometry
{
    planar,
    square3d,
    round3d
};

/** resolution is H/dp for the planar and square bars and R/dp for the round bar. */
AnyCase taylor_bar_case(TaylorGeometry geometry, Real v0, Real resolution);
CaseDefinition<2> necking_bar_case(Real dp_ratio);

/** Plane-strain limit load (2 / sqrt(3)) tau_y H_min per unit thickness of the necking bar. */
Real necking_limit_load();

using CaseParameters = std::map<std::string, Real>;

struct CaseEntry
{
    std::string name;
    std::string description;
    CaseParameters defaults;
    std::function<AnyCase(const CaseParameters &)> build;
};

const std::vector<CaseEntry> &case_registry();
const CaseEntry &find_case(const std::string &name);
/** Builds a registered case, rejecting parameter names it does not know. */
AnyCase build_case(const std::string &name, const CaseParameters &overrides);

struct RunOptions
{
    std::optional<bool> hourglass_enabled;
    std::optional<Real> alpha;
    std::optional<Real> cfl;
    std::optional<Real> end_time;
    std::string output_dir; ///< empty: no files
    Real snapshot_interval = 0.0;
    Real probe_interval = 0.0; ///< 0 keeps the case default
    std::function<void(Real time, std::size_t steps)> progress;
};

struct CaseResult
{
    std::string name;
    ProbeSeries series;
    Measurements measured;
    std::vector<Reference> references;
    std::size_t particles = 0;
    std::size_t steps = 0;
    Real end_time = 0.0;
};

template <int Dim>
CaseResult run_case(const CaseDefinition<Dim> &definition, const RunOptions &options);
CaseResult run_case(const AnyCase &definition, const RunOptions &options);

/** Names of references whose measurement misses the tolerance (or is missing). */
std::vector<std::string> failed_references(const CaseResult &result);
} // namespace tlsph
