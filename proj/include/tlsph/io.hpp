#pragma once

#include "tlsph/cases.hpp"
#include "tlsph/probes.hpp"
#include "tlsph/solver.hpp"

#include <optional>
#include <string>

namespace tlsph
{
struct RunConfig
{
    std::string case_name;
    CaseParameters overrides;
    bool hourglass_enabled = true;
    Real alpha = 8.0;
    std::optional<Real> cfl; ///< case default when unset
    std::optional<Real> end_time;
    std::string output_dir = "output";
    Real snapshot_interval = 0.0;
    Real probe_interval = 0.0;

    RunOptions options() const;
};

/**
 * Parses `key = value` lines. Top-level keys: case, hourglass_enabled, alpha, cfl,
 * end_time, output_dir, snapshot_interval, probe_interval. Case parameters go in a
 * [parameters] section. '#' starts a comment. Throws ConfigError with the line number.
 * A non-empty `case_name` takes effect when the document names no case.
 */
RunConfig parse_config(const std::string &text, const std::string &case_name = "");
RunConfig load_config(const std::string &path);

/// Per-particle columns shared by the VTK and CSV snapshot files.
inline constexpr const char *kSnapshotColumns =
    "x,y,z,vx,vy,vz,von_mises_stress,von_mises_strain,hardening,material";

/** Writes `path` (legacy VTK points) and the CSV mirror beside it (extension .csv). */
template <int Dim>
void write_snapshot(const Simulation<Dim> &simulation, const std::string &path);

/** CSV of time and probe columns, written through a temporary file and renamed. */
void write_probe(const ProbeSeries &series, const std::string &path);

/** Cauchy von Mises stress sqrt(3/2) |dev(tau / J)|. */
template <int Dim>
Real von_mises_stress(const Mat<Dim> &kirchhoff, Real J);
/** sqrt(2/3) |dev(e)| of the Almansi strain e = (I - b^-1) / 2. */
template <int Dim>
Real von_mises_strain(const Mat<Dim> &F);
} // namespace tlsph
