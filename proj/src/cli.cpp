#include "tlsph/cli.hpp"
#include "tlsph/cases.hpp"
#include "tlsph/io.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <iomanip>
#include <iostream>

namespace tlsph
{
namespace
{
void print_measurements(const CaseResult &result)
{
    std::cout << result.name << ": " << result.particles << " particles, " << result.steps << " steps, t = "
              << result.end_time << "\n";
    for (const auto &[key, value] : result.measured)
        std::cout << "  " << key << " = " << std::setprecision(10) << value << "\n";
}

int list_cases()
{
    for (const auto &entry : case_registry())
    {
        std::cout << entry.name << "  " << entry.description << "\n";
        for (const auto &[key, value] : entry.defaults)
            std::cout << "    " << key << " = " << value << "\n";
        const AnyCase definition = entry.build(entry.defaults);
        const auto &references =
            std::visit([](const auto &def) -> const std::vector<Reference> & { return def.references; }, definition);
        for (const auto &ref : references)
            std::cout << "    reference " << ref.quantity << " = " << std::setprecision(10) << ref.value << " (+-"
                      << 100.0 * ref.tolerance << "%, " << ref.note << ")\n";
    }
    return exit_success;
}

int run_config(const std::string &path, bool check)
{
    const RunConfig config = load_config(path);
    const AnyCase definition = build_case(config.case_name, config.overrides);
    RunOptions options = config.options();
    const CaseResult result = run_case(definition, options);
    print_measurements(result);
    if (!check)
        return exit_success;
    if (result.references.empty())
    {
        std::cout << "no reference values for this configuration\n";
        return exit_success;
    }
    const auto failed = failed_references(result);
    for (const auto &ref : result.references)
    {
        const bool ok = std::find(failed.begin(), failed.end(), ref.quantity) == failed.end();
        std::cout << (ok ? "PASS " : "FAIL ") << ref.quantity << " reference " << ref.value << " +-"
                  << 100.0 * ref.tolerance << "%\n";
    }
    return failed.empty() ? exit_success : exit_tolerance;
}
} // namespace
//=================================================================================================//
int cli_main(int argc, char **argv)
{
    CLI::App app{"Total-Lagrangian SPH solid dynamics with hourglass control"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    std::string config_path;
    auto *run = app.add_subcommand("run", "run a case from a configuration file");
    run->add_option("config", config_path, "configuration file")->required();
    auto *check = app.add_subcommand("check", "run a case and compare against its reference values");
    check->add_option("config", config_path, "configuration file")->required();
    auto *list = app.add_subcommand("list", "list the available cases");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_success : exit_usage;
    }
    if (threads > 0)
        omp_set_num_threads(threads);

    try
    {
        if (list->parsed())
            return list_cases();
        return run_config(config_path, check->parsed());
    }
    catch (const ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const ContractViolation &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const NumericalFailure &e)
    {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }
    catch (const GeometryError &e)
    {
        std::cerr << "geometry error: " << e.what() << "\n";
        return exit_config;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
}
} // namespace tlsph
