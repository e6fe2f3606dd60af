#include "tlsph/io.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace tlsph;
namespace fs = std::filesystem;

namespace
{
fs::path scratch(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / "tlsph_io_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string read_file(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path &path, const std::string &text)
{
    std::ofstream out(path);
    out << text;
}

int run_cli(const std::string &arguments, const fs::path &log)
{
    const std::string command = std::string("\"") + TLSPH_CLI_PATH + "\" " + arguments + " > \"" + log.string() +
                                "\" 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream s(line);
    std::string cell;
    while (std::getline(s, cell, ','))
        out.push_back(cell);
    return out;
}

std::string config_text(const fs::path &dir, const std::string &body)
{
    return "case = oscillating_plate\noutput_dir = " + dir.string() + "\n" + body;
}
} // namespace

TEST_SUITE("io")
{
    TEST_CASE("empty document takes every default")
    {
        const RunConfig c = parse_config("", "oscillating_plate");
        CHECK(c.case_name == "oscillating_plate");
        CHECK(c.overrides.empty());
        CHECK(c.hourglass_enabled);
        CHECK(c.alpha == 8.0);
        CHECK_FALSE(c.cfl.has_value());
        CHECK_FALSE(c.end_time.has_value());
        CHECK_THROWS_AS(parse_config(""), ConfigError);
    }

    TEST_CASE("configuration keys and parameters")
    {
        const RunConfig c = parse_config("# baseline comparison\n"
                                         "case = oscillating_plate\n"
                                         "hourglass_enabled = false\n"
                                         "alpha = 4.0   # weaker\n"
                                         "cfl = 0.3\n"
                                         "end_time = 0.5\n"
                                         "probe_interval = 1e-3\n"
                                         "[parameters]\n"
                                         "nu = 0.3\n"
                                         "resolution = 20\n");
        CHECK_FALSE(c.hourglass_enabled);
        CHECK(c.alpha == 4.0);
        CHECK(*c.cfl == 0.3);
        CHECK(*c.end_time == 0.5);
        CHECK(c.probe_interval == 1.0e-3);
        CHECK(c.overrides.at("nu") == 0.3);
        CHECK(c.overrides.at("resolution") == 20.0);
        const RunOptions o = c.options();
        CHECK(*o.hourglass_enabled == false);
        CHECK(*o.alpha == 4.0);
    }

    TEST_CASE("configuration errors name the line")
    {
        auto message = [](const std::string &text) {
            try
            {
                parse_config(text);
            }
            catch (const ConfigError &e)
            {
                return std::string(e.what());
            }
            return std::string();
        };
        CHECK(message("case = oscillating_plate\nspeed = 3\n").find("line 2") != std::string::npos);
        CHECK(message("case = oscillating_plate\nalpha = fast\n").find("line 2") != std::string::npos);
        CHECK(message("case = oscillating_plate\n\ncfl = 2\n").find("line 3") != std::string::npos);
        CHECK(message("case = oscillating_plate\nalpha = -1\n").find("line 2") != std::string::npos);
        CHECK(message("case = oscillating_plate\nhourglass_enabled = maybe\n").find("line 2") != std::string::npos);
        CHECK(message("case = oscillating_plate\n[physics]\n").find("line 2") != std::string::npos);
        CHECK(message("case = oscillating_plate\n[parameters]\nomega = 3\n").find("line 3") != std::string::npos);
        CHECK(message("case = oscillating_plate\njust words\n").find("line 2") != std::string::npos);
        CHECK(!message("case = nonexistent\n").empty());
        CHECK_THROWS_AS(load_config("/nonexistent/config.txt"), ConfigError);
    }

    TEST_CASE("von Mises measures")
    {
        Mat3 uniaxial = Mat3::Zero();
        uniaxial(0, 0) = 5.0;
        CHECK(von_mises_stress<3>(uniaxial, 1.0) == doctest::Approx(5.0));
        CHECK(von_mises_stress<3>(2.0 * uniaxial, 2.0) == doctest::Approx(5.0));
        CHECK(von_mises_stress<3>(7.0 * Mat3::Identity(), 1.0) == doctest::Approx(0.0));
        CHECK(von_mises_strain<3>(Mat3::Identity()) == 0.0);
        CHECK(von_mises_strain<2>(Mat2::Identity()) == 0.0);
    }

    TEST_CASE("snapshot schema and round trip")
    {
        const fs::path dir = scratch("snapshot");
        ParticleSet<2> set = oracle::free_box<2>(5, 0.01);
        for (std::size_t i = 0; i < set.size(); ++i)
            set.r[i] = set.r0[i] + Vec2(oracle::uniform(-1e-3, 1e-3), oracle::uniform(-1e-3, 1e-3));
        set.r0 = set.r;
        Simulation<2> sim(set, {NeoHookeanModel{ElasticParams::from_young(1000.0, 1.0e6, 0.3)}}, {}, {});
        const fs::path vtk = dir / "state_00000.vtk";
        write_snapshot(sim, vtk.string());
        CHECK(fs::exists(vtk));
        const std::string vtk_text = read_file(vtk);
        CHECK(vtk_text.rfind("# vtk DataFile Version 3.0", 0) == 0);
        CHECK(vtk_text.find("POINTS 25 double") != std::string::npos);
        CHECK(vtk_text.find("SCALARS von_mises_stress double 1") != std::string::npos);

        std::ifstream csv(dir / "state_00000.csv");
        std::string line;
        std::getline(csv, line);
        CHECK(line == kSnapshotColumns);
        const std::size_t columns = split(line).size();
        CHECK(columns == 10);
        std::size_t row = 0;
        while (std::getline(csv, line))
        {
            const auto cells = split(line);
            REQUIRE(cells.size() == columns);
            CHECK(std::stod(cells[0]) == sim.particles().r[row][0]);
            CHECK(std::stod(cells[1]) == sim.particles().r[row][1]);
            CHECK(std::stod(cells[2]) == 0.0);
            CHECK(std::stod(cells[6]) == 0.0);
            ++row;
        }
        CHECK(row == set.size());
        for (const auto &entry : fs::directory_iterator(dir))
            CHECK(entry.path().extension() != ".tmp");
        CHECK_THROWS(write_snapshot(sim, "/proc/tlsph/cannot/state.vtk"));
    }

    TEST_CASE("probe files")
    {
        const fs::path dir = scratch("probe");
        ProbeSeries series;
        series.columns = {"a", "b"};
        write_probe(series, (dir / "empty.csv").string());
        CHECK(read_file(dir / "empty.csv") == "time,a,b\n");

        series.time = {0.0, 0.5};
        series.rows = {{1.0, 2.0}, {0.1, 1.0 / 3.0}};
        write_probe(series, (dir / "values.csv").string());
        std::ifstream in(dir / "values.csv");
        std::string line;
        std::getline(in, line);
        std::getline(in, line);
        std::getline(in, line);
        CHECK(std::stod(split(line)[2]) == 1.0 / 3.0);

        series.time = {0.0, 0.0};
        CHECK_THROWS_AS(write_probe(series, (dir / "bad.csv").string()), ContractViolation);
    }

    TEST_CASE("command line exit codes")
    {
        const fs::path dir = scratch("cli");
        const fs::path log = dir / "log.txt";

        CHECK(run_cli("list", log) == 0);
        const std::string listing = read_file(log);
        CHECK(listing.find("oscillating_plate") != std::string::npos);
        CHECK(listing.find("0.4988") != std::string::npos);

        CHECK(run_cli("", log) == 1);
        CHECK(run_cli("frobnicate", log) == 1);
        CHECK(run_cli("run", log) == 1);

        write_file(dir / "bad.cfg", "case = oscillating_plate\nspeed = 2\n");
        CHECK(run_cli("run " + (dir / "bad.cfg").string(), log) == 2);
        CHECK(run_cli("run " + (dir / "missing.cfg").string(), log) == 2);

        write_file(dir / "explode.cfg", config_text(dir, "end_time = 0.05\n[parameters]\nvf = 40\nresolution = 4\n"));
        CHECK(run_cli("run " + (dir / "explode.cfg").string(), log) == 3);

        write_file(dir / "short.cfg", config_text(dir, "end_time = 0.01\n[parameters]\nresolution = 4\n"));
        CHECK(run_cli("run " + (dir / "short.cfg").string(), log) == 0);
        CHECK(fs::exists(dir / "oscillating_plate_probes.csv"));
        CHECK(run_cli("check " + (dir / "short.cfg").string(), log) == 4);

        write_file(dir / "plate.cfg", config_text(dir, "[parameters]\nresolution = 10\n"));
        CHECK(run_cli("check " + (dir / "plate.cfg").string(), log) == 0);
        CHECK(read_file(log).find("PASS period") != std::string::npos);
    }

    TEST_CASE("command line output does not depend on the thread count")
    {
        const fs::path one = scratch("threads1"), three = scratch("threads3");
        write_file(one / "run.cfg", config_text(one, "end_time = 0.03\n[parameters]\nresolution = 6\n"));
        write_file(three / "run.cfg", config_text(three, "end_time = 0.03\n[parameters]\nresolution = 6\n"));
        REQUIRE(run_cli("--threads 1 run " + (one / "run.cfg").string(), one / "log.txt") == 0);
        REQUIRE(run_cli("--threads 3 run " + (three / "run.cfg").string(), three / "log.txt") == 0);
        const std::string a = read_file(one / "oscillating_plate_probes.csv");
        CHECK(!a.empty());
        CHECK(a == read_file(three / "oscillating_plate_probes.csv"));
    }
}
