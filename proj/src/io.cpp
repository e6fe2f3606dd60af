#include "tlsph/io.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <locale>
#include <sstream>

namespace tlsph
{
namespace
{
std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

Real parse_real(const std::string &text, int line)
{
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    Real value = 0.0;
    in >> value;
    if (in.fail() || !in.eof() || !std::isfinite(value))
        throw ConfigError("config line " + std::to_string(line) + ": '" + text + "' is not a number");
    return value;
}

bool parse_bool(const std::string &text, int line)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError("config line " + std::to_string(line) + ": '" + text + "' is not a boolean");
}

Real non_negative(Real value, const std::string &key, int line)
{
    if (!(value >= 0.0))
        throw ConfigError("config line " + std::to_string(line) + ": " + key + " must be non-negative");
    return value;
}

void atomic_write(const std::string &path, const std::string &content)
{
    const std::filesystem::path target(path);
    if (target.has_parent_path())
        std::filesystem::create_directories(target.parent_path());
    const std::string temporary = path + ".tmp";
    {
        std::ofstream out(temporary, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + temporary + "'");
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write to '" + temporary + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(temporary, target, ec);
    if (ec)
        throw std::runtime_error("cannot rename '" + temporary + "' to '" + path + "': " + ec.message());
}

std::ostringstream precise_stream()
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17);
    return os;
}
} // namespace
//=================================================================================================//
RunOptions RunConfig::options() const
{
    RunOptions o;
    o.hourglass_enabled = hourglass_enabled;
    o.alpha = alpha;
    o.cfl = cfl;
    o.end_time = end_time;
    o.output_dir = output_dir;
    o.snapshot_interval = snapshot_interval;
    o.probe_interval = probe_interval;
    return o;
}
//=================================================================================================//
RunConfig parse_config(const std::string &text, const std::string &case_name)
{
    RunConfig config;
    std::vector<std::pair<std::string, std::pair<std::string, int>>> parameters;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        const std::string content = trim(raw.substr(0, raw.find('#')));
        if (content.empty())
            continue;
        if (content.front() == '[')
        {
            if (content.back() != ']')
                throw ConfigError("config line " + std::to_string(line) + ": malformed section header");
            section = trim(content.substr(1, content.size() - 2));
            if (section != "parameters")
                throw ConfigError("config line " + std::to_string(line) + ": unknown section '" + section + "'");
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line) + ": expected 'key = value'");
        const std::string key = trim(content.substr(0, eq));
        const std::string value = trim(content.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line) + ": empty key or value");

        if (section == "parameters")
        {
            parameters.push_back({key, {value, line}});
            continue;
        }
        if (key == "case")
            config.case_name = value;
        else if (key == "hourglass_enabled")
            config.hourglass_enabled = parse_bool(value, line);
        else if (key == "alpha")
            config.alpha = non_negative(parse_real(value, line), key, line);
        else if (key == "cfl")
        {
            const Real cfl = parse_real(value, line);
            if (!(cfl > 0.0 && cfl <= 1.0))
                throw ConfigError("config line " + std::to_string(line) + ": cfl must lie in (0, 1]");
            config.cfl = cfl;
        }
        else if (key == "end_time")
        {
            const Real t = parse_real(value, line);
            if (!(t > 0.0))
                throw ConfigError("config line " + std::to_string(line) + ": end_time must be positive");
            config.end_time = t;
        }
        else if (key == "output_dir")
            config.output_dir = value;
        else if (key == "snapshot_interval")
            config.snapshot_interval = non_negative(parse_real(value, line), key, line);
        else if (key == "probe_interval")
            config.probe_interval = non_negative(parse_real(value, line), key, line);
        else
            throw ConfigError("config line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
    if (config.case_name.empty())
        config.case_name = case_name;
    if (config.case_name.empty())
        throw ConfigError("config: no case given");

    const CaseEntry *entry = nullptr;
    try
    {
        entry = &find_case(config.case_name);
    }
    catch (const std::exception &e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    for (const auto &[key, value] : parameters)
    {
        if (entry->defaults.count(key) == 0)
            throw ConfigError("config line " + std::to_string(value.second) + ": case '" + config.case_name +
                              "' has no parameter '" + key + "'");
        config.overrides[key] = parse_real(value.first, value.second);
    }
    return config;
}
//=================================================================================================//
RunConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}
//=================================================================================================//
template <int Dim>
Real von_mises_stress(const Mat<Dim> &kirchhoff, Real J)
{
    const Mat<Dim> sigma = kirchhoff / J;
    Mat3 full = Mat3::Zero();
    full.template topLeftCorner<Dim, Dim>() = sigma;
    return std::sqrt(1.5) * deviatoric<3>(full).norm();
}
//=================================================================================================//
template <int Dim>
Real von_mises_strain(const Mat<Dim> &F)
{
    const Mat<Dim> almansi = 0.5 * (Mat<Dim>::Identity() - (F * F.transpose()).inverse());
    Mat3 full = Mat3::Zero();
    full.template topLeftCorner<Dim, Dim>() = almansi;
    return std::sqrt(2.0 / 3.0) * deviatoric<3>(full).norm();
}
//=================================================================================================//
template <int Dim>
void write_snapshot(const Simulation<Dim> &simulation, const std::string &path)
{
    const ParticleSet<Dim> &set = simulation.particles();
    const auto &stress = simulation.stresses();
    const auto &plastic = simulation.plastic_states();
    const std::size_t n = set.size();

    std::vector<std::array<Real, 10>> rows(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        auto &row = rows[i];
        row.fill(0.0);
        for (int a = 0; a < Dim; ++a)
        {
            row[a] = set.r[i][a];
            row[3 + a] = set.vel[i][a];
        }
        row[6] = von_mises_stress<Dim>(stress[i].kirchhoff(), set.F[i].determinant());
        row[7] = von_mises_strain<Dim>(set.F[i]);
        row[8] = plastic[i].xi;
        row[9] = set.material[i];
    }

    auto vtk = precise_stream();
    vtk << "# vtk DataFile Version 3.0\n";
    vtk << "particles t=" << simulation.time() << " columns " << kSnapshotColumns << "\n";
    vtk << "ASCII\nDATASET POLYDATA\nPOINTS " << n << " double\n";
    for (const auto &row : rows)
        vtk << row[0] << ' ' << row[1] << ' ' << row[2] << '\n';
    vtk << "VERTICES " << n << ' ' << 2 * n << '\n';
    for (std::size_t i = 0; i < n; ++i)
        vtk << "1 " << i << '\n';
    vtk << "POINT_DATA " << n << "\nVECTORS velocity double\n";
    for (const auto &row : rows)
        vtk << row[3] << ' ' << row[4] << ' ' << row[5] << '\n';
    const char *scalars[] = {"von_mises_stress", "von_mises_strain", "hardening", "material"};
    for (int s = 0; s < 4; ++s)
    {
        vtk << "SCALARS " << scalars[s] << " double 1\nLOOKUP_TABLE default\n";
        for (const auto &row : rows)
            vtk << row[6 + s] << '\n';
    }
    atomic_write(path, vtk.str());

    auto csv = precise_stream();
    csv << kSnapshotColumns << '\n';
    for (const auto &row : rows)
    {
        for (std::size_t c = 0; c < row.size(); ++c)
            csv << (c ? "," : "") << row[c];
        csv << '\n';
    }
    atomic_write(std::filesystem::path(path).replace_extension(".csv").string(), csv.str());
}
//=================================================================================================//
void write_probe(const ProbeSeries &series, const std::string &path)
{
    auto csv = precise_stream();
    csv << "time";
    for (const auto &c : series.columns)
        csv << ',' << c;
    csv << '\n';
    for (std::size_t k = 0; k < series.time.size(); ++k)
    {
        if (k > 0 && !(series.time[k] > series.time[k - 1]))
            throw ContractViolation("write_probe: times must increase strictly");
        csv << series.time[k];
        for (Real v : series.rows[k])
            csv << ',' << v;
        csv << '\n';
    }
    atomic_write(path, csv.str());
}
//=================================================================================================//
template Real von_mises_stress(const Mat2 &, Real);
template Real von_mises_stress(const Mat3 &, Real);
template Real von_mises_strain(const Mat2 &);
template Real von_mises_strain(const Mat3 &);
template void write_snapshot(const Simulation<2> &, const std::string &);
template void write_snapshot(const Simulation<3> &, const std::string &);
//=================================================================================================//
} // namespace tlsph
