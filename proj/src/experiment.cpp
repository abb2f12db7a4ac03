// SPDX-License-Identifier: Apache-2.0
//
// riskg - simulation library for RIS-assisted physical-layer key generation
// over spatially correlated multi-antenna channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "riskg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "riskg/parallel.hpp"
#include "riskg/version.hpp"

namespace riskg {

namespace {

using nlohmann::json;

constexpr std::uint64_t kVStreamBase = 1ull << 32;
constexpr std::uint64_t kMcSaltSalt = 0x6D63; // "mc"

const char* const kCsvHeader =
    "experiment,sweep_index,scheme,p_dbm,bs_h,bs_v,m,rho,ris_h,ris_v,n,spacing_wl,"
    "kgr_bits,kgr_std_bits,mc_ref_bits,mc_estimate_bits,mc_stderr_bits,"
    "x_watts,q_watts,t,f_lower_watts,f_upper_watts,trials,draws,seed,version";

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const char* what)
{
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw std::runtime_error(std::string("failed to parse number for ") + what + ": '" +
                                 field + "'");
    return value;
}

long long parse_int(const std::string& field, const char* what)
{
    long long value = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw std::runtime_error(std::string("failed to parse integer for ") + what + ": '" +
                                 field + "'");
    return value;
}

struct SweepPoint
{
    SystemConfig config;
    int index = 0;
};

std::vector<SweepPoint> materialize_points(const ExperimentSpec& spec)
{
    std::vector<SweepPoint> points;
    int index = 0;
    switch (spec.sweep_kind)
    {
    case SweepKind::PowerDbm:
        for (double p : spec.power_dbm)
        {
            SweepPoint point{spec.base, index++};
            point.config.set_power_dbm(p);
            points.push_back(std::move(point));
        }
        break;
    case SweepKind::RisElements:
        for (const GridShape& grid : spec.ris_sweep.grids)
            for (double spacing : spec.ris_sweep.spacings_wl)
            {
                SweepPoint point{spec.base, index++};
                point.config.ris_layout.grid = grid;
                point.config.ris_layout.spacing_m =
                    spacing * point.config.ris_layout.wavelength_m;
                points.push_back(std::move(point));
            }
        break;
    case SweepKind::BsAntennas:
        for (const GridShape& grid : spec.bs_sweep.grids)
            for (double rho : spec.bs_sweep.rhos)
            {
                SweepPoint point{spec.base, index++};
                point.config.bs_grid = grid;
                point.config.rho = rho;
                points.push_back(std::move(point));
            }
        break;
    }
    return points;
}

ResultRow evaluate_cell(const ExperimentSpec& spec, const SweepPoint& point, Scheme scheme,
                        std::uint64_t job_seed)
{
    const SystemConfig& cfg = point.config;
    const CorrelationMatrix r_s = upa_correlation(cfg.bs_grid, cfg.rho);
    const CorrelationMatrix r_i = ris_sinc_correlation(cfg.ris_layout);
    PathLossSet pl = path_losses(cfg.geometry, cfg.pathloss_convention);
    if (scheme == Scheme::NoRisOptimalW)
        pl = pl.without_ris();

    ResultRow row;
    row.experiment = spec.name;
    row.sweep_index = point.index;
    row.scheme = scheme_name(scheme);
    row.p_dbm = watts_to_dbm(cfg.p_a);
    row.bs_h = cfg.bs_grid.horizontal;
    row.bs_v = cfg.bs_grid.vertical;
    row.m = cfg.bs_antennas();
    row.rho = cfg.rho;
    row.ris_h = cfg.ris_layout.grid.horizontal;
    row.ris_v = cfg.ris_layout.grid.vertical;
    row.n = cfg.ris_elements();
    row.spacing_wl = cfg.ris_layout.spacing_wavelengths();
    row.trials = spec.trials;
    row.seed = spec.seed;
    row.version = kVersionString;

    const BoundsReport bounds = lemma2_bounds(cfg.bs_grid, cfg.rho, cfg.p_a);
    row.f_lower_watts = bounds.f_lower;
    row.f_upper_watts = bounds.f_upper;

    const bool w_random = scheme == Scheme::RandomBoth || scheme == Scheme::RandomWOptimalV ||
                          scheme == Scheme::IidAssumption;
    const bool v_random = scheme == Scheme::RandomBoth || scheme == Scheme::OptimalWRandomV ||
                          scheme == Scheme::IidAssumption;
    const int draws = (w_random || v_random) ? spec.random_draws : 1;
    row.draws = draws;

    Eigen::VectorXcd w_fixed;
    Eigen::VectorXcd v_fixed;
    if (!w_random)
        w_fixed = optimal_transmit(r_s, cfg.p_a);
    if (!v_random)
        v_fixed = optimal_reflection(cfg.ris_elements());

    Beamformers representative;
    std::vector<double> kgr_values(draws);
    double x_sum = 0.0;
    double q_sum = 0.0;
    double t_sum = 0.0;
    for (int d = 0; d < draws; ++d)
    {
        Beamformers bf;
        if (w_random)
        {
            Philox4x32 rng = substream(job_seed, static_cast<std::uint64_t>(d));
            bf.w = random_transmit(cfg.bs_antennas(), cfg.p_a, rng);
        }
        else
        {
            bf.w = w_fixed;
        }
        if (v_random)
        {
            Philox4x32 rng = substream(job_seed, kVStreamBase + static_cast<std::uint64_t>(d));
            bf.v = random_reflection(cfg.ris_elements(), rng);
        }
        else
        {
            bf.v = v_fixed;
        }

        const KgrReport report = kgr_closed_form(r_s, r_i, bf, pl, cfg);
        kgr_values[d] = report.kgr_bits;
        x_sum += report.x;
        q_sum += report.q;
        t_sum += report.t;
        if (d == 0)
        {
            representative = bf;
            row.mc_ref_bits = report.kgr_bits;
        }
    }

    double mean = 0.0;
    for (double value : kgr_values)
        mean += value;
    mean /= draws;
    row.kgr_bits = mean;
    if (draws > 1)
    {
        double var = 0.0;
        for (double value : kgr_values)
            var += (value - mean) * (value - mean);
        row.kgr_std_bits = std::sqrt(var / (draws - 1));
    }
    row.x_watts = x_sum / draws;
    row.q_watts = q_sum / draws;
    row.t = t_sum / draws;

    if (spec.trials > 0)
    {
        const McEstimate mc = kgr_monte_carlo(cfg, r_s, r_i, representative, pl, spec.trials,
                                              derive_seed(job_seed, kMcSaltSalt));
        row.mc_estimate_bits = mc.kgr_bits;
        row.mc_stderr_bits = mc.stderr_bits;
    }
    return row;
}

std::string optional_to_string(const std::optional<double>& value)
{
    return value ? format_double(*value) : std::string();
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    for (;;)
    {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos)
        {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

json row_to_json(const ResultRow& row)
{
    json j;
    j["experiment"] = row.experiment;
    j["sweep_index"] = row.sweep_index;
    j["scheme"] = row.scheme;
    j["p_dbm"] = row.p_dbm;
    j["bs_h"] = row.bs_h;
    j["bs_v"] = row.bs_v;
    j["m"] = row.m;
    j["rho"] = row.rho;
    j["ris_h"] = row.ris_h;
    j["ris_v"] = row.ris_v;
    j["n"] = row.n;
    j["spacing_wl"] = row.spacing_wl;
    j["kgr_bits"] = row.kgr_bits;
    j["kgr_std_bits"] = row.kgr_std_bits;
    j["mc_ref_bits"] = row.mc_ref_bits;
    j["mc_estimate_bits"] = row.mc_estimate_bits ? json(*row.mc_estimate_bits) : json();
    j["mc_stderr_bits"] = row.mc_stderr_bits ? json(*row.mc_stderr_bits) : json();
    j["x_watts"] = row.x_watts;
    j["q_watts"] = row.q_watts;
    j["t"] = row.t;
    j["f_lower_watts"] = row.f_lower_watts;
    j["f_upper_watts"] = row.f_upper_watts;
    j["trials"] = row.trials;
    j["draws"] = row.draws;
    j["seed"] = row.seed;
    j["version"] = row.version;
    return j;
}

ResultRow row_from_json(const json& j)
{
    ResultRow row;
    row.experiment = j.at("experiment").get<std::string>();
    row.sweep_index = j.at("sweep_index").get<int>();
    row.scheme = j.at("scheme").get<std::string>();
    row.p_dbm = j.at("p_dbm").get<double>();
    row.bs_h = j.at("bs_h").get<int>();
    row.bs_v = j.at("bs_v").get<int>();
    row.m = j.at("m").get<int>();
    row.rho = j.at("rho").get<double>();
    row.ris_h = j.at("ris_h").get<int>();
    row.ris_v = j.at("ris_v").get<int>();
    row.n = j.at("n").get<int>();
    row.spacing_wl = j.at("spacing_wl").get<double>();
    row.kgr_bits = j.at("kgr_bits").get<double>();
    row.kgr_std_bits = j.at("kgr_std_bits").get<double>();
    row.mc_ref_bits = j.at("mc_ref_bits").get<double>();
    if (!j.at("mc_estimate_bits").is_null())
        row.mc_estimate_bits = j.at("mc_estimate_bits").get<double>();
    if (!j.at("mc_stderr_bits").is_null())
        row.mc_stderr_bits = j.at("mc_stderr_bits").get<double>();
    row.x_watts = j.at("x_watts").get<double>();
    row.q_watts = j.at("q_watts").get<double>();
    row.t = j.at("t").get<double>();
    row.f_lower_watts = j.at("f_lower_watts").get<double>();
    row.f_upper_watts = j.at("f_upper_watts").get<double>();
    row.trials = j.at("trials").get<std::size_t>();
    row.draws = j.at("draws").get<int>();
    row.seed = j.at("seed").get<std::uint64_t>();
    row.version = j.at("version").get<std::string>();
    return row;
}

GridShape grid_from_json(const json& j, const char* key)
{
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error(std::string("key '") + key +
                                 "' must be a [horizontal, vertical] pair");
    return {j[0].get<int>(), j[1].get<int>()};
}

Eigen::Vector2d position_from_json(const json& j, const char* key)
{
    if (!j.is_array() || j.size() != 2)
        throw std::runtime_error(std::string("key '") + key + "' must be an [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

SystemConfig config_from_json(const json& j)
{
    SystemConfig cfg;
    if (j.contains("bs_grid"))
        cfg.bs_grid = grid_from_json(j.at("bs_grid"), "bs_grid");
    if (j.contains("rho"))
        cfg.rho = j.at("rho").get<double>();
    if (j.contains("ris_grid"))
        cfg.ris_layout.grid = grid_from_json(j.at("ris_grid"), "ris_grid");
    if (j.contains("wavelength_m"))
        cfg.ris_layout.wavelength_m = j.at("wavelength_m").get<double>();
    if (j.contains("ris_spacing_wavelengths"))
        cfg.ris_layout.spacing_m =
            j.at("ris_spacing_wavelengths").get<double>() * cfg.ris_layout.wavelength_m;
    if (j.contains("power_dbm"))
        cfg.set_power_dbm(j.at("power_dbm").get<double>());
    if (j.contains("p_a_dbm"))
        cfg.p_a = dbm_to_watts(j.at("p_a_dbm").get<double>());
    if (j.contains("p_b_dbm"))
        cfg.p_b = dbm_to_watts(j.at("p_b_dbm").get<double>());
    if (j.contains("sigma2_dbm"))
        cfg.sigma2 = dbm_to_watts(j.at("sigma2_dbm").get<double>());
    if (j.contains("zeta0_db"))
        cfg.geometry.zeta0 = db_to_linear(j.at("zeta0_db").get<double>());
    if (j.contains("alice_pos_m"))
        cfg.geometry.alice_pos = position_from_json(j.at("alice_pos_m"), "alice_pos_m");
    if (j.contains("bob_pos_m"))
        cfg.geometry.bob_pos = position_from_json(j.at("bob_pos_m"), "bob_pos_m");
    if (j.contains("ris_pos_m"))
        cfg.geometry.ris_pos = position_from_json(j.at("ris_pos_m"), "ris_pos_m");
    if (j.contains("alpha_ba"))
        cfg.geometry.alpha_ba = j.at("alpha_ba").get<double>();
    if (j.contains("alpha_ar"))
        cfg.geometry.alpha_ar = j.at("alpha_ar").get<double>();
    if (j.contains("alpha_br"))
        cfg.geometry.alpha_br = j.at("alpha_br").get<double>();
    if (j.contains("pathloss_convention"))
    {
        const std::string conv = j.at("pathloss_convention").get<std::string>();
        if (conv == "paper")
            cfg.pathloss_convention = PathLossConvention::Paper;
        else if (conv == "conventional")
            cfg.pathloss_convention = PathLossConvention::Conventional;
        else
            throw std::runtime_error("key 'pathloss_convention' must be 'paper' or 'conventional'");
    }
    if (j.contains("eve"))
    {
        const json& e = j.at("eve");
        cfg.geometry.eve_pos = position_from_json(e.at("pos_m"), "eve.pos_m");
        cfg.eve_antennas = e.at("antennas").get<int>();
        cfg.sample_eve = true;
        if (e.contains("sigma2_dbm"))
            cfg.sigma_e2 = dbm_to_watts(e.at("sigma2_dbm").get<double>());
    }
    return cfg;
}

json config_to_json(const SystemConfig& cfg)
{
    json j;
    j["bs_grid"] = {cfg.bs_grid.horizontal, cfg.bs_grid.vertical};
    j["rho"] = cfg.rho;
    j["ris_grid"] = {cfg.ris_layout.grid.horizontal, cfg.ris_layout.grid.vertical};
    j["ris_spacing_wavelengths"] = cfg.ris_layout.spacing_wavelengths();
    j["wavelength_m"] = cfg.ris_layout.wavelength_m;
    if (cfg.p_a == cfg.p_b)
    {
        j["power_dbm"] = watts_to_dbm(cfg.p_a);
    }
    else
    {
        j["p_a_dbm"] = watts_to_dbm(cfg.p_a);
        j["p_b_dbm"] = watts_to_dbm(cfg.p_b);
    }
    j["sigma2_dbm"] = watts_to_dbm(cfg.sigma2);
    j["zeta0_db"] = 10.0 * std::log10(cfg.geometry.zeta0);
    j["alice_pos_m"] = {cfg.geometry.alice_pos.x(), cfg.geometry.alice_pos.y()};
    j["bob_pos_m"] = {cfg.geometry.bob_pos.x(), cfg.geometry.bob_pos.y()};
    j["ris_pos_m"] = {cfg.geometry.ris_pos.x(), cfg.geometry.ris_pos.y()};
    j["alpha_ba"] = cfg.geometry.alpha_ba;
    j["alpha_ar"] = cfg.geometry.alpha_ar;
    j["alpha_br"] = cfg.geometry.alpha_br;
    j["pathloss_convention"] =
        cfg.pathloss_convention == PathLossConvention::Paper ? "paper" : "conventional";
    if (cfg.sample_eve && cfg.geometry.eve_pos)
    {
        j["eve"] = {{"pos_m", {cfg.geometry.eve_pos->x(), cfg.geometry.eve_pos->y()}},
                    {"antennas", cfg.eve_antennas},
                    {"sigma2_dbm", watts_to_dbm(cfg.sigma_e2)}};
    }
    return j;
}

} // namespace

std::string scheme_name(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::OptimalBoth: return "optimal_both";
    case Scheme::RandomBoth: return "random_both";
    case Scheme::OptimalWRandomV: return "optimal_w_random_v";
    case Scheme::RandomWOptimalV: return "random_w_optimal_v";
    case Scheme::NoRisOptimalW: return "no_ris_optimal_w";
    case Scheme::IidAssumption: return "iid_assumption";
    }
    return "unknown";
}

Scheme scheme_from_string(const std::string& name)
{
    for (Scheme scheme : {Scheme::OptimalBoth, Scheme::RandomBoth, Scheme::OptimalWRandomV,
                          Scheme::RandomWOptimalV, Scheme::NoRisOptimalW, Scheme::IidAssumption})
    {
        if (scheme_name(scheme) == name)
            return scheme;
    }
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

OutputFormat format_from_string(const std::string& name)
{
    if (name == "csv")
        return OutputFormat::Csv;
    if (name == "jsonl" || name == "json-lines")
        return OutputFormat::JsonLines;
    throw std::invalid_argument("unknown output format '" + name + "' (expected csv or jsonl)");
}

void ExperimentSpec::validate() const
{
    base.validate();
    if (schemes.empty())
        throw std::invalid_argument("experiment needs at least one scheme");
    if (random_draws < 1)
        throw std::invalid_argument("random_draws must be at least 1");
    if (trials != 0 && trials < 10000)
        throw std::invalid_argument("trials must be 0 (off) or at least 10^4");
    switch (sweep_kind)
    {
    case SweepKind::PowerDbm:
        if (power_dbm.empty())
            throw std::invalid_argument("power sweep must list at least one value");
        break;
    case SweepKind::RisElements:
        if (ris_sweep.grids.empty() || ris_sweep.spacings_wl.empty())
            throw std::invalid_argument("RIS sweep must list grids and spacings");
        for (const GridShape& g : ris_sweep.grids)
            g.validate();
        for (double s : ris_sweep.spacings_wl)
            if (!(s > 0.0))
                throw std::invalid_argument("RIS spacings must be positive");
        break;
    case SweepKind::BsAntennas:
        if (bs_sweep.grids.empty() || bs_sweep.rhos.empty())
            throw std::invalid_argument("BS sweep must list grids and correlation indices");
        for (const GridShape& g : bs_sweep.grids)
            g.validate();
        for (double r : bs_sweep.rhos)
            if (!(r >= 0.0) || r >= 1.0)
                throw std::invalid_argument("BS sweep rho values must lie in [0, 1)");
        break;
    }
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, unsigned threads)
{
    spec.validate();
    const std::vector<SweepPoint> points = materialize_points(spec);
    const std::size_t n_schemes = spec.schemes.size();
    std::vector<ResultRow> rows(points.size() * n_schemes);

    parallel_for(rows.size(), threads, [&](std::size_t job) {
        const SweepPoint& point = points[job / n_schemes];
        const Scheme scheme = spec.schemes[job % n_schemes];
        const std::uint64_t job_seed = derive_seed(spec.seed, 0x10000 + job);
        rows[job] = evaluate_cell(spec, point, scheme, job_seed);
    });
    return rows;
}

void emit(const std::vector<ResultRow>& rows, const std::string& path, OutputFormat format)
{
    const std::filesystem::path target(path);
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os)
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");

        if (format == OutputFormat::Csv)
        {
            os << kCsvHeader << '\n';
            for (const ResultRow& row : rows)
            {
                os << row.experiment << ',' << row.sweep_index << ',' << row.scheme << ','
                   << format_double(row.p_dbm) << ',' << row.bs_h << ',' << row.bs_v << ','
                   << row.m << ',' << format_double(row.rho) << ',' << row.ris_h << ','
                   << row.ris_v << ',' << row.n << ',' << format_double(row.spacing_wl) << ','
                   << format_double(row.kgr_bits) << ',' << format_double(row.kgr_std_bits)
                   << ',' << format_double(row.mc_ref_bits) << ','
                   << optional_to_string(row.mc_estimate_bits) << ','
                   << optional_to_string(row.mc_stderr_bits) << ','
                   << format_double(row.x_watts) << ',' << format_double(row.q_watts) << ','
                   << format_double(row.t) << ',' << format_double(row.f_lower_watts) << ','
                   << format_double(row.f_upper_watts) << ',' << row.trials << ','
                   << row.draws << ',' << row.seed << ',' << row.version << '\n';
            }
        }
        else
        {
            for (const ResultRow& row : rows)
                os << row_to_json(row).dump() << '\n';
        }
        os.flush();
        if (!os)
            throw std::runtime_error("failed while writing '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

std::vector<ResultRow> parse_rows(const std::string& path, OutputFormat format)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open '" + path + "' for reading");

    std::vector<ResultRow> rows;
    std::string line;
    if (format == OutputFormat::Csv)
    {
        if (!std::getline(is, line) || line != kCsvHeader)
            throw std::runtime_error("'" + path + "' does not start with the expected header");
        while (std::getline(is, line))
        {
            if (line.empty())
                continue;
            const std::vector<std::string> f = split_csv_line(line);
            if (f.size() != 26)
                throw std::runtime_error("'" + path + "': malformed row: " + line);
            ResultRow row;
            row.experiment = f[0];
            row.sweep_index = static_cast<int>(parse_int(f[1], "sweep_index"));
            row.scheme = f[2];
            row.p_dbm = parse_double(f[3], "p_dbm");
            row.bs_h = static_cast<int>(parse_int(f[4], "bs_h"));
            row.bs_v = static_cast<int>(parse_int(f[5], "bs_v"));
            row.m = static_cast<int>(parse_int(f[6], "m"));
            row.rho = parse_double(f[7], "rho");
            row.ris_h = static_cast<int>(parse_int(f[8], "ris_h"));
            row.ris_v = static_cast<int>(parse_int(f[9], "ris_v"));
            row.n = static_cast<int>(parse_int(f[10], "n"));
            row.spacing_wl = parse_double(f[11], "spacing_wl");
            row.kgr_bits = parse_double(f[12], "kgr_bits");
            row.kgr_std_bits = parse_double(f[13], "kgr_std_bits");
            row.mc_ref_bits = parse_double(f[14], "mc_ref_bits");
            if (!f[15].empty())
                row.mc_estimate_bits = parse_double(f[15], "mc_estimate_bits");
            if (!f[16].empty())
                row.mc_stderr_bits = parse_double(f[16], "mc_stderr_bits");
            row.x_watts = parse_double(f[17], "x_watts");
            row.q_watts = parse_double(f[18], "q_watts");
            row.t = parse_double(f[19], "t");
            row.f_lower_watts = parse_double(f[20], "f_lower_watts");
            row.f_upper_watts = parse_double(f[21], "f_upper_watts");
            row.trials = static_cast<std::size_t>(parse_int(f[22], "trials"));
            row.draws = static_cast<int>(parse_int(f[23], "draws"));
            row.seed = static_cast<std::uint64_t>(parse_int(f[24], "seed"));
            row.version = f[25];
            rows.push_back(std::move(row));
        }
    }
    else
    {
        while (std::getline(is, line))
        {
            if (line.empty())
                continue;
            rows.push_back(row_from_json(json::parse(line)));
        }
    }
    return rows;
}

void emit_gnuplot_script(const std::vector<ResultRow>& rows, const std::string& csv_path,
                         const std::string& script_path)
{
    if (rows.empty())
        throw std::invalid_argument("cannot plot an empty result set");

    // Pick the x axis: the first identity column that actually varies.
    struct Axis
    {
        const char* label;
        int column; // 1-based CSV column
    };
    Axis axis{"P (dBm)", 4};
    auto varies = [&rows](auto getter) {
        for (const ResultRow& row : rows)
            if (getter(row) != getter(rows.front()))
                return true;
        return false;
    };
    if (!varies([](const ResultRow& r) { return r.p_dbm; }))
    {
        if (varies([](const ResultRow& r) { return r.n; }))
            axis = {"N (RIS elements)", 11};
        else if (varies([](const ResultRow& r) { return r.m; }))
            axis = {"M (BS antennas)", 7};
    }

    std::vector<std::string> schemes;
    for (const ResultRow& row : rows)
        if (std::find(schemes.begin(), schemes.end(), row.scheme) == schemes.end())
            schemes.push_back(row.scheme);

    std::ofstream os(script_path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw std::runtime_error("cannot open '" + script_path + "' for writing");
    os << "set datafile separator ','\n"
       << "set key left top\n"
       << "set xlabel '" << axis.label << "'\n"
       << "set ylabel 'KGR (bits per round)'\n"
       << "set grid\n"
       << "plot ";
    for (std::size_t i = 0; i < schemes.size(); ++i)
    {
        if (i > 0)
            os << ", \\\n     ";
        os << "'" << csv_path << "' using " << axis.column
           << ":(strcol(3) eq '" << schemes[i] << "' ? $13 : 1/0) with linespoints title '"
           << schemes[i] << "'";
    }
    os << '\n';
}

double dbm_gain(const std::vector<ResultRow>& rows, Scheme a, Scheme b, double kgr_level)
{
    auto curve = [&rows](Scheme scheme) {
        std::vector<std::pair<double, double>> pts;
        const std::string name = scheme_name(scheme);
        for (const ResultRow& row : rows)
            if (row.scheme == name)
                pts.emplace_back(row.p_dbm, row.kgr_bits);
        if (pts.size() < 2)
            throw std::invalid_argument("dbm_gain: scheme '" + name +
                                        "' needs at least two power points");
        std::sort(pts.begin(), pts.end());
        return pts;
    };

    auto power_at_level = [kgr_level](const std::vector<std::pair<double, double>>& pts) {
        if (kgr_level < pts.front().second || kgr_level > pts.back().second)
            throw std::domain_error("dbm_gain: KGR level outside the curve range");
        for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        {
            const auto [p0, y0] = pts[k];
            const auto [p1, y1] = pts[k + 1];
            if (kgr_level >= y0 && kgr_level <= y1)
            {
                if (y1 == y0)
                    return p0;
                return p0 + (p1 - p0) * (kgr_level - y0) / (y1 - y0);
            }
        }
        throw std::domain_error("dbm_gain: curve is not monotone around the requested level");
    };

    return power_at_level(curve(b)) - power_at_level(curve(a));
}

ExperimentSpec preset(const std::string& name)
{
    ExperimentSpec spec;
    spec.name = name;
    if (name == "fig2")
    {
        spec.sweep_kind = SweepKind::PowerDbm;
        for (int p = 0; p <= 34; p += 2)
            spec.power_dbm.push_back(p);
        spec.schemes = {Scheme::OptimalBoth,    Scheme::RandomBoth,
                        Scheme::OptimalWRandomV, Scheme::RandomWOptimalV,
                        Scheme::NoRisOptimalW,  Scheme::IidAssumption};
    }
    else if (name == "fig3")
    {
        spec.sweep_kind = SweepKind::RisElements;
        for (int k = 4; k <= 10; ++k)
            spec.ris_sweep.grids.push_back({k, k});
        spec.ris_sweep.spacings_wl = {0.5, 0.25, 0.125};
        spec.schemes = {Scheme::OptimalBoth, Scheme::IidAssumption};
    }
    else if (name == "fig4")
    {
        spec.sweep_kind = SweepKind::BsAntennas;
        for (int k = 2; k <= 8; ++k)
            spec.bs_sweep.grids.push_back({k, k});
        spec.bs_sweep.rhos = {0.0, 0.3, 0.6};
        spec.schemes = {Scheme::OptimalBoth, Scheme::RandomWOptimalV};
    }
    else
    {
        throw std::invalid_argument("unknown preset '" + name +
                                    "' (expected fig2, fig3 or fig4)");
    }
    return spec;
}

std::string spec_to_json(const ExperimentSpec& spec)
{
    json j;
    j["name"] = spec.name;
    j["seed"] = spec.seed;
    j["trials"] = spec.trials;
    j["random_draws"] = spec.random_draws;
    json schemes = json::array();
    for (Scheme s : spec.schemes)
        schemes.push_back(scheme_name(s));
    j["schemes"] = schemes;
    j["base"] = config_to_json(spec.base);

    json sweep;
    switch (spec.sweep_kind)
    {
    case SweepKind::PowerDbm:
        sweep["power_dbm"] = spec.power_dbm;
        break;
    case SweepKind::RisElements:
    {
        json grids = json::array();
        for (const GridShape& g : spec.ris_sweep.grids)
            grids.push_back({g.horizontal, g.vertical});
        sweep["ris_elements"] = {{"grids", grids},
                                 {"spacing_wavelengths", spec.ris_sweep.spacings_wl}};
        break;
    }
    case SweepKind::BsAntennas:
    {
        json grids = json::array();
        for (const GridShape& g : spec.bs_sweep.grids)
            grids.push_back({g.horizontal, g.vertical});
        sweep["bs_antennas"] = {{"grids", grids}, {"rho", spec.bs_sweep.rhos}};
        break;
    }
    }
    j["sweep"] = sweep;
    return j.dump(2) + "\n";
}

ExperimentSpec spec_from_json(const std::string& json_text)
{
    const json j = json::parse(json_text);
    ExperimentSpec spec;
    if (j.contains("name"))
        spec.name = j.at("name").get<std::string>();
    if (j.contains("seed"))
        spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("trials"))
        spec.trials = j.at("trials").get<std::size_t>();
    if (j.contains("random_draws"))
        spec.random_draws = j.at("random_draws").get<int>();
    if (j.contains("base"))
        spec.base = config_from_json(j.at("base"));
    if (!j.contains("schemes"))
        throw std::runtime_error("spec is missing the 'schemes' list");
    for (const json& s : j.at("schemes"))
        spec.schemes.push_back(scheme_from_string(s.get<std::string>()));

    if (!j.contains("sweep"))
        throw std::runtime_error("spec is missing the 'sweep' object");
    const json& sweep = j.at("sweep");
    if (sweep.contains("power_dbm"))
    {
        spec.sweep_kind = SweepKind::PowerDbm;
        spec.power_dbm = sweep.at("power_dbm").get<std::vector<double>>();
    }
    else if (sweep.contains("ris_elements"))
    {
        spec.sweep_kind = SweepKind::RisElements;
        const json& r = sweep.at("ris_elements");
        for (const json& g : r.at("grids"))
            spec.ris_sweep.grids.push_back(grid_from_json(g, "sweep.ris_elements.grids"));
        spec.ris_sweep.spacings_wl = r.at("spacing_wavelengths").get<std::vector<double>>();
    }
    else if (sweep.contains("bs_antennas"))
    {
        spec.sweep_kind = SweepKind::BsAntennas;
        const json& b = sweep.at("bs_antennas");
        for (const json& g : b.at("grids"))
            spec.bs_sweep.grids.push_back(grid_from_json(g, "sweep.bs_antennas.grids"));
        spec.bs_sweep.rhos = b.at("rho").get<std::vector<double>>();
    }
    else
    {
        throw std::runtime_error(
            "sweep must contain one of 'power_dbm', 'ris_elements' or 'bs_antennas'");
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_spec(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open spec file '" + path + "'");
    std::stringstream buffer;
    buffer << is.rdbuf();
    try
    {
        return spec_from_json(buffer.str());
    }
    catch (const std::exception& e)
    {
        throw std::runtime_error("invalid spec '" + path + "': " + e.what());
    }
}

} // namespace riskg
