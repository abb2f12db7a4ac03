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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "riskg/experiment.hpp"
#include "riskg/parallel.hpp"
#include "riskg/version.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"riskg - RIS-assisted secret key generation experiments"};
    app.set_version_flag("--version", std::string(riskg::kVersionString));
    app.require_subcommand(1);

    CLI::App* run = app.add_subcommand("run", "run an experiment and emit result rows");
    std::string spec_path;
    std::string preset_name;
    std::string out_dir = ".";
    std::string format_name = "csv";
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    int draws = 0;
    unsigned threads = riskg::default_thread_count();
    bool gnuplot = false;
    std::string dump_spec_path;

    run->add_option("spec", spec_path, "experiment spec file (JSON)");
    run->add_option("--preset", preset_name, "built-in experiment: fig2, fig3 or fig4");
    run->add_option("--out", out_dir, "output directory (default: current directory)");
    run->add_option("--format", format_name, "output format: csv or jsonl (default: csv)");
    auto* trials_opt =
        run->add_option("--trials", trials, "Monte Carlo validation trials per row (0 = off)");
    auto* seed_opt = run->add_option("--seed", seed, "master seed (recorded in every row)");
    auto* draws_opt =
        run->add_option("--draws", draws, "beamformer draws averaged for random schemes");
    run->add_option("--threads", threads, "worker threads (default: hardware concurrency)");
    run->add_flag("--gnuplot", gnuplot, "also write a gnuplot script next to the CSV");
    run->add_option("--dump-spec", dump_spec_path, "write the effective spec as JSON and run");

    CLI11_PARSE(app, argc, argv);

    try
    {
        riskg::ExperimentSpec spec;
        if (!spec_path.empty())
            spec = riskg::load_spec(spec_path);
        else if (!preset_name.empty())
            spec = riskg::preset(preset_name);
        else
            throw std::invalid_argument("provide a spec file or --preset");

        if (seed_opt->count() > 0)
            spec.seed = seed;
        if (trials_opt->count() > 0)
            spec.trials = trials;
        if (draws_opt->count() > 0)
            spec.random_draws = draws;
        spec.validate();

        if (!dump_spec_path.empty())
        {
            std::ofstream os(dump_spec_path, std::ios::binary | std::ios::trunc);
            if (!os)
                throw std::runtime_error("cannot open '" + dump_spec_path + "' for writing");
            os << riskg::spec_to_json(spec);
        }

        const riskg::OutputFormat format = riskg::format_from_string(format_name);
        const auto rows = riskg::run_experiment(spec, threads);

        std::filesystem::create_directories(out_dir);
        const std::string ext = format == riskg::OutputFormat::Csv ? ".csv" : ".jsonl";
        const std::string path = (std::filesystem::path(out_dir) / (spec.name + ext)).string();
        riskg::emit(rows, path, format);
        std::cout << rows.size() << " rows -> " << path << " (seed " << spec.seed << ")\n";

        if (gnuplot)
        {
            if (format != riskg::OutputFormat::Csv)
                throw std::invalid_argument("--gnuplot requires --format csv");
            const std::string gp =
                (std::filesystem::path(out_dir) / (spec.name + ".gp")).string();
            riskg::emit_gnuplot_script(rows, path, gp);
            std::cout << "plot script -> " << gp << "\n";
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
