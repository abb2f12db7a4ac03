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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riskg/beamforming.hpp"

namespace riskg {

/// Beamforming policies compared in the experiments.
///
/// Random policies model a designer that assumes uncorrelated fading (any
/// direction is as good as any other under that assumption) while the KGR is
/// always evaluated under the true correlated channel. `IidAssumption` is the
/// fully uninformed baseline: both w and v random.
enum class Scheme
{
    OptimalBoth,
    RandomBoth,
    OptimalWRandomV,
    RandomWOptimalV,
    NoRisOptimalW,
    IidAssumption
};

std::string scheme_name(Scheme scheme);
Scheme scheme_from_string(const std::string& name);

enum class SweepKind
{
    PowerDbm,
    RisElements,
    BsAntennas
};

struct RisSweep
{
    std::vector<GridShape> grids;
    std::vector<double> spacings_wl;
};

struct BsSweep
{
    std::vector<GridShape> grids;
    std::vector<double> rhos;
};

struct ExperimentSpec
{
    std::string name = "experiment";
    SystemConfig base;

    SweepKind sweep_kind = SweepKind::PowerDbm;
    std::vector<double> power_dbm; // when sweep_kind == PowerDbm
    RisSweep ris_sweep;            // when sweep_kind == RisElements
    BsSweep bs_sweep;              // when sweep_kind == BsAntennas

    std::vector<Scheme> schemes;
    std::size_t trials = 0; // Monte Carlo validation trials per row; 0 = off
    int random_draws = 100; // beamformer draws averaged for random schemes
    std::uint64_t seed = 1;

    void validate() const;
};

/// One output record; self-describing so files can be re-plotted without the
/// spec that produced them. Random schemes report the mean and spread of the
/// closed form over the beamformer draws, and `mc_ref_bits` is the closed
/// form at the exact beamformers the Monte Carlo column used (the first
/// draw), so the two stay directly comparable.
struct ResultRow
{
    std::string experiment;
    int sweep_index = 0;
    std::string scheme;

    double p_dbm = 0.0;
    int bs_h = 0;
    int bs_v = 0;
    int m = 0;
    double rho = 0.0;
    int ris_h = 0;
    int ris_v = 0;
    int n = 0;
    double spacing_wl = 0.0;

    double kgr_bits = 0.0;
    double kgr_std_bits = 0.0;
    double mc_ref_bits = 0.0;
    std::optional<double> mc_estimate_bits;
    std::optional<double> mc_stderr_bits;

    double x_watts = 0.0;
    double q_watts = 0.0;
    double t = 0.0;
    double f_lower_watts = 0.0;
    double f_upper_watts = 0.0;

    std::size_t trials = 0;
    int draws = 0;
    std::uint64_t seed = 0;
    std::string version;
};

/// Evaluate every (sweep point x scheme) cell. Cells are independent jobs
/// executed on up to `threads` workers; rows come back in sweep order and
/// all randomness is derived from (spec.seed, job index), so the output is
/// identical for any thread count.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, unsigned threads = 1);

enum class OutputFormat
{
    Csv,
    JsonLines
};

OutputFormat format_from_string(const std::string& name);

/// Write rows to `path` (UTF-8, 12 significant digits, fixed column order).
/// The file is written to a temporary sibling and renamed into place.
void emit(const std::vector<ResultRow>& rows, const std::string& path, OutputFormat format);

std::vector<ResultRow> parse_rows(const std::string& path, OutputFormat format);

/// Write a gnuplot script that plots kgr_bits against the sweep axis for
/// every scheme present in `rows`, reading from the emitted CSV file.
void emit_gnuplot_script(const std::vector<ResultRow>& rows, const std::string& csv_path,
                         const std::string& script_path);

/// Horizontal power gap in dB between two scheme curves of a power sweep at
/// a given KGR level, via linear interpolation in dBm. Positive when scheme
/// `b` needs more power than scheme `a` to reach the level.
double dbm_gain(const std::vector<ResultRow>& rows, Scheme a, Scheme b, double kgr_level);

/// Built-in experiment definitions ("fig2", "fig3", "fig4").
ExperimentSpec preset(const std::string& name);

ExperimentSpec load_spec(const std::string& path);
std::string spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const std::string& json_text);

} // namespace riskg
