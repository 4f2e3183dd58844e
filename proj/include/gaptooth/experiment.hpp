#pragma once

#include "gaptooth/coupling.hpp"
#include "gaptooth/spectra.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gaptooth {

/// Declarative experiment: a GapToothConfig plus sweep lists and output
/// options for the CLI subcommands. Serialised as JSON; unknown keys are
/// rejected and every physical invariant is re-checked on load.
struct ExperimentFile {
    std::string name;
    GapToothConfig config;
    std::vector<int> m_list;  ///< empty: just config.geom.m
    std::vector<int> n_list;  ///< empty: just config.geom.n
    int snapshot_stride = 100;
    std::optional<int> fit_mode;  ///< default: largest-amplitude initial mode
    double fit_t0 = 0.1;
    std::optional<double> fit_t1;  ///< default: t_end
    bool gap_interpolants = false;

    std::vector<int> ms() const { return m_list.empty() ? std::vector<int>{config.geom.m} : m_list; }
    std::vector<int> ns() const { return n_list.empty() ? std::vector<int>{config.geom.n} : n_list; }
    int dominant_mode() const;
    void validate() const;
};

ExperimentFile parse_experiment(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentFile& e);
ExperimentFile load_experiment(const std::filesystem::path& path);

/// Raw JSON of a named preset ("table1".."table6", "fig1", "fig6").
nlohmann::json preset_json(std::string_view name);
std::vector<std::string> preset_names();

/// Set a dotted key ("tbc.order", "m", "pde.nu") from "key=value". The value
/// is parsed as JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& j, std::string_view assignment);

struct SimulationSummary {
    double t_final = 0.0;
    std::size_t snapshots = 0;
    double max_abs_initial = 0.0;
    double max_abs_final = 0.0;
    double max_abs_overall = 0.0;
    std::optional<int> fit_mode;
    std::optional<double> fitted_decay;
};

/// Run the experiment, streaming (t, j, i, x, v) rows to `snapshots`. Gap
/// interpolant rows (t, j, x, u) go to `gaps` when requested.
SimulationSummary simulate(const ExperimentFile& e, std::ostream& snapshots, std::ostream* gaps = nullptr);

/// (index, re_lambda, im_lambda, log_branch_unreliable) rows.
void write_spectrum_csv(const SpectrumReport& report, std::ostream& out);

/// One spectrum per (m, n) in the sweep.
std::vector<SpectrumReport> spectrum_sweep(const ExperimentFile& e, int threads = 1);

/// Table-shaped CSV (m, n, mode1, pair23, pair45, pair67, leading_internal, ...).
void write_table_csv(const std::vector<SpectrumReport>& reports, std::ostream& out);
/// Human-readable table with "n/a" where a pair does not exist.
void write_table_report(const std::vector<SpectrumReport>& reports, std::ostream& out);

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out);
void write_resolution_csv(const ResolutionStudy& study, std::ostream& out);

enum class StencilKind { Value, Derivative, Tbc };

/// (offset, left, right) weights for half-width tbc.order / 2. Derivative
/// weights are divided by H; Tbc kind uses the family in `tbc` with
/// r' = r (n - 3) / (n - 1).
void write_stencil_csv(double r, double H, int n, StencilKind kind, const TbcSpec& tbc, std::ostream& out);

}  // namespace gaptooth
