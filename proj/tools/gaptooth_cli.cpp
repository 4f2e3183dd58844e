// gaptooth: batch front-end for gap-tooth experiments.
//
//   gaptooth simulate     --preset fig1 --out runs/fig1
//   gaptooth spectrum     --preset table1 --out runs/table1
//   gaptooth convergence  --config my.json --out runs/conv
//   gaptooth resolution   --preset table4
//   gaptooth stencil-dump --r 0 --order 4 --kind derivative --m 16
//
// Exit codes: 0 success, 2 configuration error, 3 numerical divergence.

#include "gaptooth/csv.hpp"
#include "gaptooth/errors.hpp"
#include "gaptooth/experiment.hpp"
#include "gaptooth/spectra.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>

namespace fs = std::filesystem;
using namespace gaptooth;

namespace {

constexpr int kConfigError = 2;
constexpr int kDivergence = 3;

struct CommonOptions {
    std::string config;
    std::string preset;
    std::string out = ".";
    int parallel = 1;
    std::optional<double> dt;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "experiment JSON file");
    cmd->add_option("--preset", o.preset, "named preset")->check(CLI::IsMember(preset_names()));
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_option("--parallel", o.parallel, "threads for map assembly")->check(CLI::PositiveNumber);
    cmd->add_option("--dt", o.dt, "micro time step override");
    cmd->add_option("--override", o.overrides, "key=value config override (repeatable)");
}

ExperimentFile resolve(const CommonOptions& o) {
    if (o.config.empty() == o.preset.empty()) throw ConfigError("config", "give exactly one of --config or --preset");
    nlohmann::json j;
    if (!o.preset.empty()) {
        j = preset_json(o.preset);
    } else {
        std::ifstream in(o.config);
        if (!in) throw ConfigError("config", "cannot open " + o.config);
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& ex) {
            throw ConfigError("config", std::string("malformed JSON: ") + ex.what());
        }
    }
    for (const auto& ov : o.overrides) apply_override(j, ov);
    if (o.dt) j["dt"] = *o.dt;
    return parse_experiment(j);
}

std::ofstream open_out(const fs::path& dir, const std::string& file) {
    fs::create_directories(dir);
    std::ofstream out(dir / file);
    if (!out) throw ConfigError("out", "cannot write " + (dir / file).string());
    return out;
}

int cmd_simulate(const CommonOptions& o) {
    const ExperimentFile e = resolve(o);
    auto snaps = open_out(o.out, "snapshots.csv");
    std::optional<std::ofstream> gaps;
    if (e.gap_interpolants) gaps = open_out(o.out, "gaps.csv");
    const auto s = simulate(e, snaps, gaps ? &*gaps : nullptr);
    std::cout << "t_final        " << format_double(s.t_final) << '\n'
              << "snapshots      " << s.snapshots << '\n'
              << "max|v| initial " << format_double(s.max_abs_initial) << '\n'
              << "max|v| final   " << format_double(s.max_abs_final) << '\n'
              << "max|v| overall " << format_double(s.max_abs_overall) << '\n';
    if (s.fitted_decay)
        std::cout << "fitted decay of mode k=" << *s.fit_mode << ": " << format_double(*s.fitted_decay) << '\n';
    return 0;
}

int cmd_spectrum(const CommonOptions& o) {
    const ExperimentFile e = resolve(o);
    const auto reports = spectrum_sweep(e, o.parallel);
    for (const auto& r : reports) {
        auto out = open_out(o.out, "spectrum_m" + std::to_string(r.m) + "_n" + std::to_string(r.metadata->geom.n) + ".csv");
        write_spectrum_csv(r, out);
    }
    auto table = open_out(o.out, "table.csv");
    write_table_csv(reports, table);
    if (!e.name.empty()) std::cout << e.name << '\n';
    write_table_report(reports, std::cout);
    return 0;
}

int cmd_convergence(const CommonOptions& o) {
    const ExperimentFile e = resolve(o);
    const auto rows = convergence_study(e.config, e.ms(), o.parallel);
    auto out = open_out(o.out, "convergence.csv");
    write_convergence_csv(rows, out);
    write_convergence_csv(rows, std::cout);
    return 0;
}

int cmd_resolution(const CommonOptions& o) {
    const ExperimentFile e = resolve(o);
    const auto study = micro_resolution_study(e.config, e.ns(), o.parallel);
    auto out = open_out(o.out, "resolution.csv");
    write_resolution_csv(study, out);
    write_resolution_csv(study, std::cout);
    std::cout << "max relative variation of pair23: " << format_double(study.max_relative_variation) << '\n';
    return 0;
}

struct StencilOptions {
    double r = 0.1;
    int order = 4;
    std::string kind = "value";
    std::string family = "dirichlet";
    double a = 1.0;
    double b = 0.0;
    double beta = 1.0;
    int n = 11;
    int m = 16;
    double length = 2.0 * std::numbers::pi;
    std::string out;
};

int cmd_stencil(const StencilOptions& s) {
    static const std::map<std::string, StencilKind> kinds = {
        {"value", StencilKind::Value}, {"derivative", StencilKind::Derivative}, {"tbc", StencilKind::Tbc}};
    TbcSpec tbc;
    tbc.order = s.order;
    if (s.family == "dirichlet")
        tbc.family = Dirichlet{};
    else if (s.family == "mixed")
        tbc.family = Mixed{s.a, s.b};
    else
        tbc.family = TwoPoint{s.beta};
    if (s.m < 1) throw ConfigError("m", "must be positive");
    const double H = s.length / s.m;
    if (s.out.empty()) {
        write_stencil_csv(s.r, H, s.n, kinds.at(s.kind), tbc, std::cout);
    } else {
        const fs::path path(s.out);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream out(path);
        if (!out) throw ConfigError("out", "cannot write " + s.out);
        write_stencil_csv(s.r, H, s.n, kinds.at(s.kind), tbc, out);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gap-tooth multiscale simulation laboratory"};
    app.require_subcommand(1);

    CommonOptions sim_opts, spec_opts, conv_opts, res_opts;
    auto* sim = app.add_subcommand("simulate", "run a gap-tooth simulation and write snapshot CSV");
    add_common(sim, sim_opts);
    auto* spec = app.add_subcommand("spectrum", "growth-rate spectra of the linearised one-step map");
    add_common(spec, spec_opts);
    auto* conv = app.add_subcommand("convergence", "macro growth-rate errors and observed order over m");
    add_common(conv, conv_opts);
    auto* res = app.add_subcommand("resolution", "macro growth rates over micro resolutions n");
    add_common(res, res_opts);

    StencilOptions st;
    auto* dump = app.add_subcommand("stencil-dump", "print tooth-edge stencil weights as CSV");
    dump->add_option("--r", st.r, "edge fraction r");
    dump->add_option("--order", st.order, "consistency order (2, 4, 6, 8)");
    dump->add_option("--kind", st.kind, "value | derivative | tbc")->check(CLI::IsMember({"value", "derivative", "tbc"}));
    dump->add_option("--family", st.family, "TBC family for --kind tbc")->check(CLI::IsMember({"dirichlet", "mixed", "two_point"}));
    dump->add_option("--a", st.a, "mixed TBC value coefficient");
    dump->add_option("--b", st.b, "mixed TBC slope coefficient");
    dump->add_option("--beta", st.beta, "two-point TBC coefficient");
    dump->add_option("--n", st.n, "micro points per tooth (two-point r')");
    dump->add_option("--m", st.m, "number of teeth (H = length / m)");
    dump->add_option("--length", st.length, "domain length");
    dump->add_option("--out", st.out, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*sim) return cmd_simulate(sim_opts);
        if (*spec) return cmd_spectrum(spec_opts);
        if (*conv) return cmd_convergence(conv_opts);
        if (*res) return cmd_resolution(res_opts);
        if (*dump) return cmd_stencil(st);
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << '\n';
        return kDivergence;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const SingularTbcError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
