#include "gaptooth/experiment.hpp"

#include "gaptooth/csv.hpp"
#include "gaptooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

namespace gaptooth {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw ConfigError(where.empty() ? "config" : where, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(where.empty() ? key : where + "." + key, "unknown key");
    }
}

double get_number(const json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& path) {
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<int>();
}

std::vector<int> get_int_list(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_array()) throw ConfigError(key, "expected an array of integers");
    std::vector<int> out;
    for (const auto& x : v) {
        if (!x.is_number_integer()) throw ConfigError(key, "expected an array of integers");
        out.push_back(x.get<int>());
    }
    return out;
}

PdeChoice parse_pde(const json& j) {
    reject_unknown(j, "pde", {"type", "nu"});
    if (!j.contains("type") || !j["type"].is_string()) throw ConfigError("pde.type", "expected \"diffusion\" or \"burgers\"");
    const auto type = j["type"].get<std::string>();
    if (type == "diffusion") {
        if (j.contains("nu")) throw ConfigError("pde.nu", "diffusion takes no viscosity");
        return Diffusion{};
    }
    if (type == "burgers") return Burgers{j.contains("nu") ? get_number(j, "nu", "pde.nu") : 1.0};
    throw ConfigError("pde.type", "expected \"diffusion\" or \"burgers\", got \"" + type + "\"");
}

TbcSpec parse_tbc(const json& j) {
    reject_unknown(j, "tbc", {"family", "order", "a", "b", "beta"});
    if (!j.contains("family") || !j["family"].is_string())
        throw ConfigError("tbc.family", "expected \"dirichlet\", \"mixed\" or \"two_point\"");
    TbcSpec spec;
    spec.order = j.contains("order") ? get_int(j, "order", "tbc.order") : 4;
    const auto family = j["family"].get<std::string>();
    auto forbid = [&](std::initializer_list<const char*> keys) {
        for (const char* k : keys)
            if (j.contains(k)) throw ConfigError(std::string("tbc.") + k, "not used by family " + family);
    };
    if (family == "dirichlet") {
        forbid({"a", "b", "beta"});
        spec.family = Dirichlet{};
    } else if (family == "mixed") {
        forbid({"beta"});
        spec.family = Mixed{j.contains("a") ? get_number(j, "a", "tbc.a") : 1.0, j.contains("b") ? get_number(j, "b", "tbc.b") : 0.0};
    } else if (family == "two_point") {
        forbid({"a", "b"});
        spec.family = TwoPoint{j.contains("beta") ? get_number(j, "beta", "tbc.beta") : 1.0};
    } else {
        throw ConfigError("tbc.family", "expected \"dirichlet\", \"mixed\" or \"two_point\", got \"" + family + "\"");
    }
    return spec;
}

json pde_json(const PdeChoice& pde) {
    if (const auto* b = std::get_if<Burgers>(&pde)) return {{"type", "burgers"}, {"nu", b->nu}};
    return {{"type", "diffusion"}};
}

json tbc_json(const TbcSpec& tbc) {
    json j;
    std::visit(
        [&](const auto& f) {
            using F = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<F, Dirichlet>) {
                j = {{"family", "dirichlet"}};
            } else if constexpr (std::is_same_v<F, Mixed>) {
                j = {{"family", "mixed"}, {"a", f.a}, {"b", f.b}};
            } else {
                j = {{"family", "two_point"}, {"beta", f.beta}};
            }
        },
        tbc.family);
    j["order"] = tbc.order;
    return j;
}

}  // namespace

int ExperimentFile::dominant_mode() const {
    if (fit_mode) return *fit_mode;
    const FourierMode* best = nullptr;
    for (const auto& mode : config.initial_condition)
        if (mode.k != 0 && (!best || std::abs(mode.amp) > std::abs(best->amp))) best = &mode;
    return best ? std::abs(best->k) : 1;
}

void ExperimentFile::validate() const {
    config.validate();
    for (int m : ms()) {
        GapToothConfig c = config;
        c.geom.m = m;
        c.validate();
    }
    for (int n : ns()) {
        GapToothConfig c = config;
        c.geom.n = n;
        c.validate();
    }
    for (std::size_t i = 1; i < m_list.size(); ++i)
        if (m_list[i] != 2 * m_list[i - 1]) throw ConfigError("m_list", "must be a doubling sequence");
    if (snapshot_stride < 1) throw ConfigError("snapshot_stride", "must be >= 1");
    if (fit_mode && *fit_mode < 1) throw ConfigError("fit.mode", "must be >= 1");
    if (fit_t1 && !(*fit_t1 > fit_t0)) throw ConfigError("fit.t1", "must exceed fit.t0");
}

ExperimentFile parse_experiment(const json& j) {
    reject_unknown(j, "", {"name", "m", "n", "r", "length", "pde", "tbc", "dt", "t_end", "initial_condition",
                           "snapshot_stride", "m_list", "n_list", "fit", "gap_interpolants"});
    ExperimentFile e;
    try {
        if (j.contains("name")) {
            if (!j["name"].is_string()) throw ConfigError("name", "expected a string");
            e.name = j["name"].get<std::string>();
        }
        auto& g = e.config.geom;
        if (j.contains("m")) g.m = get_int(j, "m", "m");
        if (j.contains("n")) g.n = get_int(j, "n", "n");
        if (j.contains("r")) g.r = get_number(j, "r", "r");
        if (j.contains("length")) g.length = get_number(j, "length", "length");
        if (j.contains("pde")) e.config.pde = parse_pde(j["pde"]);
        if (j.contains("tbc")) e.config.tbc = parse_tbc(j["tbc"]);
        if (j.contains("dt") && !j["dt"].is_null()) e.config.dt = get_number(j, "dt", "dt");
        if (j.contains("t_end")) e.config.t_end = get_number(j, "t_end", "t_end");
        if (j.contains("initial_condition")) {
            const auto& ic = j["initial_condition"];
            if (!ic.is_array()) throw ConfigError("initial_condition", "expected an array of modes");
            for (const auto& mode : ic) {
                reject_unknown(mode, "initial_condition", {"k", "amp", "phase"});
                FourierMode f;
                if (mode.contains("k")) f.k = get_int(mode, "k", "initial_condition.k");
                if (mode.contains("amp")) f.amp = get_number(mode, "amp", "initial_condition.amp");
                if (mode.contains("phase")) f.phase = get_number(mode, "phase", "initial_condition.phase");
                e.config.initial_condition.push_back(f);
            }
        }
        if (j.contains("snapshot_stride")) e.snapshot_stride = get_int(j, "snapshot_stride", "snapshot_stride");
        if (j.contains("m_list")) e.m_list = get_int_list(j, "m_list");
        if (j.contains("n_list")) e.n_list = get_int_list(j, "n_list");
        if (j.contains("fit")) {
            const auto& f = j["fit"];
            reject_unknown(f, "fit", {"mode", "t0", "t1"});
            if (f.contains("mode")) e.fit_mode = get_int(f, "mode", "fit.mode");
            if (f.contains("t0")) e.fit_t0 = get_number(f, "t0", "fit.t0");
            if (f.contains("t1")) e.fit_t1 = get_number(f, "t1", "fit.t1");
        }
        if (j.contains("gap_interpolants")) {
            if (!j["gap_interpolants"].is_boolean()) throw ConfigError("gap_interpolants", "expected true or false");
            e.gap_interpolants = j["gap_interpolants"].get<bool>();
        }
    } catch (const json::exception& ex) {
        throw ConfigError("config", ex.what());
    }
    e.validate();
    return e;
}

json to_json(const ExperimentFile& e) {
    const auto& g = e.config.geom;
    json j = {{"m", g.m}, {"n", g.n}, {"r", g.r}, {"length", g.length}, {"pde", pde_json(e.config.pde)},
              {"tbc", tbc_json(e.config.tbc)}, {"t_end", e.config.t_end}, {"snapshot_stride", e.snapshot_stride},
              {"gap_interpolants", e.gap_interpolants}};
    if (!e.name.empty()) j["name"] = e.name;
    if (e.config.dt) j["dt"] = *e.config.dt;
    json ic = json::array();
    for (const auto& mode : e.config.initial_condition) ic.push_back({{"k", mode.k}, {"amp", mode.amp}, {"phase", mode.phase}});
    j["initial_condition"] = ic;
    if (!e.m_list.empty()) j["m_list"] = e.m_list;
    if (!e.n_list.empty()) j["n_list"] = e.n_list;
    json fit = {{"t0", e.fit_t0}};
    if (e.fit_mode) fit["mode"] = *e.fit_mode;
    if (e.fit_t1) fit["t1"] = *e.fit_t1;
    j["fit"] = fit;
    return j;
}

ExperimentFile load_experiment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ConfigError("config", std::string("malformed JSON: ") + ex.what());
    }
    return parse_experiment(j);
}

// Presets carry each table caption's parameters: diffusion, H = 2 pi / m,
// r = 0.1, n = 11 unless the table sweeps n.
json preset_json(std::string_view name) {
    const json diffusion = {{"type", "diffusion"}};
    const json cos1 = json::array({{{"k", 1}, {"amp", 1.0}, {"phase", 0.0}}});
    json base = {{"name", std::string(name)}, {"m", 16}, {"n", 11}, {"r", 0.1}, {"pde", diffusion},
                 {"t_end", 1.0}, {"initial_condition", cos1}, {"snapshot_stride", 100}};
    const json dirichlet4 = {{"family", "dirichlet"}, {"order", 4}};
    const json mixed = {{"family", "mixed"}, {"order", 4}, {"a", 0.95}, {"b", 0.05}};
    const json two_point = {{"family", "two_point"}, {"order", 4}, {"beta", 1.0}};

    if (name == "table1") {
        base["tbc"] = dirichlet4;
        base["m_list"] = {4, 8, 16, 32};
    } else if (name == "table2") {
        base["tbc"] = {{"family", "dirichlet"}, {"order", 6}};
        base["m_list"] = {8, 16, 32};
    } else if (name == "table3") {
        base["tbc"] = mixed;
        base["m_list"] = {4, 8, 16, 32};
    } else if (name == "table4") {
        base["tbc"] = mixed;
        base["m"] = 8;
        base["n_list"] = {11, 21, 41};
    } else if (name == "table5") {
        base["tbc"] = two_point;
        base["m_list"] = {4, 8, 16, 32};
    } else if (name == "table6") {
        base["tbc"] = two_point;
        base["n_list"] = {11, 21, 41};
    } else if (name == "fig1" || name == "fig6") {
        base["m"] = 8;
        base["pde"] = {{"type", "burgers"}, {"nu", 1.0}};
        base["tbc"] = name == "fig1" ? json{{"family", "dirichlet"}, {"order", 6}} : two_point;
        base["t_end"] = 2.0;
        base["initial_condition"] = json::array({{{"k", 1}, {"amp", 1.0}, {"phase", 0.0}},
                                                 {{"k", 2}, {"amp", 0.5}, {"phase", 0.3}}});
        base["snapshot_stride"] = 500;
    } else {
        throw ConfigError("preset", "unknown preset \"" + std::string(name) + "\"");
    }
    return base;
}

std::vector<std::string> preset_names() {
    return {"table1", "table2", "table3", "table4", "table5", "table6", "fig1", "fig6"};
}

void apply_override(json& j, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ConfigError("override", "expected key=value, got \"" + std::string(assignment) + "\"");
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("override", "empty path component in \"" + key + "\"");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        if (!node->contains(part)) (*node)[part] = json::object();
        node = &(*node)[part];
        if (!node->is_object()) throw ConfigError(key, "cannot descend into a non-object");
        start = dot + 1;
    }
}

namespace {

double max_abs(const MicroState& s) {
    double out = 0.0;
    for (double v : s.v) out = std::max(out, std::abs(v));
    return out;
}

void write_gap_rows(const MicroState& s, const ToothGeometry& g, int p, CsvWriter& csv) {
    constexpr int kSamples = 7;  // odd, so no sample lands on the midpoint
    const auto u = s.macro_values();
    const int m = g.m;
    auto wrap = [m](int j) { return ((j % m) + m) % m; };
    for (int j = 0; j < m; ++j) {
        // Fractions from centre j across the gap to centre j+1, excluding tooth interiors.
        for (int q = 0; q <= kSamples; ++q) {
            const double f = g.r + (1.0 - 2.0 * g.r) * q / kSamples;
            StencilWeights w;
            int anchor = j;
            if (f < 0.5) {
                w = interp_weights(f, p, Side::Right);
            } else {
                w = interp_weights(1.0 - f, p, Side::Left);
                anchor = j + 1;
            }
            double val = 0.0;
            for (int k = -p; k <= p; ++k) val += w.at(k) * u[static_cast<std::size_t>(wrap(anchor + k))];
            csv.field(s.t).field(j).field(g.center(j) + f * g.H()).field(val);
            csv.end_row();
        }
    }
}

}  // namespace

SimulationSummary simulate(const ExperimentFile& e, std::ostream& snapshots, std::ostream* gaps) {
    const auto& geom = e.config.geom;
    CsvWriter csv(snapshots, {"t", "j", "i", "x", "v"});
    std::optional<CsvWriter> gap_csv;
    if (gaps) gap_csv.emplace(*gaps, std::initializer_list<std::string_view>{"t", "j", "x", "u"});

    SimulationSummary summary;
    bool first = true;
    auto observer = [&](const MicroState& s) {
        for (int j = 0; j < s.m; ++j)
            for (int i = 0; i < s.n; ++i) {
                csv.field(s.t).field(j).field(i).field(geom.x(j, i)).field(s.at(j, i));
                csv.end_row();
            }
        if (gap_csv) write_gap_rows(s, geom, e.config.tbc.half_width(), *gap_csv);
        const double a = max_abs(s);
        if (first) summary.max_abs_initial = a;
        first = false;
        summary.max_abs_final = a;
        summary.max_abs_overall = std::max(summary.max_abs_overall, a);
        summary.t_final = s.t;
        ++summary.snapshots;
    };
    const Trajectory traj = run(e.config, e.snapshot_stride, observer);

    const int k = e.dominant_mode();
    const double t1 = e.fit_t1.value_or(e.config.t_end);
    if (2 * k < geom.m && !e.config.initial_condition.empty()) {
        summary.fit_mode = k;
        try {
            summary.fitted_decay = fit_mode_decay(traj, geom, k, e.fit_t0, t1);
        } catch (const ConfigError&) {
            summary.fitted_decay.reset();
        }
    }
    return summary;
}

void write_spectrum_csv(const SpectrumReport& report, std::ostream& out) {
    CsvWriter csv(out, {"index", "re_lambda", "im_lambda", "log_branch_unreliable"});
    for (std::size_t i = 0; i < report.growth_rates.size(); ++i) {
        csv.field(static_cast<long long>(i + 1))
            .field(report.growth_rates[i].real())
            .field(report.growth_rates[i].imag())
            .field(static_cast<long long>(report.log_branch_unreliable[i] ? 1 : 0));
        csv.end_row();
    }
}

std::vector<SpectrumReport> spectrum_sweep(const ExperimentFile& e, int threads) {
    std::vector<SpectrumReport> out;
    for (int m : e.ms())
        for (int n : e.ns()) {
            GapToothConfig c = e.config;
            c.geom.m = m;
            c.geom.n = n;
            out.push_back(compute_spectrum(c, threads));
        }
    return out;
}

namespace {

std::string group_text(const ModeGroup& g) {
    return g.value ? format_double(*g.value) : "n/a";
}

}  // namespace

void write_table_csv(const std::vector<SpectrumReport>& reports, std::ostream& out) {
    CsvWriter csv(out, {"m", "n", "dt", "mode1", "pair23", "pair45", "pair67", "leading_internal", "pair23_gap",
                        "wrap_degenerate"});
    for (const auto& r : reports) {
        csv.field(r.m)
            .field(r.metadata ? r.metadata->geom.n : 0)
            .field(r.dt_used)
            .field(r.mode1.real())
            .field(std::string_view(group_text(r.pair23)))
            .field(std::string_view(group_text(r.pair45)))
            .field(std::string_view(group_text(r.pair67)))
            .field(r.leading_internal)
            .field(r.pair23.gap)
            .field(static_cast<long long>(r.wrap_degenerate ? 1 : 0));
        csv.end_row();
    }
}

void write_table_report(const std::vector<SpectrumReport>& reports, std::ostream& out) {
    char line[256];
    std::snprintf(line, sizeof line, "%4s %4s %12s %12s %12s %12s %12s\n", "m", "n", "1", "2,3", "4,5", "6,7", "m+1:2m");
    out << line;
    auto cell = [](const ModeGroup& g) {
        char buf[32];
        if (g.value)
            std::snprintf(buf, sizeof buf, "%.6f", *g.value);
        else
            std::snprintf(buf, sizeof buf, "n/a");
        return std::string(buf);
    };
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%4d %4d %12.1e %12s %12s %12s %12.1f%s\n", r.m, r.metadata ? r.metadata->geom.n : 0,
                      r.mode1.real(), cell(r.pair23).c_str(), cell(r.pair45).c_str(), cell(r.pair67).c_str(), r.leading_internal,
                      r.wrap_degenerate ? "  (wrap-degenerate stencil)" : "");
        out << line;
    }
}

void write_convergence_csv(const std::vector<ConvergenceRow>& rows, std::ostream& out) {
    CsvWriter csv(out, {"m", "mode1", "err_k1", "err_k2", "err_k3", "order_k1", "order_k2", "order_k3", "leading_internal"});
    auto opt = [](const std::vector<std::optional<double>>& v, std::size_t i) {
        return (i < v.size() && v[i]) ? format_double(*v[i]) : std::string("n/a");
    };
    for (const auto& r : rows) {
        csv.field(r.m).field(r.mode1.real());
        for (std::size_t k = 0; k < 3; ++k) csv.field(std::string_view(opt(r.errors, k)));
        for (std::size_t k = 0; k < 3; ++k) csv.field(std::string_view(opt(r.observed_order, k)));
        csv.field(r.leading_internal);
        csv.end_row();
    }
}

void write_resolution_csv(const ResolutionStudy& study, std::ostream& out) {
    CsvWriter csv(out, {"n", "mode1", "pair23", "pair45", "pair67", "richardson_ratio"});
    for (std::size_t i = 0; i < study.rows.size(); ++i) {
        const auto& r = study.rows[i];
        csv.field(r.n)
            .field(r.mode1.real())
            .field(std::string_view(group_text(r.pair23)))
            .field(std::string_view(group_text(r.pair45)))
            .field(std::string_view(group_text(r.pair67)));
        // Ratio is attached to the last row of each consecutive triple.
        if (i >= 2 && i - 2 < study.richardson_ratios.size())
            csv.field(study.richardson_ratios[i - 2]);
        else
            csv.field(std::string_view("n/a"));
        csv.end_row();
    }
}

void write_stencil_csv(double r, double H, int n, StencilKind kind, const TbcSpec& tbc, std::ostream& out) {
    tbc.validate();
    if (!(H > 0.0)) throw ConfigError("H", "macro spacing must be positive");
    const int p = tbc.half_width();
    std::vector<double> left;
    std::vector<double> right;
    switch (kind) {
        case StencilKind::Value:
            left = interp_weights(r, p, Side::Left).weights;
            right = interp_weights(r, p, Side::Right).weights;
            break;
        case StencilKind::Derivative:
            left = deriv_weights(r, p, Side::Left).weights;
            right = deriv_weights(r, p, Side::Right).weights;
            for (auto& w : left) w /= H;
            for (auto& w : right) w /= H;
            break;
        case StencilKind::Tbc: {
            if (n < 5 || n % 2 == 0) throw ConfigError("n", "must be odd and >= 5");
            const double r_prime = r * (n - 3) / (n - 1);
            left = tbc_weights(tbc, r, r_prime, H, Side::Left).weights;
            right = tbc_weights(tbc, r, r_prime, H, Side::Right).weights;
            break;
        }
    }
    CsvWriter csv(out, {"offset", "left", "right"});
    for (int k = -p; k <= p; ++k) {
        csv.field(k).field(left[static_cast<std::size_t>(k + p)]).field(right[static_cast<std::size_t>(k + p)]);
        csv.end_row();
    }
}

}  // namespace gaptooth
