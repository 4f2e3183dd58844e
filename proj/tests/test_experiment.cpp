#include "gaptooth/errors.hpp"
#include "gaptooth/experiment.hpp"

#include <doctest.h>

#include <sstream>

using namespace gaptooth;
using nlohmann::json;

namespace {

std::string field_error(const json& j) {
    try {
        parse_experiment(j);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("every preset parses and round-trips") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto e = parse_experiment(preset_json(name));
        CHECK(e.name == name);
        const json once = to_json(e);
        const auto again = parse_experiment(once);
        CHECK(to_json(again) == once);
    }
}

TEST_CASE("presets carry the table parameters") {
    const auto t1 = parse_experiment(preset_json("table1"));
    CHECK(t1.config.geom.n == 11);
    CHECK(t1.config.geom.r == 0.1);
    CHECK(t1.config.tbc.order == 4);
    CHECK(std::holds_alternative<Dirichlet>(t1.config.tbc.family));
    CHECK(t1.ms() == std::vector<int>{4, 8, 16, 32});

    const auto t4 = parse_experiment(preset_json("table4"));
    const auto& mixed = std::get<Mixed>(t4.config.tbc.family);
    CHECK(mixed.a == 0.95);
    CHECK(mixed.b == 0.05);
    CHECK(t4.config.geom.m == 8);
    CHECK(t4.ns() == std::vector<int>{11, 21, 41});

    const auto f1 = parse_experiment(preset_json("fig1"));
    CHECK(std::holds_alternative<Burgers>(f1.config.pde));
    CHECK(f1.config.tbc.order == 6);
    const auto f6 = parse_experiment(preset_json("fig6"));
    CHECK(std::get<TwoPoint>(f6.config.tbc.family).beta == 1.0);

    CHECK_THROWS_AS(preset_json("table9"), ConfigError);
}

TEST_CASE("schema errors name the field") {
    json j = preset_json("table1");
    j["bogus"] = 1;
    CHECK(field_error(j) == "bogus");

    j = preset_json("table1");
    j["tbc"]["gamma"] = 1;
    CHECK(field_error(j) == "tbc.gamma");

    j = preset_json("table1");
    j["tbc"]["beta"] = 1;
    CHECK(field_error(j) == "tbc.beta");

    j = preset_json("table1");
    j["m"] = "sixteen";
    CHECK(field_error(j) == "m");

    j = preset_json("table1");
    j["n"] = 12;
    CHECK(field_error(j) == "n");

    j = preset_json("table1");
    j["m_list"] = {4, 8, 12};
    CHECK(field_error(j) == "m_list");

    j = preset_json("table2");
    j["m_list"] = {4, 8};
    CHECK(field_error(j) == "m");

    j = preset_json("table1");
    j["pde"] = {{"type", "burgers"}, {"nu", 0.0}};
    CHECK(field_error(j) == "pde.nu");

    j = preset_json("table1");
    j["initial_condition"] = json::array({{{"k", 1}, {"amplitude", 1.0}}});
    CHECK(field_error(j) == "initial_condition.amplitude");
}

TEST_CASE("dotted overrides") {
    json j = preset_json("table1");
    apply_override(j, "tbc.order=6");
    apply_override(j, "m=32");
    apply_override(j, "m_list=[8,16,32]");
    apply_override(j, "pde.type=burgers");
    const auto e = parse_experiment(j);
    CHECK(e.config.tbc.order == 6);
    CHECK(e.config.geom.m == 32);
    CHECK(std::holds_alternative<Burgers>(e.config.pde));
    CHECK_THROWS_AS(apply_override(j, "no-equals-sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(j, "=3"), ConfigError);
}

TEST_CASE("simulation CSV is deterministic and zero IC gives zeros") {
    json j = preset_json("table1");
    j["m"] = 8;
    j["t_end"] = 0.01;
    j["snapshot_stride"] = 50;
    const auto e = parse_experiment(j);
    std::ostringstream a, b;
    simulate(e, a);
    simulate(e, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("t,j,i,x,v\n", 0) == 0);

    j["initial_condition"] = json::array();
    std::ostringstream z;
    const auto summary = simulate(parse_experiment(j), z);
    CHECK(summary.max_abs_overall == 0.0);
    CHECK_FALSE(summary.fitted_decay.has_value());
    std::istringstream lines(z.str());
    std::string line;
    std::getline(lines, line);
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.substr(line.rfind(',') + 1) == "0");
        ++rows;
    }
    CHECK(rows > 0);
}

TEST_CASE("diffusion k = 1 simulation decays at the scheme's rate") {
    const auto e = parse_experiment(preset_json("table1"));
    std::ostringstream sink;
    const auto s = simulate(e, sink);
    REQUIRE(s.fitted_decay.has_value());
    CHECK(*s.fit_mode == 1);
    CHECK(std::abs(*s.fitted_decay + 0.999750) < 1e-3);
}

TEST_CASE("gap interpolant rows stay outside the teeth") {
    json j = preset_json("table1");
    j["m"] = 8;
    j["t_end"] = 1e-3;
    j["gap_interpolants"] = true;
    const auto e = parse_experiment(j);
    std::ostringstream snaps, gaps;
    simulate(e, snaps, &gaps);
    std::istringstream lines(gaps.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,j,x,u");
    const double H = e.config.geom.H();
    int rows = 0;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string t, jj, x, u;
        std::getline(fields, t, ',');
        std::getline(fields, jj, ',');
        std::getline(fields, x, ',');
        std::getline(fields, u, ',');
        const double frac = std::stod(x) / H - std::stoi(jj);
        CHECK(frac >= 0.1 - 1e-12);
        CHECK(frac <= 0.9 + 1e-12);
        // cos is smooth; the interpolant stays close to it in the gap.
        CHECK(std::abs(std::stod(u) - std::cos(std::stod(x))) < 2e-2);
        ++rows;
    }
    CHECK(rows > 0);
}

TEST_CASE("spectrum table output") {
    json j = preset_json("table1");
    j["m_list"] = {4, 8};
    const auto reports = spectrum_sweep(parse_experiment(j));
    REQUIRE(reports.size() == 2);
    std::ostringstream csv, text;
    write_table_csv(reports, csv);
    write_table_report(reports, text);
    CHECK(csv.str().find("n/a") != std::string::npos);
    CHECK(text.str().find("n/a") != std::string::npos);
    CHECK(text.str().find("wrap-degenerate") != std::string::npos);

    std::ostringstream spec;
    write_spectrum_csv(reports[0], spec);
    CHECK(spec.str().rfind("index,re_lambda,im_lambda,log_branch_unreliable\n", 0) == 0);
}

TEST_CASE("stencil dump") {
    std::ostringstream value, deriv;
    write_stencil_csv(0.0, 1.0, 11, StencilKind::Value, TbcSpec{Dirichlet{}, 4}, value);
    CHECK(value.str() == "offset,left,right\n-2,0,0\n-1,0,0\n0,1,1\n1,0,0\n2,0,0\n");

    const double H = 0.5;
    write_stencil_csv(0.0, H, 11, StencilKind::Derivative, TbcSpec{Dirichlet{}, 4}, deriv);
    std::istringstream lines(deriv.str());
    std::string line;
    std::getline(lines, line);
    const double expected[] = {1.0 / 12, -2.0 / 3, 0.0, 2.0 / 3, -1.0 / 12};
    for (double w : expected) {
        std::getline(lines, line);
        const double right = std::stod(line.substr(line.rfind(',') + 1));
        CHECK(right == doctest::Approx(w / H).epsilon(1e-14));
    }

    std::ostringstream tbc;
    write_stencil_csv(0.1, H, 11, StencilKind::Tbc, TbcSpec{TwoPoint{1.0}, 4}, tbc);
    CHECK(tbc.str().rfind("offset,left,right\n", 0) == 0);
    CHECK_THROWS_AS(write_stencil_csv(0.1, H, 10, StencilKind::Tbc, TbcSpec{TwoPoint{1.0}, 4}, tbc), ConfigError);
}
