#include "gaptooth/errors.hpp"
#include "gaptooth/spectra.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gaptooth;

namespace {

GapToothConfig table_config(int m, TbcSpec tbc = {Dirichlet{}, 4}, int n = 11) {
    GapToothConfig cfg;
    cfg.geom.m = m;
    cfg.geom.n = n;
    cfg.geom.r = 0.1;
    cfg.tbc = tbc;
    return cfg;
}

}  // namespace

TEST_CASE("map matrix reproduces the one-step map") {
    for (TbcSpec tbc : {TbcSpec{Dirichlet{}, 4}, TbcSpec{Mixed{0.95, 0.05}, 4}, TbcSpec{TwoPoint{1.0}, 6}}) {
        const auto cfg = with_spectral_dt(table_config(8, tbc));
        const auto a = linearize_map(cfg);
        const GapToothScheme scheme(cfg);
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> dist(-1, 1);
        for (int trial = 0; trial < 10; ++trial) {
            MicroState x(8, 11);
            Eigen::VectorXd vx(88);
            for (int i = 0; i < 88; ++i) vx(i) = x.v[i] = dist(rng);
            const Eigen::VectorXd ax = a * vx;
            const auto phi = scheme.step(x);
            for (int i = 0; i < 88; ++i) CHECK(std::abs(ax(i) - phi.v[i]) < 1e-12);
        }
    }
}

TEST_CASE("Dirichlet map preserves constants") {
    const auto a = linearize_map(with_spectral_dt(table_config(8)));
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(a.cols());
    CHECK((a * ones - ones).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("parallel assembly is identical to serial") {
    const auto cfg = with_spectral_dt(table_config(8, TbcSpec{TwoPoint{1.0}, 4}));
    CHECK(linearize_map(cfg, 1) == linearize_map(cfg, 3));
}

TEST_CASE("Burgers linearises to diffusion with the same viscosity") {
    auto burgers = table_config(8);
    burgers.pde = Burgers{1.0};
    burgers.dt = 1e-6;
    auto diffusion = table_config(8);
    diffusion.dt = 1e-6;
    CHECK(linearize_map(burgers) == linearize_map(diffusion));
}

TEST_CASE("identity map has zero growth rates") {
    const auto rep = growth_rates(Eigen::MatrixXd::Identity(12, 12), 1e-4, 4);
    for (const auto& l : rep.growth_rates) CHECK(std::abs(l) < 1e-12);
    CHECK(rep.unreliable_count() == 0);
    CHECK_THROWS_AS(growth_rates(Eigen::MatrixXd::Identity(4, 4), 0.0, 2), ConfigError);
}

TEST_CASE("diagonal map: sorting, log conversion and unreliable branch") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
    a.diagonal() << 0.5, 1.0, std::exp(-0.2), -0.3, 0.0;
    const auto rep = growth_rates(a, 0.1, 2);
    CHECK(rep.growth_rates[0].real() == doctest::Approx(0.0).scale(1.0));
    CHECK(rep.growth_rates[1].real() == doctest::Approx(-2.0));
    CHECK(rep.growth_rates[2].real() == doctest::Approx(std::log(0.5) / 0.1));
    CHECK(rep.leading_internal == doctest::Approx(std::log(0.5) / 0.1));
    CHECK(rep.unreliable_count() == 2);
    CHECK(rep.log_branch_unreliable[3]);
    CHECK(rep.log_branch_unreliable[4]);
}

TEST_CASE("table-shaped grouping") {
    const auto rep4 = compute_spectrum(table_config(4));
    CHECK(rep4.wrap_degenerate);
    CHECK(rep4.pair23.value.has_value());
    CHECK(rep4.pair45.single);
    CHECK_FALSE(rep4.pair67.value.has_value());

    const auto rep16 = compute_spectrum(table_config(16));
    CHECK_FALSE(rep16.wrap_degenerate);
    CHECK(rep16.macro_modes().size() == 16);
    CHECK(std::abs(rep16.mode1) < 1e-8);
    CHECK(rep16.pair23.gap < 1e-6);
    CHECK(rep16.pair45.gap < 1e-6);
    CHECK(rep16.pair67.gap < 1e-6);
    double max_real = 0.0, max_imag = 0.0;
    for (const auto& l : rep16.macro_modes()) {
        max_real = std::max(max_real, std::abs(l.real()));
        max_imag = std::max(max_imag, std::abs(l.imag()));
    }
    CHECK(max_imag < 1e-6 * max_real);
    REQUIRE(rep16.metadata.has_value());
    CHECK(rep16.dt_used == doctest::Approx(spectral_dt(rep16.metadata->geom, Diffusion{})));
}

TEST_CASE("leading internal rate for m = 4") {
    // -397.2 in the m = 4 row of the order-4 Dirichlet table.
    const auto rep = compute_spectrum(table_config(4));
    CHECK(std::abs(rep.leading_internal + 397.2) < 0.02 * 397.2);
}

TEST_CASE("Table rows for m = 16 order 4 and m = 32 order 6") {
    const auto r16 = compute_spectrum(table_config(16));
    CHECK(std::abs(*r16.pair23.value + 0.999750) < 1e-3 * 0.999750);
    CHECK(std::abs(*r16.pair45.value + 3.984293) < 1e-3 * 3.984293);
    CHECK(std::abs(*r16.pair67.value + 8.832102) < 1e-3 * 8.832102);
    CHECK(std::abs(r16.leading_internal + 6355.) < 0.02 * 6355.);

    const auto r32 = compute_spectrum(table_config(32, {Dirichlet{}, 6}));
    CHECK(std::abs(*r32.pair23.value + 1.000002) < 1e-3);
    CHECK(std::abs(*r32.pair45.value + 4.000004) < 1e-3);
    CHECK(std::abs(*r32.pair67.value + 8.999518) < 1e-3);
}

TEST_CASE("convergence study") {
    const auto rows = convergence_study(table_config(8), {8, 16, 32});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].observed_order.empty());
    for (const auto& row : rows) CHECK(std::abs(row.mode1) < 1e-8);
    // Error 0.003927 -> 0.000250 between m = 8 and 16: about a factor 16.
    const double ratio = *rows[0].errors[0] / *rows[1].errors[0];
    CHECK(ratio > 10.0);
    CHECK(ratio < 24.0);
    CHECK(*rows[1].observed_order[0] == doctest::Approx(4.0).epsilon(0.1));

    const auto six = convergence_study(table_config(8, {Dirichlet{}, 6}), {8, 16});
    CHECK(*six[1].observed_order[0] >= 5.0);

    CHECK_THROWS_AS(convergence_study(table_config(8), {8, 24}), ConfigError);
}

TEST_CASE("resolution study") {
    SUBCASE("Dirichlet barely depends on n") {
        const auto s = micro_resolution_study(table_config(8), {11, 21, 41});
        CHECK(s.rows.size() == 3);
        CHECK(s.max_relative_variation < 1e-4);
    }
    SUBCASE("TwoPoint barely depends on n") {
        // -0.999741 / -0.999742 / -0.999742 over n = 11, 21, 41 (these are m = 16 values).
        const auto s = micro_resolution_study(table_config(16, {TwoPoint{1.0}, 4}), {11, 21, 41});
        CHECK(s.max_relative_variation < 1e-5);
        const double expected[] = {-0.999741, -0.999742, -0.999742};
        for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(*s.rows[i].pair23.value - expected[i]) < 1e-5);
    }
    SUBCASE("Mixed shows second-order micro error") {
        const auto s = micro_resolution_study(table_config(8, {Mixed{0.95, 0.05}, 4}), {11, 21, 41});
        REQUIRE(s.richardson_ratios.size() == 1);
        CHECK(s.richardson_ratios[0] > 3.0);
        CHECK(s.richardson_ratios[0] < 6.0);
    }
}
