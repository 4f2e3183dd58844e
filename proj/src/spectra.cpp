#include "gaptooth/spectra.hpp"

#include "gaptooth/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

namespace gaptooth {

double spectral_dt(const ToothGeometry& geom, const PdeChoice& pde) {
    const double eta = geom.eta();
    return 0.125 * eta * eta / viscosity(pde);
}

GapToothConfig with_spectral_dt(GapToothConfig config) {
    if (!config.dt) config.dt = spectral_dt(config.geom, config.pde);
    return config;
}

Eigen::MatrixXd linearize_map(const GapToothConfig& config, int threads) {
    const GapToothScheme scheme(config);
    const int m = config.geom.m;
    const int n = config.geom.n;
    const int size = m * n;

    const MicroState zero(m, n);
    const MicroState phi0 = scheme.linear_step(zero);
    if (std::any_of(phi0.v.begin(), phi0.v.end(), [](double x) { return x != 0.0; }))
        throw NonzeroFixedPointError("one-step map does not fix the zero state");

    Eigen::MatrixXd a(size, size);
    auto fill = [&](int begin, int end) {
        MicroState e(m, n);
        for (int k = begin; k < end; ++k) {
            e.v[static_cast<std::size_t>(k)] = 1.0;
            const MicroState out = scheme.linear_step(e);
            for (int row = 0; row < size; ++row) a(row, k) = out.v[static_cast<std::size_t>(row)] - phi0.v[static_cast<std::size_t>(row)];
            e.v[static_cast<std::size_t>(k)] = 0.0;
        }
    };

    threads = std::clamp(threads, 1, size);
    if (threads == 1) {
        fill(0, size);
    } else {
        std::vector<std::jthread> pool;
        const int chunk = (size + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int begin = t * chunk;
            const int end = std::min(size, begin + chunk);
            if (begin < end) pool.emplace_back(fill, begin, end);
        }
    }
    return a;
}

ModeGroup SpectrumReport::pair(int k) const {
    ModeGroup g;
    const int first = 2 * k - 1;  // 0-based index of the first member
    if (first + 1 < m) {
        const auto a = growth_rates[static_cast<std::size_t>(first)];
        const auto b = growth_rates[static_cast<std::size_t>(first + 1)];
        const double mean = 0.5 * (a.real() + b.real());
        g.value = mean;
        g.gap = mean != 0.0 ? std::abs(a.real() - b.real()) / std::abs(mean) : 0.0;
    } else if (first + 1 == m) {
        g.value = growth_rates[static_cast<std::size_t>(first)].real();
        g.single = true;
    }
    return g;
}

int SpectrumReport::unreliable_count() const {
    return static_cast<int>(std::count(log_branch_unreliable.begin(), log_branch_unreliable.end(), true));
}

SpectrumReport growth_rates(const Eigen::MatrixXd& map, double dt, int m) {
    if (!map.allFinite()) throw std::invalid_argument("map matrix has non-finite entries");
    if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
    const auto size = map.rows();
    if (m < 1 || m > size) throw ConfigError("m", "macro mode count out of range");

    // Eigenvalues of (map - I) keep the multipliers near 1 at full relative precision.
    const Eigen::MatrixXd shifted = map - Eigen::MatrixXd::Identity(size, size);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(shifted, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue iteration did not converge");
    const Eigen::VectorXcd nu = solver.eigenvalues();

    struct Entry {
        std::complex<double> lambda;
        bool unreliable;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(size));
    for (Eigen::Index i = 0; i < size; ++i) {
        const std::complex<double> d = nu(i);
        const std::complex<double> mu = 1.0 + d;
        // log|1 + d| via log1p so that lambda ~ 0 stays accurate.
        const double log_mod = 0.5 * std::log1p(2.0 * d.real() + std::norm(d));
        const double arg = std::atan2(d.imag(), 1.0 + d.real());
        // Overwritten edge values give multipliers that are zero up to rounding.
        entries.push_back({std::complex<double>(log_mod, arg) / dt, mu.real() <= 0.0 || std::abs(mu) < 1e-8});
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() > b.lambda.real();
        return a.lambda.imag() > b.lambda.imag();
    });

    SpectrumReport report;
    report.m = m;
    report.dt_used = dt;
    for (const auto& e : entries) {
        report.growth_rates.push_back(e.lambda);
        report.log_branch_unreliable.push_back(e.unreliable);
    }
    report.mode1 = report.growth_rates.front();
    report.pair23 = report.pair(1);
    report.pair45 = report.pair(2);
    report.pair67 = report.pair(3);
    report.leading_internal = m < size ? report.growth_rates[static_cast<std::size_t>(m)].real() : 0.0;
    return report;
}

SpectrumReport compute_spectrum(const GapToothConfig& config, int threads) {
    const GapToothConfig resolved = with_spectral_dt(config);
    SpectrumReport report = growth_rates(linearize_map(resolved, threads), *resolved.dt, resolved.geom.m);
    report.wrap_degenerate = resolved.wrap_degenerate();
    report.metadata = resolved;
    return report;
}

std::vector<ConvergenceRow> convergence_study(const GapToothConfig& base, const std::vector<int>& m_list, int threads) {
    std::vector<ConvergenceRow> rows;
    for (std::size_t idx = 0; idx < m_list.size(); ++idx) {
        GapToothConfig cfg = base;
        cfg.geom.m = m_list[idx];
        if (idx > 0 && m_list[idx] != 2 * m_list[idx - 1])
            throw ConfigError("m_list", "must be a doubling sequence");
        const SpectrumReport rep = compute_spectrum(cfg, threads);

        ConvergenceRow row;
        row.m = cfg.geom.m;
        row.mode1 = rep.mode1;
        row.leading_internal = rep.leading_internal;
        row.wrap_degenerate = rep.wrap_degenerate;
        for (int k = 1; k <= 3; ++k) {
            const auto g = rep.pair(k);
            row.errors.push_back(g.value ? std::optional<double>(std::abs(*g.value + k * k)) : std::nullopt);
        }
        if (!rows.empty()) {
            const auto& prev = rows.back();
            for (std::size_t k = 0; k < row.errors.size(); ++k) {
                const auto& e0 = prev.errors[k];
                const auto& e1 = row.errors[k];
                if (e0 && e1 && *e0 > 0.0 && *e1 > 0.0)
                    row.observed_order.push_back(std::log2(*e0 / *e1));
                else
                    row.observed_order.push_back(std::nullopt);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ResolutionStudy micro_resolution_study(const GapToothConfig& config, const std::vector<int>& n_list, int threads) {
    ResolutionStudy study;
    for (int n : n_list) {
        GapToothConfig cfg = config;
        cfg.geom.n = n;
        const SpectrumReport rep = compute_spectrum(cfg, threads);
        study.rows.push_back({n, rep.mode1, rep.pair23, rep.pair45, rep.pair67});
    }
    std::vector<double> p23;
    for (const auto& row : study.rows)
        if (row.pair23.value) p23.push_back(*row.pair23.value);
    for (std::size_t i = 0; i + 2 < p23.size(); ++i) {
        const double d0 = p23[i + 1] - p23[i];
        const double d1 = p23[i + 2] - p23[i + 1];
        study.richardson_ratios.push_back(d1 != 0.0 ? d0 / d1 : std::numeric_limits<double>::infinity());
    }
    for (double v : p23)
        study.max_relative_variation = std::max(study.max_relative_variation, std::abs(v - p23.front()) / std::abs(p23.front()));
    return study;
}

}  // namespace gaptooth
