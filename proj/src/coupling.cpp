#include "gaptooth/coupling.hpp"

#include "gaptooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gaptooth {

double GapToothConfig::resolved_dt() const {
    return dt ? *dt : default_dt(geom, pde);
}

bool GapToothConfig::wrap_degenerate() const {
    return 2 * tbc.half_width() + 1 > geom.m;
}

void GapToothConfig::validate() const {
    geom.validate();
    gaptooth::validate(pde);
    tbc.validate();
    const int p = tbc.half_width();
    if (geom.m < 2 * p)
        throw ConfigError("m", "order " + std::to_string(tbc.order) + " stencil needs m >= " + std::to_string(2 * p) +
                                   ", got " + std::to_string(geom.m));
    if (std::holds_alternative<TwoPoint>(tbc.family) && !(geom.r_prime() > 0.0 && geom.r_prime() < geom.r))
        throw GeometryError("n", "two-point TBC needs a penultimate point strictly inside the tooth");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("t_end", "must be positive");
    if (dt) {
        if (!(*dt > 0.0) || !std::isfinite(*dt)) throw ConfigError("dt", "must be positive");
        if (*dt > stability_limit(geom, pde))
            throw ConfigError("dt", "exceeds explicit stability bound " + std::to_string(stability_limit(geom, pde)));
    }
    for (const auto& mode : initial_condition)
        if (!std::isfinite(mode.amp) || !std::isfinite(mode.phase))
            throw ConfigError("initial_condition", "amplitude and phase must be finite");
}

TbcStencil::TbcStencil(const TbcSpec& tbc, const ToothGeometry& geom)
    : left_(tbc_weights(tbc, geom.r, geom.r_prime(), geom.H(), Side::Left)),
      right_(tbc_weights(tbc, geom.r, geom.r_prime(), geom.H(), Side::Right)) {}

std::vector<EdgeTargets> TbcStencil::targets(std::span<const double> macro_values) const {
    const int m = static_cast<int>(macro_values.size());
    const int p = left_.half_width;
    std::vector<EdgeTargets> out(macro_values.size());
    for (int j = 0; j < m; ++j) {
        double gl = 0.0;
        double gr = 0.0;
        for (int k = -p; k <= p; ++k) {
            const double u = macro_values[static_cast<std::size_t>(((j + k) % m + m) % m)];
            gl += left_.at(k) * u;
            gr += right_.at(k) * u;
        }
        out[static_cast<std::size_t>(j)] = {gl, gr};
    }
    return out;
}

std::vector<EdgeTargets> compute_targets(std::span<const double> macro_values, const TbcSpec& tbc, const ToothGeometry& geom) {
    return TbcStencil(tbc, geom).targets(macro_values);
}

MicroState initial_state(const GapToothConfig& config) {
    const auto& g = config.geom;
    MicroState s(g.m, g.n);
    for (int j = 0; j < g.m; ++j)
        for (int i = 0; i < g.n; ++i) {
            double v = 0.0;
            for (const auto& mode : config.initial_condition) v += mode.amp * std::cos(mode.k * g.x(j, i) + mode.phase);
            s.at(j, i) = v;
        }
    return s;
}

GapToothScheme::GapToothScheme(GapToothConfig config)
    : config_((config.validate(), std::move(config))), dt_(config_.resolved_dt()), stencil_(config_.tbc, config_.geom) {}

MicroState GapToothScheme::step(const MicroState& state, double dt) const {
    if (!(dt > 0.0 && dt <= dt_)) throw ConfigError("dt", "step length must lie in (0, dt]");
    const auto targets = stencil_.targets(state.macro_values());
    MicroState next = interior_step(apply_tbc(state, config_.geom, config_.tbc, targets), config_.geom, config_.pde, dt);
    next.t = state.t + dt;
    return next;
}

MicroState GapToothScheme::linear_step(const MicroState& state) const {
    const auto targets = stencil_.targets(state.macro_values());
    MicroState next = linear_interior_step(apply_tbc(state, config_.geom, config_.tbc, targets), config_.geom,
                                           viscosity(config_.pde), dt_);
    next.t = state.t + dt_;
    return next;
}

MicroState step(const MicroState& state, const GapToothConfig& config) {
    return GapToothScheme(config).step(state);
}

Trajectory run(const GapToothConfig& config, int stride, const std::function<void(const MicroState&)>& observer) {
    if (stride < 1) throw ConfigError("snapshot_stride", "must be >= 1");
    const GapToothScheme scheme(config);
    const auto steps = static_cast<long long>(std::ceil(config.t_end / scheme.dt() - 1e-9));

    Trajectory out;
    auto keep = [&](const MicroState& s) {
        out.push_back(s);
        if (observer) observer(s);
    };

    MicroState state = initial_state(config);
    keep(state);
    for (long long s = 1; s <= steps; ++s) {
        if (s < steps) {
            state = scheme.step(state);
        } else {
            state = scheme.step(state, std::clamp(config.t_end - state.t, scheme.dt() * 1e-9, scheme.dt()));
            state.t = config.t_end;
        }
        if (s % stride == 0 || s == steps) keep(state);
    }
    return out;
}

double macro_mode_amplitude(const MicroState& state, const ToothGeometry& geom, int k) {
    double c = 0.0;
    double s = 0.0;
    for (int j = 0; j < state.m; ++j) {
        const double x = geom.center(j);
        c += state.macro(j) * std::cos(k * x);
        s += state.macro(j) * std::sin(k * x);
    }
    return 2.0 * std::hypot(c, s) / state.m;
}

double fit_mode_decay(const Trajectory& trajectory, const ToothGeometry& geom, int k, double t0, double t1) {
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    int count = 0;
    for (const auto& snap : trajectory) {
        if (snap.t < t0 - 1e-12 || snap.t > t1 + 1e-12) continue;
        const double amp = macro_mode_amplitude(snap, geom, k);
        if (!(amp > 0.0)) continue;
        const double y = std::log(amp);
        st += snap.t;
        sy += y;
        stt += snap.t * snap.t;
        sty += snap.t * y;
        ++count;
    }
    if (count < 2) throw ConfigError("fit_window", "fewer than two snapshots with nonzero amplitude in the window");
    return (count * sty - st * sy) / (count * stt - st * st);
}

std::vector<double> macro_interpolant_in_tooth(std::span<const double> macro_values, const ToothGeometry& geom, int p, int j) {
    const int m = static_cast<int>(macro_values.size());
    std::vector<double> out(static_cast<std::size_t>(geom.n), 0.0);
    for (int i = 0; i < geom.n; ++i) {
        // Micro point i sits at fraction (i eta - rH) / H from the centre.
        const double s = (i * geom.eta() - geom.r * geom.H()) / geom.H();
        const auto w = interp_weights(std::abs(s), p, s < 0.0 ? Side::Left : Side::Right);
        double v = 0.0;
        for (int k = -p; k <= p; ++k) v += w.at(k) * macro_values[static_cast<std::size_t>(((j + k) % m + m) % m)];
        out[static_cast<std::size_t>(i)] = v;
    }
    return out;
}

}  // namespace gaptooth
