#include "gaptooth/microsim.hpp"

#include "gaptooth/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gaptooth {

void ToothGeometry::validate() const {
    if (m < 1) throw ConfigError("m", "need at least one tooth, got " + std::to_string(m));
    if (n < 5 || n % 2 == 0) throw ConfigError("n", "must be odd and >= 5, got " + std::to_string(n));
    if (!(r > 0.0 && r < 0.5)) throw ConfigError("r", "must lie in (0, 0.5), got " + std::to_string(r));
    if (!(length > 0.0) || !std::isfinite(length)) throw ConfigError("length", "must be positive and finite");
}

std::vector<double> MicroState::macro_values() const {
    std::vector<double> u(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) u[static_cast<std::size_t>(j)] = macro(j);
    return u;
}

double viscosity(const PdeChoice& pde) {
    if (const auto* b = std::get_if<Burgers>(&pde)) return b->nu;
    return 1.0;
}

void validate(const PdeChoice& pde) {
    if (const auto* b = std::get_if<Burgers>(&pde); b && !(b->nu > 0.0 && std::isfinite(b->nu)))
        throw ConfigError("pde.nu", "Burgers viscosity must be positive, got " + std::to_string(b->nu));
}

double default_dt(const ToothGeometry& geom, const PdeChoice& pde, double dt_max) {
    const double eta = geom.eta();
    return std::min(dt_max, 0.25 * eta * eta / std::max(1.0, viscosity(pde)));
}

double stability_limit(const ToothGeometry& geom, const PdeChoice& pde) {
    const double eta = geom.eta();
    return 0.5 * eta * eta / viscosity(pde);
}

namespace {

template <bool Advect>
MicroState advance(const MicroState& state, const ToothGeometry& geom, double nu, double dt) {
    MicroState next = state;
    const double eta = geom.eta();
    const double diff = nu * dt / (eta * eta);
    const double adv = dt / (2.0 * eta);
    for (int j = 0; j < state.m; ++j) {
        const auto v = state.tooth(j);
        auto out = next.tooth(j);
        for (int i = 1; i + 1 < state.n; ++i) {
            double val = v[i] + diff * (v[i + 1] - 2.0 * v[i] + v[i - 1]);
            if constexpr (Advect) val -= adv * v[i] * (v[i + 1] - v[i - 1]);
            if (!std::isfinite(val)) throw DivergenceError(j, i, state.t);
            out[i] = val;
        }
    }
    return next;
}

}  // namespace

MicroState interior_step(const MicroState& state, const ToothGeometry& geom, const PdeChoice& pde, double dt) {
    if (std::holds_alternative<Burgers>(pde)) return advance<true>(state, geom, viscosity(pde), dt);
    return advance<false>(state, geom, 1.0, dt);
}

MicroState linear_interior_step(const MicroState& state, const ToothGeometry& geom, double nu, double dt) {
    return advance<false>(state, geom, nu, dt);
}

MicroState apply_tbc(MicroState state, const ToothGeometry& geom, const TbcSpec& spec, std::span<const EdgeTargets> targets) {
    const int n = state.n;
    const int last = n - 1;
    const double eta = geom.eta();

    std::visit(
        [&](const auto& family) {
            using F = std::decay_t<decltype(family)>;
            for (int j = 0; j < state.m; ++j) {
                const EdgeTargets g = targets[static_cast<std::size_t>(j)];
                auto v = state.tooth(j);
                if constexpr (std::is_same_v<F, Dirichlet>) {
                    v[0] = g.left;
                    v[last] = g.right;
                } else if constexpr (std::is_same_v<F, Mixed>) {
                    // a v0 - b (-3 v0 + 4 v1 - v2) / (2 eta) = g_left
                    // a vN + b ( 3 vN - 4 vN-1 + vN-2) / (2 eta) = g_right
                    const double pivot = family.a + 3.0 * family.b / (2.0 * eta);
                    if (pivot == 0.0 || !std::isfinite(pivot))
                        throw SingularTbcError("mixed TBC pivot a + 3b/(2 eta) vanishes; edge value undetermined");
                    const double k = family.b / (2.0 * eta);
                    v[0] = (g.left + k * (4.0 * v[1] - v[2])) / pivot;
                    v[last] = (g.right + k * (4.0 * v[last - 1] - v[last - 2])) / pivot;
                } else {
                    v[0] = g.left - family.beta * v[1];
                    v[last] = g.right - family.beta * v[last - 1];
                }
            }
        },
        spec.family);
    return state;
}

}  // namespace gaptooth
