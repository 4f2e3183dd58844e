#pragma once

#include "gaptooth/stencil.hpp"

#include <numbers>
#include <span>
#include <variant>
#include <vector>

namespace gaptooth {

/// Placement of m teeth of n micro points each on a periodic domain.
///
/// Tooth j is centred on X_j = j H with H = L / m and spans
/// [X_j - rH, X_j + rH]; micro point i (0-based) sits at X_j - rH + i eta with
/// eta = 2rH / (n - 1). Edges are i = 0 and i = n - 1.
struct ToothGeometry {
    int m = 8;
    int n = 11;
    double r = 0.1;
    double length = 2.0 * std::numbers::pi;

    double H() const { return length / m; }
    double h() const { return 2.0 * r * H(); }
    double eta() const { return h() / (n - 1); }
    int center_index() const { return (n - 1) / 2; }
    double center(int j) const { return j * H(); }
    double x(int j, int i) const { return center(j) - r * H() + i * eta(); }
    /// Edge fraction of the penultimate micro point, r' = r (n - 3) / (n - 1).
    double r_prime() const { return r * (n - 3) / (n - 1); }

    /// Throws ConfigError naming the field that breaks an invariant.
    void validate() const;
};

/// Field values v_{j,i} of all teeth, row-major by tooth, plus time.
struct MicroState {
    int m = 0;
    int n = 0;
    std::vector<double> v;
    double t = 0.0;

    MicroState() = default;
    MicroState(int teeth, int points, double time = 0.0)
        : m(teeth), n(points), v(static_cast<std::size_t>(teeth) * static_cast<std::size_t>(points), 0.0), t(time) {}

    double& at(int j, int i) { return v[index(j, i)]; }
    double at(int j, int i) const { return v[index(j, i)]; }
    std::span<double> tooth(int j) { return {v.data() + index(j, 0), static_cast<std::size_t>(n)}; }
    std::span<const double> tooth(int j) const { return {v.data() + index(j, 0), static_cast<std::size_t>(n)}; }

    /// U_j, the value at the tooth centre.
    double macro(int j) const { return at(j, (n - 1) / 2); }
    std::vector<double> macro_values() const;

    std::size_t index(int j, int i) const {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
    }
};

struct Diffusion {};
/// u_t = nu u_xx - u u_x
struct Burgers {
    double nu = 1.0;
};
using PdeChoice = std::variant<Diffusion, Burgers>;

/// Diffusivity multiplying u_xx.
double viscosity(const PdeChoice& pde);
void validate(const PdeChoice& pde);

/// Largest step the driver uses by default: min(dt_max, eta^2 / (4 max(1, nu))).
double default_dt(const ToothGeometry& geom, const PdeChoice& pde, double dt_max = 1e-4);

/// Explicit-Euler stability limit of the 3-point diffusion update, eta^2 / (2 nu).
double stability_limit(const ToothGeometry& geom, const PdeChoice& pde);

/// One explicit step of the 3-point scheme on interior points 1..n-2 of
/// every tooth. Edge values are copied through unchanged.
/// Throws DivergenceError if any updated value is non-finite.
MicroState interior_step(const MicroState& state, const ToothGeometry& geom, const PdeChoice& pde, double dt);

/// The same update with the advective term dropped; this is the Burgers
/// Jacobian about u = 0 and coincides with interior_step for Diffusion.
MicroState linear_interior_step(const MicroState& state, const ToothGeometry& geom, double nu, double dt);

struct EdgeTargets {
    double left = 0.0;
    double right = 0.0;
};

/// Write edge values of every tooth so the micro combination the TBC family
/// constrains equals the target for that edge.
///
/// Mixed uses the second-order one-sided slope (-3v0 + 4v1 - v2) / (2 eta)
/// and solves for the edge value; throws SingularTbcError on a zero pivot.
MicroState apply_tbc(MicroState state, const ToothGeometry& geom, const TbcSpec& spec, std::span<const EdgeTargets> targets);

}  // namespace gaptooth
