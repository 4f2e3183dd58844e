#pragma once

#include "gaptooth/microsim.hpp"
#include "gaptooth/stencil.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace gaptooth {

/// One term amp * cos(k x + phase) of an initial condition.
struct FourierMode {
    int k = 1;
    double amp = 1.0;
    double phase = 0.0;
};

/// Everything needed to run a gap-tooth experiment.
struct GapToothConfig {
    ToothGeometry geom;
    PdeChoice pde = Diffusion{};
    TbcSpec tbc;
    std::optional<double> dt;  ///< unset: default_dt(geom, pde)
    double t_end = 1.0;
    std::vector<FourierMode> initial_condition;

    double resolved_dt() const;
    /// Stencil of width 2p+1 is wider than the macro grid, so offsets wrap
    /// onto the same tooth twice (the m = 4, order 4 case).
    bool wrap_degenerate() const;
    /// Throws ConfigError / GeometryError on any broken invariant.
    void validate() const;
};

/// Precomputed edge-target weights for a (tbc, geometry) pair.
class TbcStencil {
public:
    TbcStencil(const TbcSpec& tbc, const ToothGeometry& geom);

    const EdgeCondition& left() const { return left_; }
    const EdgeCondition& right() const { return right_; }

    /// g_{j,side} = sum_k w_k U_{(j+k) mod m}.
    std::vector<EdgeTargets> targets(std::span<const double> macro_values) const;

private:
    EdgeCondition left_;
    EdgeCondition right_;
};

/// Edge targets for every tooth from one snapshot of the macro values.
std::vector<EdgeTargets> compute_targets(std::span<const double> macro_values, const TbcSpec& tbc, const ToothGeometry& geom);

/// Initial micro state: the Fourier sum sampled at every micro point.
MicroState initial_state(const GapToothConfig& config);

/// Steps a configured scheme: snapshot macro values, compute targets, apply
/// the TBC, advance interiors, t += dt.
class GapToothScheme {
public:
    explicit GapToothScheme(GapToothConfig config);

    const GapToothConfig& config() const { return config_; }
    double dt() const { return dt_; }
    const TbcStencil& stencil() const { return stencil_; }

    MicroState step(const MicroState& state) const { return step(state, dt_); }
    /// Step of a shorter length, used to land exactly on t_end.
    MicroState step(const MicroState& state, double dt) const;
    /// One step with the advective term dropped (the linearisation about 0).
    MicroState linear_step(const MicroState& state) const;

private:
    GapToothConfig config_;
    double dt_;
    TbcStencil stencil_;
};

MicroState step(const MicroState& state, const GapToothConfig& config);

using Trajectory = std::vector<MicroState>;

/// Iterate from the initial condition to t_end, keeping the initial state,
/// every `stride`-th state and the final state. The optional observer sees
/// every kept snapshot as it is produced.
Trajectory run(const GapToothConfig& config, int stride = 1,
               const std::function<void(const MicroState&)>& observer = {});

/// Amplitude of the cos/sin(k X) component of the macro values.
double macro_mode_amplitude(const MicroState& state, const ToothGeometry& geom, int k);

/// Least-squares slope of log(amplitude of mode k) over snapshots with
/// t in [t0, t1]; the exponential decay rate of that macroscopic mode.
double fit_mode_decay(const Trajectory& trajectory, const ToothGeometry& geom, int k, double t0, double t1);

/// Degree-2p interpolant of the macro values, evaluated at micro points of
/// tooth j (used to measure how quickly in-tooth fields become smooth).
std::vector<double> macro_interpolant_in_tooth(std::span<const double> macro_values, const ToothGeometry& geom, int p, int j);

}  // namespace gaptooth
