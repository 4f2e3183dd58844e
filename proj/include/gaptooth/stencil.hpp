#pragma once

#include <variant>
#include <vector>

namespace gaptooth {

/// Which tooth edge a stencil evaluates at: Left is X_j - rH, Right is X_j + rH.
enum class Side { Left, Right };

enum class WeightKind {
    Value,            ///< interpolated field value
    DerivativeOverH,  ///< H times the gradient; divide by H to get d/dx
};

/// Weights on macro offsets -p..p (relative to the tooth's own index) that
/// evaluate an operator at one tooth edge from coarse grid values.
struct StencilWeights {
    Side side = Side::Right;
    int half_width = 1;
    WeightKind kind = WeightKind::Value;
    std::vector<double> weights;  // weights[k + p] multiplies U_{j+k}

    double at(int offset) const { return weights[static_cast<std::size_t>(offset + half_width)]; }
    double sum() const;
};

inline constexpr int kMaxHalfWidth = 4;

/// Weights of the truncated operator series for E^{+r} (Right) or E^{-r}
/// (Left), kept through the delta^{2p} term. Identical to degree-2p
/// polynomial interpolation through the nodes -p..p evaluated at +-r.
/// Accepts r in [0, 0.5); r = 0 gives the identity.
StencilWeights interp_weights(double r, int p, Side side);

/// Weights approximating H d/dx at offset +-r, exact for polynomials of
/// degree <= 2p. Accepts r in [0, 0.5).
StencilWeights deriv_weights(double r, int p, Side side);

// Tooth boundary condition families.
struct Dirichlet {};
struct Mixed {
    double a = 1.0;
    double b = 0.0;
};
struct TwoPoint {
    double beta = 1.0;
};
using TbcFamily = std::variant<Dirichlet, Mixed, TwoPoint>;

/// Boundary-condition family plus macroscale consistency order (2, 4, 6 or 8).
struct TbcSpec {
    TbcFamily family = Dirichlet{};
    int order = 4;

    int half_width() const { return order / 2; }
    /// Throws ConfigError on an odd or out-of-range order, or a = b = 0.
    void validate() const;
};

/// The micro combination a TBC sets equal to its interpolated target.
enum class MicroCombination {
    EdgeValue,            ///< v at the edge point
    ValueAndSlope,        ///< a v -+ b dv/dx at the edge (outward sign)
    EdgePlusPenultimate,  ///< v_edge + beta v_penultimate
};

/// Macro-offset weights g with target = sum_k g_k U_{j+k}, for one edge.
struct EdgeCondition {
    Side side = Side::Right;
    int half_width = 1;
    std::vector<double> weights;
    MicroCombination combination = MicroCombination::EdgeValue;

    double at(int offset) const { return weights[static_cast<std::size_t>(offset + half_width)]; }
};

/// Combine interpolation and derivative stencils into the target weights a
/// TBC family needs. `r_prime` (only used by TwoPoint) is the offset fraction
/// of the penultimate micro point; `H` scales the derivative part of Mixed.
EdgeCondition tbc_weights(const TbcSpec& spec, double r, double r_prime, double H, Side side);

}  // namespace gaptooth
