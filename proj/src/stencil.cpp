#include "gaptooth/stencil.hpp"

#include "gaptooth/errors.hpp"

#include <boost/rational.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

namespace gaptooth {

namespace {

using Rational = boost::rational<std::int64_t>;

// Polynomial in the edge fraction s with exact coefficients, lowest power first.
using Poly = std::vector<Rational>;

Poly multiply(const Poly& a, const Poly& b) {
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly derivative(const Poly& a) {
    if (a.size() <= 1) return Poly{Rational(0)};
    Poly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) out[i - 1] = a[i] * static_cast<std::int64_t>(i);
    return out;
}

std::int64_t factorial(int n) {
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

std::int64_t binomial(int n, int k) {
    std::int64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// Coefficient of the q-th term of the central-difference series for E^s:
//   q = 2k   : s^2 (s^2-1)...(s^2-(k-1)^2) / (2k)!      multiplies delta^{2k}
//   q = 2k-1 : s   (s^2-1)...(s^2-(k-1)^2) / (2k-1)!    multiplies mu delta^{2k-1}
Poly series_coefficient(int q) {
    if (q == 0) return Poly{Rational(1)};
    const int k = (q + 1) / 2;
    Poly c = (q % 2 == 0) ? Poly{Rational(0), Rational(0), Rational(1)} : Poly{Rational(0), Rational(1)};
    for (int i = 1; i < k; ++i) c = multiply(c, Poly{Rational(-i * i), Rational(0), Rational(1)});
    const Rational inv(1, factorial(q));
    for (auto& x : c) x *= inv;
    return c;
}

// The operator delta^q (q even) or mu delta^q (q odd) spread onto integer
// offsets -p..p; entry [k + p].
std::vector<Rational> operator_offsets(int q, int p) {
    std::vector<Rational> w(static_cast<std::size_t>(2 * p + 1), Rational(0));
    if (q == 0) {
        w[static_cast<std::size_t>(p)] = Rational(1);
        return w;
    }
    for (int j = 0; j <= q; ++j) {
        const std::int64_t c = ((j % 2) ? -1 : 1) * binomial(q, j);
        if (q % 2 == 0) {
            w[static_cast<std::size_t>(q / 2 - j + p)] += c;
        } else {
            // delta^q has half-integer offsets (q/2 - j); mu averages the two neighbours.
            w[static_cast<std::size_t>((q + 1) / 2 - j + p)] += Rational(c, 2);
            w[static_cast<std::size_t>((q - 1) / 2 - j + p)] += Rational(c, 2);
        }
    }
    return w;
}

// weights[k + p] as exact polynomials in s for the E^s series truncated after delta^{2p}.
std::vector<Poly> build_interp_polys(int p) {
    std::vector<Poly> polys(static_cast<std::size_t>(2 * p + 1), Poly{Rational(0)});
    for (int q = 0; q <= 2 * p; ++q) {
        const Poly coeff = series_coefficient(q);
        const auto offs = operator_offsets(q, p);
        for (std::size_t k = 0; k < offs.size(); ++k) {
            if (offs[k] == Rational(0)) continue;
            Poly& target = polys[k];
            if (target.size() < coeff.size()) target.resize(coeff.size(), Rational(0));
            for (std::size_t d = 0; d < coeff.size(); ++d) target[d] += coeff[d] * offs[k];
        }
    }
    return polys;
}

// Exact tables converted to double once, for p = 1..kMaxHalfWidth.
struct PolyTables {
    std::array<std::vector<std::vector<double>>, kMaxHalfWidth + 1> value;
    std::array<std::vector<std::vector<double>>, kMaxHalfWidth + 1> slope;
};

std::vector<double> to_double(const Poly& poly) {
    std::vector<double> out;
    out.reserve(poly.size());
    for (const auto& c : poly) out.push_back(boost::rational_cast<double>(c));
    return out;
}

const PolyTables& tables() {
    static const PolyTables t = [] {
        PolyTables out;
        for (int p = 1; p <= kMaxHalfWidth; ++p) {
            for (const Poly& poly : build_interp_polys(p)) {
                out.value[p].push_back(to_double(poly));
                // H d/dx E^s = d/ds E^s, so the slope weights are the s-derivatives.
                out.slope[p].push_back(to_double(derivative(poly)));
            }
        }
        return out;
    }();
    return t;
}

double horner(const std::vector<double>& c, double s) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
    return acc;
}

void check_args(double r, int p) {
    if (!(r >= 0.0 && r < 0.5)) throw ConfigError("r", "must lie in [0, 0.5), got " + std::to_string(r));
    if (p < 1 || p > kMaxHalfWidth)
        throw ConfigError("half_width", "must lie in [1, " + std::to_string(kMaxHalfWidth) + "], got " + std::to_string(p));
}

StencilWeights evaluate(const std::vector<std::vector<double>>& polys, double r, int p, Side side, WeightKind kind) {
    const double s = side == Side::Right ? r : -r;
    StencilWeights w;
    w.side = side;
    w.half_width = p;
    w.kind = kind;
    w.weights.reserve(polys.size());
    for (const auto& poly : polys) w.weights.push_back(horner(poly, s));
    return w;
}

}  // namespace

double StencilWeights::sum() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

StencilWeights interp_weights(double r, int p, Side side) {
    check_args(r, p);
    return evaluate(tables().value[p], r, p, side, WeightKind::Value);
}

StencilWeights deriv_weights(double r, int p, Side side) {
    check_args(r, p);
    return evaluate(tables().slope[p], r, p, side, WeightKind::DerivativeOverH);
}

void TbcSpec::validate() const {
    if (order % 2 != 0 || order < 2 || order > 2 * kMaxHalfWidth)
        throw ConfigError("tbc.order", "must be one of 2, 4, 6, 8, got " + std::to_string(order));
    if (const auto* mixed = std::get_if<Mixed>(&family)) {
        if (mixed->a == 0.0 && mixed->b == 0.0) throw ConfigError("tbc.a", "mixed TBC needs (a, b) != (0, 0)");
        if (!std::isfinite(mixed->a) || !std::isfinite(mixed->b)) throw ConfigError("tbc.a", "must be finite");
    }
    if (const auto* two = std::get_if<TwoPoint>(&family); two && !std::isfinite(two->beta))
        throw ConfigError("tbc.beta", "must be finite");
}

EdgeCondition tbc_weights(const TbcSpec& spec, double r, double r_prime, double H, Side side) {
    spec.validate();
    const int p = spec.half_width();
    EdgeCondition out;
    out.side = side;
    out.half_width = p;

    std::visit(
        [&](const auto& family) {
            using F = std::decay_t<decltype(family)>;
            if constexpr (std::is_same_v<F, Dirichlet>) {
                out.weights = interp_weights(r, p, side).weights;
                out.combination = MicroCombination::EdgeValue;
            } else if constexpr (std::is_same_v<F, Mixed>) {
                if (!(H > 0.0)) throw ConfigError("H", "macro spacing must be positive");
                const auto value = interp_weights(r, p, side);
                const auto slope = deriv_weights(r, p, side);
                // a v + b v_x on the right edge, a v - b v_x on the left.
                const double sign = side == Side::Right ? 1.0 : -1.0;
                out.weights.resize(value.weights.size());
                for (std::size_t k = 0; k < out.weights.size(); ++k)
                    out.weights[k] = family.a * value.weights[k] + sign * family.b / H * slope.weights[k];
                out.combination = MicroCombination::ValueAndSlope;
            } else {
                if (!(r_prime > 0.0 && r_prime < r))
                    throw GeometryError("r_prime", "penultimate offset must satisfy 0 < r' < r (tooth too narrow or n too small), got r'=" +
                                                       std::to_string(r_prime) + ", r=" + std::to_string(r));
                const auto edge = interp_weights(r, p, side);
                const auto inner = interp_weights(r_prime, p, side);
                out.weights.resize(edge.weights.size());
                for (std::size_t k = 0; k < out.weights.size(); ++k)
                    out.weights[k] = edge.weights[k] + family.beta * inner.weights[k];
                out.combination = MicroCombination::EdgePlusPenultimate;
            }
        },
        spec.family);
    return out;
}

}  // namespace gaptooth
