#pragma once

#include "gaptooth/coupling.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace gaptooth {

/// Step size used for spectra when the config leaves dt unset: eta^2 / 8.
/// Keeps every micro multiplier in (0, 1] and makes dt scale with eta^2,
/// so internal-mode growth rates scale exactly with m^2 at fixed n and r.
double spectral_dt(const ToothGeometry& geom, const PdeChoice& pde);

/// Config copy with dt resolved for spectral work (explicit dt is kept).
GapToothConfig with_spectral_dt(GapToothConfig config);

/// Dense mn x mn matrix of the one-microstep map about the zero state.
/// Column k is Phi(e_k) - Phi(0). For Burgers the advective term is dropped,
/// which is the exact Jacobian at 0. `threads` > 1 assembles columns in
/// parallel; column placement is deterministic.
/// Throws NonzeroFixedPointError if Phi(0) != 0.
Eigen::MatrixXd linearize_map(const GapToothConfig& config, int threads = 1);

/// A pair of nearly degenerate macroscopic growth rates (sine/cosine of one
/// wavenumber), reported by their mean.
struct ModeGroup {
    std::optional<double> value;  ///< empty: not enough macro modes ("n/a")
    double gap = 0.0;             ///< |difference| / |mean| of the pair
    bool single = false;          ///< Nyquist mode with no partner (m = 2k)
};

struct SpectrumReport {
    std::vector<std::complex<double>> growth_rates;  ///< sorted by real part, descending
    std::vector<bool> log_branch_unreliable;         ///< multiplier with Re <= 0: fast mode, log branch unreliable
    int m = 0;
    double dt_used = 0.0;

    std::complex<double> mode1;
    ModeGroup pair23;
    ModeGroup pair45;
    ModeGroup pair67;
    double leading_internal = 0.0;  ///< real part of mode m+1

    std::optional<GapToothConfig> metadata;
    bool wrap_degenerate = false;

    std::span<const std::complex<double>> macro_modes() const {
        return {growth_rates.data(), static_cast<std::size_t>(m)};
    }
    /// Group value for wavenumber k (1, 2, 3, ...).
    ModeGroup pair(int k) const;
    int unreliable_count() const;
};

/// Eigenvalues mu of the map converted to lambda = log(mu) / dt, sorted and
/// grouped into m macroscopic modes followed by internal modes.
SpectrumReport growth_rates(const Eigen::MatrixXd& map, double dt, int m);

/// linearize_map + growth_rates for one configuration (dt via with_spectral_dt).
SpectrumReport compute_spectrum(const GapToothConfig& config, int threads = 1);

struct ConvergenceRow {
    int m = 0;
    std::complex<double> mode1;
    std::vector<std::optional<double>> errors;          ///< |pair_k + k^2| for k = 1..3
    std::vector<std::optional<double>> observed_order;  ///< log2(err(m_prev)/err(m)); empty on first row
    double leading_internal = 0.0;
    bool wrap_degenerate = false;
};

/// Spectra over a doubling sequence of m; errors against the exact -k^2.
std::vector<ConvergenceRow> convergence_study(const GapToothConfig& base, const std::vector<int>& m_list, int threads = 1);

struct ResolutionRow {
    int n = 0;
    std::complex<double> mode1;
    ModeGroup pair23;
    ModeGroup pair45;
    ModeGroup pair67;
};

struct ResolutionStudy {
    std::vector<ResolutionRow> rows;
    /// (p_{i+1} - p_i) / (p_{i+2} - p_{i+1}) for pair23; ~4 for O(eta^2) error when n-1 doubles.
    std::vector<double> richardson_ratios;
    /// max |pair23(n) - pair23(n0)| / |pair23(n0)| over the sweep.
    double max_relative_variation = 0.0;
};

/// Spectra over a list of odd n; dt is re-derived for every n unless set explicitly.
ResolutionStudy micro_resolution_study(const GapToothConfig& config, const std::vector<int>& n_list, int threads = 1);

}  // namespace gaptooth
