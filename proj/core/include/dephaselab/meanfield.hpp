#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dephaselab/rmt.hpp"

/// Finite-N simulation of a qubit coupled to N independent M-level
/// subsystems through (1/sqrt N) sigma_3 (x) sum_k Q^(k), at zero tunneling.
namespace dephaselab::meanfield {

using Complex = std::complex<double>;

inline constexpr std::size_t kMaxLevels = 512;
inline constexpr std::size_t kMaxSubsystems = 64;
/// Largest M^N handled by the full-space reference propagation.
inline constexpr std::size_t kFullSpaceCap = 4096;

struct Subsystem {
    rmt::LevelSet levels;
    rmt::CouplingMatrix coupling;
};

class MeanFieldBath {
public:
    /// Throws std::invalid_argument on an empty bath or mismatched M, and
    /// DimensionCap beyond M = 512 or N = 64.
    explicit MeanFieldBath(std::vector<Subsystem> subsystems, bool identical_copies = false);

    /// N copies of one subsystem.
    static MeanFieldBath copies(Subsystem subsystem, std::size_t n);

    std::size_t size() const noexcept { return n_; }
    std::size_t levels() const noexcept { return m_; }
    bool identical_copies() const noexcept { return identical_; }
    /// Subsystem k; with identical copies every k maps to the single stored one.
    const Subsystem& operator[](std::size_t k) const { return subsystems_[identical_ ? 0 : k]; }

private:
    std::vector<Subsystem> subsystems_;
    std::size_t n_ = 0;
    std::size_t m_ = 0;
    bool identical_ = false;
};

/// Gamma_N(t) = prod_k Tr[(I/M) exp(i h_-^(k) t) exp(-i h_+^(k) t)] with
/// h_+-^(k) = diag(e^(k)) +- Q^(k)/sqrt(N); rho_+-(t) = alpha_+ conj(alpha_-) Gamma_N(t).
/// The product runs over k in ascending order.
std::vector<Complex> dephasing_factor(const MeanFieldBath& bath, std::span<const double> times, int threads = 1);

/// The same quantity from exp(+-i H_+- t) on the full M^N-dimensional
/// product space. Throws DimensionCap when M^N exceeds kFullSpaceCap.
std::vector<Complex> dephasing_factor_full_space(const MeanFieldBath& bath, std::span<const double> times);

/// Second-order cumulant of -ln|Gamma_N(t)|:
/// sum_k (2 / (N M)) sum_{m, m'} |Q_mm'|^2 4 sin^2(d t / 2) / d^2, d = e_m - e_m'.
std::vector<double> second_order_exponent(const MeanFieldBath& bath, std::span<const double> times);

struct CompareConfig {
    std::size_t n = 32;
    std::size_t m = 64;
    double delta = 1.0;
    double qbar_sq = 0.01;
    bool zero_diagonal = true;
    std::size_t realizations = 20;
    std::uint64_t seed = 0;
    std::vector<double> times;
    int threads = 1;
};

struct EnsembleCurve {
    rmt::LevelKind kind = rmt::LevelKind::PoissonSpacings;
    std::vector<double> abs_gamma;       ///< ensemble mean of |Gamma_N(t)|
    std::vector<double> standard_error;  ///< standard error of that mean
    double long_time_mean = 0.0;         ///< mean over realizations of the windowed average
    double long_time_stderr = 0.0;
};

struct Comparison {
    std::vector<double> times;
    EnsembleCurve poisson;
    EnsembleCurve goe;
    double window_low = 0.0;   ///< final decade of the time grid
    double window_high = 0.0;
    std::size_t window_points = 0;
    /// goe.long_time_mean - poisson.long_time_mean in units of the combined error.
    double separation = 0.0;
    bool goe_exceeds_poisson = false;  ///< separation > 2
};

/// Paired Poisson and GOE baths with identically distributed couplings.
/// Realization r, subsystem k draws levels from derive_seed(seed, levels, r N + k)
/// and couplings from derive_seed(seed, coupling, r N + k), the same for both
/// ensembles. Throws InsufficientSamples for fewer than two realizations or
/// an empty window.
Comparison compare_ensembles(const CompareConfig& config);

/// Indices of the grid points in [t_max / 10, t_max].
std::vector<std::size_t> long_time_window(std::span<const double> times);

}  // namespace dephaselab::meanfield
