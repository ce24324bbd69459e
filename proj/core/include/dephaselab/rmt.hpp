#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

/// Random level environments: ensemble sampling, spacing statistics, the
/// kernel estimator of the spectral function R(w) and its small-w rate.
namespace dephaselab::rmt {

enum class LevelKind {
    PoissonSpacings,  ///< i.i.d. exponential spacings
    GOEMatrix,        ///< real symmetric Gaussian matrices, unfolded
    GUEMatrix,        ///< complex Hermitian Gaussian matrices, unfolded
    SurmiseSpacings,  ///< i.i.d. Wigner-surmise spacings for beta in {1, 2, 4}
};

std::string_view to_string(LevelKind kind);

struct LevelEnsemble {
    LevelKind kind = LevelKind::PoissonSpacings;
    std::size_t levels = 0;  ///< M
    double delta = 1.0;      ///< target mean spacing
    int beta = 1;            ///< surmise index; ignored by the other kinds

    /// Throws std::invalid_argument on delta <= 0, M < 2 (M < 16 for the
    /// matrix kinds) or an unsupported beta.
    void validate() const;
};

struct LevelSet {
    Eigen::VectorXd levels;  ///< strictly ascending, first level at 0
    LevelEnsemble ensemble;
    std::uint64_t seed = 0;

    std::vector<double> spacings() const;
    double mean_spacing() const;
};

/// Poisson and surmise kinds cumulate i.i.d. spacings of mean delta. Matrix
/// kinds diagonalize a 2M x 2M Gaussian matrix, keep the central M levels,
/// unfold them with a degree-7 fit of the cumulative level count, and rescale
/// to mean spacing exactly delta.
LevelSet sample_levels(const LevelEnsemble& ens, std::uint64_t seed);

enum class SpacingLaw { Poisson, WignerSurmise };

/// Spacing density in units of the mean spacing: e^{-s}, or the Wigner
/// surmise for beta in {1, 2, 4}. Zero for s < 0.
double spacing_pdf(SpacingLaw law, int beta, double s);
double spacing_cdf(SpacingLaw law, int beta, double s);

/// The law a level kind is compared against: Poisson for PoissonSpacings,
/// the surmise with beta = 1 (GOE), 2 (GUE) or ens.beta otherwise.
SpacingLaw reference_law(const LevelEnsemble& ens);
int reference_beta(const LevelEnsemble& ens);

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `spacings` (in units of the mean spacing) and the reference law.
double ks_statistic(std::span<const double> spacings, SpacingLaw law, int beta);

/// Hermitian, traceless coupling matrix in the level eigenbasis.
class CouplingMatrix {
public:
    /// Throws std::invalid_argument unless Q = Q^+ (1e-12) and |Tr Q| <= 1e-10.
    explicit CouplingMatrix(Eigen::MatrixXcd q);

    const Eigen::MatrixXcd& matrix() const noexcept { return q_; }
    Eigen::Index size() const noexcept { return q_.rows(); }
    /// Mean of |Q_mm'|^2 over m != m'.
    double mean_offdiagonal_sq() const;

private:
    Eigen::MatrixXcd q_;
};

struct CouplingOptions {
    /// Off-diagonal |Q_mm'|^2 has mean qbar_sq (real and imaginary parts each
    /// of variance qbar_sq / 2); the diagonal is real with variance qbar_sq.
    double qbar_sq = 1.0;
    /// Drop the diagonal entirely (a purely inelastic coupling).
    bool zero_diagonal = false;
};

CouplingMatrix sample_coupling(std::size_t m, std::uint64_t seed, const CouplingOptions& options = {});

enum class PairSelection {
    AllPairs,         ///< every m != m'
    NearestNeighbor,  ///< only adjacent levels |m - m'| = 1
};

struct Realization {
    LevelSet levels;
    CouplingMatrix coupling;
};

struct EstimatorOptions {
    double bandwidth = 0.05;  ///< kernel width in units of frequency
    PairSelection pairs = PairSelection::AllPairs;
    std::size_t bootstrap_replicates = 200;
    std::uint64_t bootstrap_seed = 0;
    int threads = 1;
};

inline constexpr std::size_t kMinRealizations = 20;

struct SpectralEstimate {
    std::vector<double> omega_grid;
    std::vector<double> r_hat;
    std::vector<double> standard_error;  ///< bootstrap standard errors
    double bandwidth = 0.0;
    std::size_t samples = 0;
    /// Per-realization curves, samples x grid.
    Eigen::MatrixXd per_realization;
    /// Realization indices drawn by each bootstrap replicate.
    std::vector<std::vector<std::size_t>> bootstrap_draws;
};

/// R(w) = (pi / M) sum_{m != m'} |Q_mm'|^2 K(e_m - e_m' - w) with a normalized
/// Gaussian kernel of width bandwidth, averaged over realizations.
/// Throws InsufficientSamples below kMinRealizations.
SpectralEstimate estimate_spectral_function(std::span<const Realization> ensemble,
                                            std::span<const double> omega_grid,
                                            const EstimatorOptions& options);

struct BathSpec {
    LevelEnsemble levels;
    CouplingOptions coupling;
};

/// Same estimator with realizations drawn on the fly: realization r uses
/// levels seeded by derive_seed(seed, levels, r) and couplings by
/// derive_seed(seed, coupling, r).
SpectralEstimate estimate_spectral_function(const BathSpec& bath, std::size_t realizations,
                                            std::uint64_t seed, std::span<const double> omega_grid,
                                            const EstimatorOptions& options);

/// Single-realization curve (no averaging, no error bars).
std::vector<double> spectral_curve(const LevelSet& levels, const CouplingMatrix& q,
                                   std::span<const double> omega_grid, double bandwidth,
                                   PairSelection pairs = PairSelection::AllPairs);

/// pi qbar_sq p(w / delta) / delta.
double surmise_prediction(SpacingLaw law, int beta, double qbar_sq, double omega, double delta);

struct RateEstimate {
    double gamma = 0.0;  ///< (1/2) intercept, clamped at 0
    double raw_gamma = 0.0;
    double standard_error = 0.0;
    double window_low = 0.0;
    double window_high = 0.0;
    bool negative_intercept = false;
};

/// Fits a quadratic in w to R on [bandwidth, 10 bandwidth] and returns half
/// its intercept, with the bootstrap spread of the same fit as error.
/// Throws InsufficientSamples when the window holds fewer than 4 grid points.
RateEstimate rate_estimate(const SpectralEstimate& est);

}  // namespace dephaselab::rmt
