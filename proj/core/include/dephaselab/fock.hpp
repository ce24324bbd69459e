#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dephaselab/linalg.hpp"
#include "dephaselab/specfun.hpp"

/// Brute-force oracle for the dephasing spin-boson model: a finite set of
/// bosonic modes, each truncated at n_max quanta, propagated exactly.
///
/// Basis conventions: spin index 0 is psi_+ (sigma_3 = +1), 1 is psi_-. A bath
/// basis state is an occupation vector (n_0, ..., n_{K-1}) with index
/// sum_j n_j (n_max + 1)^j, so mode 0 varies fastest. A full state vector is
/// [bath block for psi_+ ; bath block for psi_-].
namespace dephaselab::fock {

using Complex = std::complex<double>;

inline constexpr std::size_t kDimensionCap = 200000;
/// Largest bath block that is ever materialized as a dense matrix.
inline constexpr std::size_t kDenseBlockCap = 6000;
inline constexpr double kLeakThreshold = 1e-6;

struct Mode {
    double omega = 0.0;
    Complex g;
};

class DiscretizedBath {
public:
    /// Throws std::invalid_argument unless omegas are positive and strictly increasing.
    explicit DiscretizedBath(std::vector<Mode> modes);

    std::size_t size() const noexcept { return modes_.size(); }
    const std::vector<Mode>& modes() const noexcept { return modes_; }
    const Mode& operator[](std::size_t j) const { return modes_[j]; }

    /// sum_j |g_j|^2
    double norm_sq() const;
    /// sum_j omega_j |g_j|^2
    double cloud_energy() const;
    /// 8 sum_j |g_j|^2 sin^2(omega_j t / 2) = 2 sum_j |g_j|^2 |1 - exp(-i omega_j t)|^2
    double decoherence_exponent(double t) const;

private:
    std::vector<Mode> modes_;
};

enum class Scheme {
    /// Uniform panels with nodes at the midpoints and weights equal to the
    /// panel integral of |g|^2 (energy-matched on a divergent first panel).
    MidpointUniform,
    /// Gauss rule for the weight |g|^2 (kappa > 0) or w |g|^2 (kappa <= 0);
    /// reproduces ||g||^2 or E_g exactly.
    GaussNodes,
};

/// Real couplings g_j >= 0. Throws UnsupportedRegime for kappa <= -1.
DiscretizedBath discretize(const specfun::FormFactor& ff, std::size_t modes, Scheme scheme);

class TruncatedFockSpace {
public:
    /// Throws DimensionCap when 2 (n_max + 1)^K exceeds kDimensionCap.
    TruncatedFockSpace(DiscretizedBath bath, int n_max);

    const DiscretizedBath& bath() const noexcept { return bath_; }
    int n_max() const noexcept { return n_max_; }
    std::size_t modes() const noexcept { return bath_.size(); }
    std::size_t bath_dimension() const noexcept { return bath_dim_; }
    std::size_t dimension() const noexcept { return 2 * bath_dim_; }

    std::vector<int> occupations(std::size_t index) const;
    std::size_t index(std::span<const int> occupations) const;

    /// Per bath basis state: true when some mode sits at n_max.
    const std::vector<bool>& edge_mask() const noexcept { return edge_; }

private:
    DiscretizedBath bath_;
    int n_max_;
    std::size_t bath_dim_;
    std::vector<bool> edge_;
};

/// Smallest n_max with max_j |g_j|^2 <= n_max / 25 whose Poisson tail at the
/// largest displacement 2|g_j| stays below 1e-10.
int recommended_n_max(const DiscretizedBath& bath);

/// H_+ (sign = +1) or H_- (sign = -1) on the bath block:
/// sum_j w_j a_j^+ a_j +- sum_j w_j (conj(g_j) a_j + g_j a_j^+).
linalg::HermitianMatrix build_block(const TruncatedFockSpace& space, int sign);

/// diag[H_+, H_-] on the full spin (x) bath space.
linalg::HermitianMatrix build_hamiltonian(const TruncatedFockSpace& space);

struct CoherentState {
    Eigen::VectorXcd vector;
    /// 1 - (squared norm before renormalization)
    double leakage = 0.0;
};

/// Product of truncated coherent states with amplitudes alpha_j, renormalized.
/// Throws TruncationLeak when the leakage exceeds `threshold`.
CoherentState coherent_vector(const TruncatedFockSpace& space, std::span<const Complex> alpha,
                              double threshold = kLeakThreshold);

struct OverlapCheck {
    double numeric = 0.0;      ///< |<coh(f), coh(h)>|^2 on the truncated space
    double closed_form = 0.0;  ///< exp(-||f - h||^2)
    double bound = 0.0;        ///< exp(-(||f|| - ||h||)^2)
    double leakage = 0.0;      ///< larger of the two truncation leakages
};

OverlapCheck overlap_check(const TruncatedFockSpace& space, std::span<const Complex> f,
                           std::span<const Complex> h, double threshold = kLeakThreshold);

/// Truncated single-mode displacement exp(alpha a^+ - conj(alpha) a).
Eigen::MatrixXcd displacement_operator(int n_max, Complex alpha);

/// Weyl operator W(f) = exp(a(f) - a^+(f)) = prod_j D(-f_j) on the bath.
Eigen::MatrixXcd weyl_operator(const TruncatedFockSpace& space, std::span<const Complex> f);

/// Reduced 2x2 density matrix of the spin in the (psi_+, psi_-) basis.
class QubitState {
public:
    /// Throws std::invalid_argument unless Hermitian, unit trace (1e-10) and
    /// positive semidefinite (eigenvalues >= -1e-10).
    explicit QubitState(const Eigen::Matrix2cd& rho);

    const Eigen::Matrix2cd& matrix() const noexcept { return rho_; }
    Complex operator()(int i, int j) const { return rho_(i, j); }
    double purity() const;

private:
    Eigen::Matrix2cd rho_;
};

/// Spin (x) bath vector (alpha_+ psi_+ + alpha_- psi_-) (x) vacuum.
Eigen::VectorXcd initial_state(const TruncatedFockSpace& space, Complex alpha_plus, Complex alpha_minus);

/// Partial trace over the bath of a full state vector.
QubitState reduce(const TruncatedFockSpace& space, const Eigen::VectorXcd& state);

/// <state| diag[H_+, H_-] |state>.
double energy_expectation(const TruncatedFockSpace& space, const Eigen::VectorXcd& state);

struct OracleRun {
    std::vector<double> times;
    std::vector<QubitState> states;
    std::vector<double> abs_coherence;    ///< |rho_+-(t)|
    std::vector<double> gamma_discrete;   ///< discrete closed form 2 sum |g_j|^2 |1 - e^{-i w_j t}|^2
    std::vector<double> energy;           ///< <Psi(t)|H|Psi(t)>
    std::vector<double> leakage;          ///< occupation mass at n_max, max over both blocks
    /// gamma_t = -ln(|rho_+-| / |alpha_+ alpha_-|); absent without superposition.
    std::optional<specfun::DecoherenceCurve> curve;
    double max_leakage = 0.0;
    double max_diagonal_deviation = 0.0;  ///< max_t |rho_++(t) - |alpha_+|^2|
    double max_energy_drift = 0.0;        ///< max_t |E(t) - E(0)|
};

/// Evolves (alpha_+ psi_+ + alpha_- psi_-) (x) vacuum under diag[H_+, H_-],
/// one eigendecomposition per block, and reduces to the spin at each time.
/// Requires |alpha_+|^2 + |alpha_-|^2 = 1 within 1e-12. Throws TruncationLeak
/// when the mass at n_max exceeds `threshold` at any time.
OracleRun propagate_and_reduce(const TruncatedFockSpace& space, Complex alpha_plus, Complex alpha_minus,
                               std::span<const double> times, double threshold = kLeakThreshold);

}  // namespace dephaselab::fock
