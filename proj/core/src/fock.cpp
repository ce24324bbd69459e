#include "dephaselab/fock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "dephaselab/error.hpp"
#include "dephaselab/quad.hpp"
#include "detail/compensated_sum.hpp"

namespace dephaselab::fock {
namespace {

using specfun::Cutoff;
using specfun::FormFactor;

// int_a^b |g|^2 w^shift dw
double panel_integral(const FormFactor& ff, double a, double b, int shift) {
    const double p = ff.kappa() - 1.0 + shift;
    if (ff.cutoff() == Cutoff::Hard) {
        if (p == -1.0) return ff.lambda() * std::log(b / a);
        return ff.lambda() * (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
    }
    quad::IntegrandSpec spec;
    spec.evaluator = [&ff, shift](double w) { return ff.coupling_sq(w) * std::pow(w, shift); };
    spec.lower = a;
    spec.upper = b;
    if (a == 0.0) spec.endpoint_exponent = p;
    const auto r = quad::integrate(spec, 1e-12);
    if (!r.converged) {
        throw ToleranceNotMet("discretize: panel weight did not converge", r.value, r.error_estimate);
    }
    return r.value;
}

std::vector<Mode> midpoint_modes(const FormFactor& ff, std::size_t k) {
    const double end = ff.support_end();
    const double h = end / static_cast<double>(k);
    std::vector<Mode> modes;
    modes.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        const double a = h * static_cast<double>(j);
        const double b = (j + 1 == k) ? end : a + h;
        const double w = 0.5 * (a + b);
        double weight = 0.0;
        if (j == 0 && ff.kappa() <= 0.0) {
            weight = panel_integral(ff, a, b, 1) / w;
        } else {
            weight = panel_integral(ff, a, b, 0);
        }
        modes.push_back({w, Complex(std::sqrt(weight), 0.0)});
    }
    return modes;
}

// Gauss rule for x^b on [0, 1] (Hard) or x^b e^{-x} on [0, inf) (Exponential),
// by Golub-Welsch. Returns nodes and normalized weights.
std::pair<Eigen::VectorXd, Eigen::VectorXd> gauss_rule(Cutoff cutoff, double b, std::size_t k) {
    const auto n = static_cast<Eigen::Index>(k);
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 1));
    sub.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = static_cast<double>(i);
        if (cutoff == Cutoff::Hard) {
            // Jacobi (alpha = 0, beta = b) on [-1, 1], later mapped to [0, 1]
            const double s = 2.0 * m + b;
            diag(i) = (i == 0) ? b / (b + 2.0) : (b * b) / (s * (s + 2.0));
            if (i > 0) {
                const double beta = 4.0 * m * m * (m + b) * (m + b) / (s * s * (s + 1.0) * (s - 1.0));
                sub(i - 1) = std::sqrt(beta);
            }
        } else {
            diag(i) = 2.0 * m + b + 1.0;
            if (i > 0) sub(i - 1) = std::sqrt(m * (m + b));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw ConvergenceFailure("discretize: Gauss rule eigensolver failed");
    Eigen::VectorXd nodes = solver.eigenvalues();
    Eigen::VectorXd weights = solver.eigenvectors().row(0).transpose().cwiseAbs2();
    if (cutoff == Cutoff::Hard) nodes = (nodes.array() + 1.0) * 0.5;
    weights /= weights.sum();
    return {nodes, weights};
}

std::vector<Mode> gauss_modes(const FormFactor& ff, std::size_t k) {
    const bool energy_weighted = ff.kappa() <= 0.0;
    const double b = ff.kappa() - 1.0 + (energy_weighted ? 1.0 : 0.0);
    const double wc = ff.omega_c();
    const double total = ff.cutoff() == Cutoff::Hard
                             ? ff.lambda() * std::pow(wc, b + 1.0) / (b + 1.0)
                             : ff.lambda() * std::pow(wc, b + 1.0) * std::tgamma(b + 1.0);
    const auto [x, v] = gauss_rule(ff.cutoff(), b, k);
    std::vector<Mode> modes;
    modes.reserve(k);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double w = wc * x(j);
        double weight = total * v(j);
        if (energy_weighted) weight /= w;
        modes.push_back({w, Complex(std::sqrt(weight), 0.0)});
    }
    return modes;
}

std::size_t checked_power(std::size_t base, std::size_t exponent, std::size_t cap) {
    std::size_t result = 1;
    for (std::size_t i = 0; i < exponent; ++i) {
        if (result > cap / base) return cap + 1;
        result *= base;
    }
    return result;
}

// Per-mode truncated coherent amplitudes; returns the squared norm deficit.
double coherent_amplitudes(int n_max, Complex alpha, std::vector<Complex>& out) {
    out.assign(static_cast<std::size_t>(n_max) + 1, Complex{});
    out[0] = std::exp(-0.5 * std::norm(alpha));
    detail::CompensatedSum mass;
    mass.add(std::norm(out[0]));
    for (int n = 0; n < n_max; ++n) {
        out[n + 1] = out[n] * alpha / std::sqrt(static_cast<double>(n + 1));
        mass.add(std::norm(out[n + 1]));
    }
    return std::max(0.0, 1.0 - mass.result());
}

void require_alpha_size(const TruncatedFockSpace& space, std::span<const Complex> alpha) {
    if (alpha.size() != space.modes()) {
        throw std::invalid_argument("one displacement per mode is required");
    }
}

void require_dense(std::size_t dim) {
    if (dim > kDenseBlockCap) {
        throw DimensionCap("dense matrix of dimension " + std::to_string(dim) + " exceeds the cap of " +
                           std::to_string(kDenseBlockCap));
    }
}

double edge_mass(const TruncatedFockSpace& space, const Eigen::VectorXcd& block) {
    const auto& edge = space.edge_mask();
    double mass = 0.0;
    for (Eigen::Index i = 0; i < block.size(); ++i) {
        if (edge[static_cast<std::size_t>(i)]) mass += std::norm(block(i));
    }
    return mass;
}

double block_energy(const linalg::HermitianMatrix& h, const Eigen::VectorXcd& v) {
    return v.dot(h.entries() * v).real();
}

}  // namespace

DiscretizedBath::DiscretizedBath(std::vector<Mode> modes) : modes_(std::move(modes)) {
    if (modes_.empty()) throw std::invalid_argument("DiscretizedBath: at least one mode is required");
    for (std::size_t j = 0; j < modes_.size(); ++j) {
        const Mode& m = modes_[j];
        if (!(m.omega > 0.0) || !std::isfinite(m.omega) || !std::isfinite(std::abs(m.g))) {
            throw std::invalid_argument("DiscretizedBath: frequencies must be positive and couplings finite");
        }
        if (j > 0 && !(m.omega > modes_[j - 1].omega)) {
            throw std::invalid_argument("DiscretizedBath: frequencies must be strictly increasing");
        }
    }
}

double DiscretizedBath::norm_sq() const {
    detail::CompensatedSum s;
    for (const Mode& m : modes_) s.add(std::norm(m.g));
    return s.result();
}

double DiscretizedBath::cloud_energy() const {
    detail::CompensatedSum s;
    for (const Mode& m : modes_) s.add(m.omega * std::norm(m.g));
    return s.result();
}

double DiscretizedBath::decoherence_exponent(double t) const {
    detail::CompensatedSum s;
    for (const Mode& m : modes_) {
        const double h = std::sin(0.5 * m.omega * t);
        s.add(8.0 * std::norm(m.g) * h * h);
    }
    return s.result();
}

DiscretizedBath discretize(const specfun::FormFactor& ff, std::size_t modes, Scheme scheme) {
    if (modes < 1) throw std::invalid_argument("discretize: at least one mode is required");
    if (ff.kappa() <= -1.0) {
        throw UnsupportedRegime("discretize: per-mode weights are infinite for kappa <= -1");
    }
    if (scheme == Scheme::MidpointUniform) return DiscretizedBath(midpoint_modes(ff, modes));
    return DiscretizedBath(gauss_modes(ff, modes));
}

TruncatedFockSpace::TruncatedFockSpace(DiscretizedBath bath, int n_max) : bath_(std::move(bath)), n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("TruncatedFockSpace: n_max must be >= 1");
    const std::size_t levels = static_cast<std::size_t>(n_max) + 1;
    bath_dim_ = checked_power(levels, bath_.size(), kDimensionCap / 2);
    if (bath_dim_ > kDimensionCap / 2) {
        throw DimensionCap("TruncatedFockSpace: 2 (n_max + 1)^K exceeds " + std::to_string(kDimensionCap));
    }
    edge_.assign(bath_dim_, false);
    for (std::size_t i = 0; i < bath_dim_; ++i) {
        std::size_t rest = i;
        for (std::size_t j = 0; j < bath_.size(); ++j) {
            if (rest % levels == static_cast<std::size_t>(n_max)) edge_[i] = true;
            rest /= levels;
        }
    }
}

std::vector<int> TruncatedFockSpace::occupations(std::size_t index) const {
    if (index >= bath_dim_) throw std::out_of_range("TruncatedFockSpace: index out of range");
    const std::size_t levels = static_cast<std::size_t>(n_max_) + 1;
    std::vector<int> n(bath_.size());
    for (auto& nj : n) {
        nj = static_cast<int>(index % levels);
        index /= levels;
    }
    return n;
}

std::size_t TruncatedFockSpace::index(std::span<const int> occupations) const {
    if (occupations.size() != bath_.size()) throw std::invalid_argument("TruncatedFockSpace: wrong mode count");
    const std::size_t levels = static_cast<std::size_t>(n_max_) + 1;
    std::size_t idx = 0;
    for (std::size_t j = occupations.size(); j-- > 0;) {
        if (occupations[j] < 0 || occupations[j] > n_max_) {
            throw std::out_of_range("TruncatedFockSpace: occupation out of range");
        }
        idx = idx * levels + static_cast<std::size_t>(occupations[j]);
    }
    return idx;
}

int recommended_n_max(const DiscretizedBath& bath) {
    double peak = 0.0;
    for (const Mode& m : bath.modes()) peak = std::max(peak, std::norm(m.g));
    const double mean = 4.0 * peak;
    int n = std::max(1, static_cast<int>(std::ceil(25.0 * peak)));
    while (mean > 0.0 && boost::math::gamma_p(static_cast<double>(n), mean) > 1e-10) ++n;
    return n;
}

linalg::HermitianMatrix build_block(const TruncatedFockSpace& space, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("build_block: sign must be +1 or -1");
    const std::size_t dim = space.bath_dimension();
    require_dense(dim);
    const auto n = static_cast<Eigen::Index>(dim);
    const std::size_t levels = static_cast<std::size_t>(space.n_max()) + 1;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t rest = i;
        std::size_t stride = 1;
        double diag = 0.0;
        for (const Mode& m : space.bath().modes()) {
            const std::size_t nj = rest % levels;
            rest /= levels;
            diag += m.omega * static_cast<double>(nj);
            if (nj + 1 < levels) {
                const auto up = static_cast<Eigen::Index>(i + stride);
                const auto at = static_cast<Eigen::Index>(i);
                const Complex elem = static_cast<double>(sign) * m.omega * m.g * std::sqrt(static_cast<double>(nj + 1));
                h(up, at) = elem;
                h(at, up) = std::conj(elem);
            }
            stride *= levels;
        }
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag;
    }
    return linalg::HermitianMatrix(std::move(h));
}

linalg::HermitianMatrix build_hamiltonian(const TruncatedFockSpace& space) {
    require_dense(space.dimension());
    const auto b = static_cast<Eigen::Index>(space.bath_dimension());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * b, 2 * b);
    h.topLeftCorner(b, b) = build_block(space, +1).entries();
    h.bottomRightCorner(b, b) = build_block(space, -1).entries();
    return linalg::HermitianMatrix(std::move(h));
}

CoherentState coherent_vector(const TruncatedFockSpace& space, std::span<const Complex> alpha, double threshold) {
    require_alpha_size(space, alpha);
    const std::size_t k = space.modes();
    std::vector<std::vector<Complex>> amps(k);
    double kept = 1.0;
    for (std::size_t j = 0; j < k; ++j) kept *= 1.0 - coherent_amplitudes(space.n_max(), alpha[j], amps[j]);
    const double leakage = std::max(0.0, 1.0 - kept);
    if (leakage > threshold) {
        throw TruncationLeak("coherent_vector: truncation leakage " + std::to_string(leakage) + " exceeds threshold",
                             leakage);
    }
    const std::size_t levels = static_cast<std::size_t>(space.n_max()) + 1;
    Eigen::VectorXcd v(static_cast<Eigen::Index>(space.bath_dimension()));
    for (std::size_t i = 0; i < space.bath_dimension(); ++i) {
        std::size_t rest = i;
        Complex c(1.0, 0.0);
        for (std::size_t j = 0; j < k; ++j) {
            c *= amps[j][rest % levels];
            rest /= levels;
        }
        v(static_cast<Eigen::Index>(i)) = c;
    }
    v.normalize();
    return {std::move(v), leakage};
}

OverlapCheck overlap_check(const TruncatedFockSpace& space, std::span<const Complex> f,
                           std::span<const Complex> h, double threshold) {
    require_alpha_size(space, f);
    require_alpha_size(space, h);
    const CoherentState cf = coherent_vector(space, f, threshold);
    const CoherentState ch = coherent_vector(space, h, threshold);
    double diff = 0.0;
    double nf = 0.0;
    double nh = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
        diff += std::norm(f[j] - h[j]);
        nf += std::norm(f[j]);
        nh += std::norm(h[j]);
    }
    const double gap = std::sqrt(nf) - std::sqrt(nh);
    OverlapCheck out;
    out.numeric = std::norm(cf.vector.dot(ch.vector));
    out.closed_form = std::exp(-diff);
    out.bound = std::exp(-gap * gap);
    out.leakage = std::max(cf.leakage, ch.leakage);
    return out;
}

Eigen::MatrixXcd displacement_operator(int n_max, Complex alpha) {
    if (n_max < 1) throw std::invalid_argument("displacement_operator: n_max must be >= 1");
    const Eigen::Index n = n_max + 1;
    // i (alpha a^+ - conj(alpha) a) is Hermitian, so D = exp(-i H) with H = that.
    Eigen::MatrixXcd gen = Eigen::MatrixXcd::Zero(n, n);
    const Complex i(0.0, 1.0);
    for (Eigen::Index m = 0; m + 1 < n; ++m) {
        const double s = std::sqrt(static_cast<double>(m + 1));
        gen(m + 1, m) = i * alpha * s;
        gen(m, m + 1) = std::conj(gen(m + 1, m));
    }
    return linalg::Propagator(linalg::HermitianMatrix(std::move(gen))).unitary(1.0);
}

Eigen::MatrixXcd weyl_operator(const TruncatedFockSpace& space, std::span<const Complex> f) {
    require_alpha_size(space, f);
    const std::size_t dim = space.bath_dimension();
    require_dense(dim);
    const std::size_t levels = static_cast<std::size_t>(space.n_max()) + 1;
    std::vector<Eigen::MatrixXcd> factors;
    factors.reserve(f.size());
    for (const Complex& fj : f) factors.push_back(displacement_operator(space.n_max(), -fj));
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd w(n, n);
    for (std::size_t c = 0; c < dim; ++c) {
        for (std::size_t r = 0; r < dim; ++r) {
            std::size_t rr = r;
            std::size_t cc = c;
            Complex v(1.0, 0.0);
            for (const auto& d : factors) {
                v *= d(static_cast<Eigen::Index>(rr % levels), static_cast<Eigen::Index>(cc % levels));
                rr /= levels;
                cc /= levels;
            }
            w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
        }
    }
    return w;
}

QubitState::QubitState(const Eigen::Matrix2cd& rho) : rho_(rho) {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
        throw std::invalid_argument("QubitState: matrix is not Hermitian");
    }
    if (std::abs(rho_.trace() - Complex(1.0, 0.0)) > 1e-10) {
        throw std::invalid_argument("QubitState: trace must be 1");
    }
    const double a = rho_(0, 0).real();
    const double d = rho_(1, 1).real();
    const double lowest = 0.5 * (a + d) - std::hypot(0.5 * (a - d), std::abs(rho_(0, 1)));
    if (lowest < -1e-10) throw std::invalid_argument("QubitState: matrix is not positive semidefinite");
}

double QubitState::purity() const { return (rho_ * rho_).trace().real(); }

Eigen::VectorXcd initial_state(const TruncatedFockSpace& space, Complex alpha_plus, Complex alpha_minus) {
    const auto b = static_cast<Eigen::Index>(space.bath_dimension());
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * b);
    v(0) = alpha_plus;
    v(b) = alpha_minus;
    return v;
}

QubitState reduce(const TruncatedFockSpace& space, const Eigen::VectorXcd& state) {
    const auto b = static_cast<Eigen::Index>(space.bath_dimension());
    if (state.size() != 2 * b) throw std::invalid_argument("reduce: state dimension mismatch");
    const auto plus = state.head(b);
    const auto minus = state.tail(b);
    Eigen::Matrix2cd rho;
    rho(0, 0) = plus.squaredNorm();
    rho(1, 1) = minus.squaredNorm();
    rho(0, 1) = minus.dot(plus);
    rho(1, 0) = std::conj(rho(0, 1));
    return QubitState(rho);
}

double energy_expectation(const TruncatedFockSpace& space, const Eigen::VectorXcd& state) {
    const auto b = static_cast<Eigen::Index>(space.bath_dimension());
    if (state.size() != 2 * b) throw std::invalid_argument("energy_expectation: state dimension mismatch");
    return block_energy(build_block(space, +1), state.head(b)) + block_energy(build_block(space, -1), state.tail(b));
}

OracleRun propagate_and_reduce(const TruncatedFockSpace& space, Complex alpha_plus, Complex alpha_minus,
                               std::span<const double> times, double threshold) {
    if (std::abs(std::norm(alpha_plus) + std::norm(alpha_minus) - 1.0) > 1e-12) {
        throw std::invalid_argument("propagate_and_reduce: |alpha_+|^2 + |alpha_-|^2 must equal 1");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw std::invalid_argument("propagate_and_reduce: times must be ascending and >= 0");
        }
    }
    const auto b = static_cast<Eigen::Index>(space.bath_dimension());
    const linalg::HermitianMatrix hp = build_block(space, +1);
    const linalg::HermitianMatrix hm = build_block(space, -1);
    const linalg::Propagator up(hp);
    const linalg::Propagator um(hm);
    Eigen::VectorXcd vacuum = Eigen::VectorXcd::Zero(b);
    vacuum(0) = 1.0;

    const double wp = std::norm(alpha_plus);
    const double wm = std::norm(alpha_minus);
    const double scale = std::abs(alpha_plus * alpha_minus);

    OracleRun run;
    run.times.assign(times.begin(), times.end());
    std::vector<double> gamma;
    double e0 = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        Eigen::VectorXcd state(2 * b);
        if (t == 0.0) {
            state = initial_state(space, alpha_plus, alpha_minus);
        } else {
            state.head(b) = alpha_plus * up.apply(t, vacuum);
            state.tail(b) = alpha_minus * um.apply(t, vacuum);
        }
        const double leak = std::max(wp > 0.0 ? edge_mass(space, state.head(b)) / wp : 0.0,
                                     wm > 0.0 ? edge_mass(space, state.tail(b)) / wm : 0.0);
        if (leak > threshold) {
            throw TruncationLeak("propagate_and_reduce: occupation mass at n_max " + std::to_string(leak) +
                                     " exceeds threshold at t = " + std::to_string(t),
                                 leak);
        }
        QubitState rho = reduce(space, state);
        const double energy = block_energy(hp, state.head(b)) + block_energy(hm, state.tail(b));
        if (i == 0) e0 = energy;
        const double coh = std::abs(rho(0, 1));

        run.abs_coherence.push_back(coh);
        run.gamma_discrete.push_back(space.bath().decoherence_exponent(t));
        run.energy.push_back(energy);
        run.leakage.push_back(leak);
        run.max_leakage = std::max(run.max_leakage, leak);
        run.max_diagonal_deviation = std::max(run.max_diagonal_deviation, std::abs(rho(0, 0).real() - wp));
        run.max_energy_drift = std::max(run.max_energy_drift, std::abs(energy - e0));
        if (scale > 0.0) gamma.push_back(t == 0.0 ? 0.0 : -std::log(coh / scale));
        run.states.push_back(std::move(rho));
    }
    if (scale > 0.0) {
        run.curve = specfun::DecoherenceCurve::from_gamma(run.times, std::move(gamma), specfun::Method::FockOracle,
                                                          threshold);
    }
    return run;
}

}  // namespace dephaselab::fock
