#include "dephaselab/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "dephaselab/error.hpp"
#include "dephaselab/linalg.hpp"
#include "dephaselab/parallel.hpp"
#include "dephaselab/random.hpp"
#include "detail/compensated_sum.hpp"

namespace dephaselab::rmt {
namespace {

using Complex = std::complex<double>;

constexpr double kPi = std::numbers::pi;
constexpr int kUnfoldDegree = 7;
constexpr double kKernelReach = 8.0;

double surmise_c(int beta) {
    switch (beta) {
        case 1: return kPi / 4.0;
        case 2: return 4.0 / kPi;
        case 4: return 64.0 / (9.0 * kPi);
        default: throw std::invalid_argument("Wigner surmise requires beta in {1, 2, 4}");
    }
}

double surmise_norm(int beta) {
    switch (beta) {
        case 1: return kPi / 2.0;
        case 2: return 32.0 / (kPi * kPi);
        case 4: return std::pow(2.0, 18) / (std::pow(3.0, 6) * std::pow(kPi, 3));
        default: throw std::invalid_argument("Wigner surmise requires beta in {1, 2, 4}");
    }
}

bool is_matrix_kind(LevelKind kind) { return kind == LevelKind::GOEMatrix || kind == LevelKind::GUEMatrix; }

// Least-squares polynomial in x (already scaled to about [-1, 1]).
Eigen::VectorXd poly_fit(const Eigen::VectorXd& x, const Eigen::VectorXd& y, int degree) {
    Eigen::MatrixXd v(x.size(), degree + 1);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double p = 1.0;
        for (int k = 0; k <= degree; ++k) {
            v(i, k) = p;
            p *= x(i);
        }
    }
    return v.colPivHouseholderQr().solve(y);
}

double poly_eval(const Eigen::VectorXd& c, double x) {
    double r = 0.0;
    for (Eigen::Index k = c.size(); k-- > 0;) r = r * x + c(k);
    return r;
}

Eigen::VectorXd cumulate(std::size_t m, auto&& draw) {
    Eigen::VectorXd levels(static_cast<Eigen::Index>(m));
    double e = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (i > 0) e += draw();
        levels(static_cast<Eigen::Index>(i)) = e;
    }
    return levels;
}

Eigen::VectorXd matrix_spectrum(LevelKind kind, std::size_t n, Engine& engine) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto dim = static_cast<Eigen::Index>(n);
    if (kind == LevelKind::GOEMatrix) {
        Eigen::MatrixXd a(dim, dim);
        for (Eigen::Index j = 0; j < dim; ++j) {
            for (Eigen::Index i = 0; i < dim; ++i) a(i, j) = normal(engine);
        }
        const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
        return linalg::eigenvalues_symmetric(h);
    }
    Eigen::MatrixXcd a(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = normal(engine);
            const double im = normal(engine);
            a(i, j) = {re, im};
        }
    }
    Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = h(i, i).real();
    return linalg::eigenvalues(linalg::HermitianMatrix(std::move(h)));
}

// Unfolding degree: 7 once the central window holds enough levels to pin it,
// lower for small M. A degree is rejected when the unfolded levels are not
// strictly ascending; degree 1 is affine and always succeeds.
int unfold_degree(Eigen::Index count) {
    return static_cast<int>(std::clamp<Eigen::Index>(count / 16, 3, kUnfoldDegree));
}

Eigen::VectorXd unfold(const Eigen::VectorXd& spectrum, std::size_t m, double delta) {
    const auto count = static_cast<Eigen::Index>(m);
    const Eigen::Index first = (spectrum.size() - count) / 2;
    const Eigen::VectorXd central = spectrum.segment(first, count);
    const double mid = 0.5 * (central(0) + central(count - 1));
    const double half = 0.5 * (central(count - 1) - central(0));
    const Eigen::VectorXd x = (central.array() - mid) / half;
    const Eigen::VectorXd index = Eigen::VectorXd::LinSpaced(count, 0.0, static_cast<double>(count - 1));
    for (int degree = unfold_degree(count); degree >= 1; --degree) {
        const Eigen::VectorXd c = poly_fit(x, index, degree);
        Eigen::VectorXd u(count);
        for (Eigen::Index i = 0; i < count; ++i) u(i) = poly_eval(c, x(i));
        const double span = u(count - 1) - u(0);
        Eigen::VectorXd levels = (u.array() - u(0)) * (delta * static_cast<double>(count - 1) / span);
        levels(0) = 0.0;
        bool ascending = span > 0.0;
        for (Eigen::Index i = 1; i < count && ascending; ++i) ascending = levels(i) > levels(i - 1);
        if (ascending) return levels;
    }
    throw ConvergenceFailure("sample_levels: unfolded spectrum is not strictly ascending");
}

double gauss_kernel(double x, double sigma) {
    const double z = x / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * kPi));
}

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

// Quadratic least-squares fit on the window; returns the intercept.
double window_intercept(const std::vector<double>& omega, const std::vector<std::size_t>& idx,
                        const Eigen::VectorXd& values) {
    const double scale = omega[idx.back()];
    Eigen::VectorXd x(static_cast<Eigen::Index>(idx.size()));
    Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        x(static_cast<Eigen::Index>(i)) = omega[idx[i]] / scale;
        y(static_cast<Eigen::Index>(i)) = values(static_cast<Eigen::Index>(idx[i]));
    }
    return poly_fit(x, y, 2)(0);
}

std::vector<double> mean_rows(const Eigen::MatrixXd& rows, std::span<const std::size_t> which) {
    std::vector<double> out(static_cast<std::size_t>(rows.cols()));
    for (Eigen::Index c = 0; c < rows.cols(); ++c) {
        detail::CompensatedSum s;
        for (std::size_t r : which) s.add(rows(static_cast<Eigen::Index>(r), c));
        out[static_cast<std::size_t>(c)] = s.result() / static_cast<double>(which.size());
    }
    return out;
}

void validate_grid(std::span<const double> omega_grid, double bandwidth) {
    if (omega_grid.empty()) throw std::invalid_argument("omega grid must not be empty");
    for (std::size_t i = 1; i < omega_grid.size(); ++i) {
        if (!(omega_grid[i] > omega_grid[i - 1])) throw std::invalid_argument("omega grid must be ascending");
    }
    if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
}

SpectralEstimate assemble(std::vector<double> grid, Eigen::MatrixXd rows, const EstimatorOptions& options) {
    const std::size_t n = static_cast<std::size_t>(rows.rows());
    SpectralEstimate est;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    est.r_hat = mean_rows(rows, all);
    est.standard_error.assign(grid.size(), 0.0);

    Engine engine = make_engine(derive_seed(options.bootstrap_seed, stream::kBootstrap, 0));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    est.bootstrap_draws.resize(options.bootstrap_replicates);
    Eigen::MatrixXd boot(static_cast<Eigen::Index>(options.bootstrap_replicates), static_cast<Eigen::Index>(grid.size()));
    for (std::size_t b = 0; b < options.bootstrap_replicates; ++b) {
        auto& draw = est.bootstrap_draws[b];
        draw.resize(n);
        for (auto& d : draw) d = pick(engine);
        const auto mean = mean_rows(rows, draw);
        for (std::size_t c = 0; c < grid.size(); ++c) boot(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(c)) = mean[c];
    }
    if (options.bootstrap_replicates > 1) {
        for (std::size_t c = 0; c < grid.size(); ++c) {
            const auto col = boot.col(static_cast<Eigen::Index>(c));
            const double mu = col.mean();
            est.standard_error[c] =
                std::sqrt((col.array() - mu).square().sum() / static_cast<double>(options.bootstrap_replicates - 1));
        }
    }
    est.omega_grid = std::move(grid);
    est.bandwidth = options.bandwidth;
    est.samples = n;
    est.per_realization = std::move(rows);
    return est;
}

void require_samples(std::size_t n) {
    if (n < kMinRealizations) {
        throw InsufficientSamples("spectral estimate needs at least " + std::to_string(kMinRealizations) +
                                  " realizations, got " + std::to_string(n));
    }
}

}  // namespace

std::string_view to_string(LevelKind kind) {
    switch (kind) {
        case LevelKind::PoissonSpacings: return "poisson";
        case LevelKind::GOEMatrix: return "goe";
        case LevelKind::GUEMatrix: return "gue";
        case LevelKind::SurmiseSpacings: return "surmise";
    }
    return "unknown";
}

void LevelEnsemble::validate() const {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("LevelEnsemble: delta must be > 0");
    if (levels < 2) throw std::invalid_argument("LevelEnsemble: at least two levels are required");
    if (is_matrix_kind(kind) && levels < 16) {
        throw std::invalid_argument("LevelEnsemble: matrix kinds need M >= 16");
    }
    if (kind == LevelKind::SurmiseSpacings && beta != 1 && beta != 2 && beta != 4) {
        throw std::invalid_argument("LevelEnsemble: surmise beta must be 1, 2 or 4");
    }
}

std::vector<double> LevelSet::spacings() const {
    std::vector<double> s;
    s.reserve(static_cast<std::size_t>(std::max<Eigen::Index>(levels.size() - 1, 0)));
    for (Eigen::Index i = 1; i < levels.size(); ++i) s.push_back(levels(i) - levels(i - 1));
    return s;
}

double LevelSet::mean_spacing() const {
    if (levels.size() < 2) return 0.0;
    return (levels(levels.size() - 1) - levels(0)) / static_cast<double>(levels.size() - 1);
}

LevelSet sample_levels(const LevelEnsemble& ens, std::uint64_t seed) {
    ens.validate();
    Engine engine = make_engine(seed);
    LevelSet out;
    out.ensemble = ens;
    out.seed = seed;
    switch (ens.kind) {
        case LevelKind::PoissonSpacings: {
            std::exponential_distribution<double> expo(1.0 / ens.delta);
            out.levels = cumulate(ens.levels, [&] { return expo(engine); });
            break;
        }
        case LevelKind::SurmiseSpacings: {
            std::gamma_distribution<double> gam(0.5 * (ens.beta + 1), 1.0 / surmise_c(ens.beta));
            out.levels = cumulate(ens.levels, [&] { return ens.delta * std::sqrt(gam(engine)); });
            break;
        }
        case LevelKind::GOEMatrix:
        case LevelKind::GUEMatrix:
            out.levels = unfold(matrix_spectrum(ens.kind, 2 * ens.levels, engine), ens.levels, ens.delta);
            break;
    }
    return out;
}

double spacing_pdf(SpacingLaw law, int beta, double s) {
    if (s < 0.0) return 0.0;
    if (law == SpacingLaw::Poisson) return std::exp(-s);
    const double c = surmise_c(beta);
    return surmise_norm(beta) * std::pow(s, beta) * std::exp(-c * s * s);
}

double spacing_cdf(SpacingLaw law, int beta, double s) {
    if (s <= 0.0) return 0.0;
    if (law == SpacingLaw::Poisson) return -std::expm1(-s);
    return boost::math::gamma_p(0.5 * (beta + 1), surmise_c(beta) * s * s);
}

SpacingLaw reference_law(const LevelEnsemble& ens) {
    return ens.kind == LevelKind::PoissonSpacings ? SpacingLaw::Poisson : SpacingLaw::WignerSurmise;
}

int reference_beta(const LevelEnsemble& ens) {
    switch (ens.kind) {
        case LevelKind::GOEMatrix: return 1;
        case LevelKind::GUEMatrix: return 2;
        case LevelKind::SurmiseSpacings: return ens.beta;
        case LevelKind::PoissonSpacings: return 0;
    }
    return 0;
}

double ks_statistic(std::span<const double> spacings, SpacingLaw law, int beta) {
    if (spacings.empty()) throw std::invalid_argument("ks_statistic: no spacings");
    std::vector<double> s(spacings.begin(), spacings.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double f = spacing_cdf(law, beta, s[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

CouplingMatrix::CouplingMatrix(Eigen::MatrixXcd q) : q_(std::move(q)) {
    if (q_.rows() != q_.cols()) throw std::invalid_argument("CouplingMatrix: matrix must be square");
    if (q_.size() > 0 && (q_ - q_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
        throw std::invalid_argument("CouplingMatrix: matrix is not Hermitian");
    }
    if (std::abs(q_.trace()) > 1e-10) throw std::invalid_argument("CouplingMatrix: trace must vanish");
}

double CouplingMatrix::mean_offdiagonal_sq() const {
    const Eigen::Index m = q_.rows();
    if (m < 2) return 0.0;
    detail::CompensatedSum s;
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            if (i != j) s.add(std::norm(q_(i, j)));
        }
    }
    return s.result() / static_cast<double>(m * (m - 1));
}

CouplingMatrix sample_coupling(std::size_t m, std::uint64_t seed, const CouplingOptions& options) {
    if (m < 1) throw std::invalid_argument("sample_coupling: M must be >= 1");
    if (!(options.qbar_sq >= 0.0)) throw std::invalid_argument("sample_coupling: qbar_sq must be >= 0");
    Engine engine = make_engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double off = std::sqrt(0.5 * options.qbar_sq);
    const double on = std::sqrt(options.qbar_sq);
    const auto n = static_cast<Eigen::Index>(m);
    Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double d = normal(engine);
        if (!options.zero_diagonal) q(j, j) = on * d;
        for (Eigen::Index i = 0; i < j; ++i) {
            const double re = normal(engine);
            const double im = normal(engine);
            q(i, j) = {off * re, off * im};
            q(j, i) = std::conj(q(i, j));
        }
    }
    const Complex shift = q.trace() / static_cast<double>(n);
    for (Eigen::Index j = 0; j < n; ++j) q(j, j) -= shift.real();
    return CouplingMatrix(std::move(q));
}

std::vector<double> spectral_curve(const LevelSet& levels, const CouplingMatrix& q,
                                   std::span<const double> omega_grid, double bandwidth, PairSelection pairs) {
    validate_grid(omega_grid, bandwidth);
    const Eigen::VectorXd& e = levels.levels;
    const Eigen::Index m = e.size();
    if (q.size() != m) throw std::invalid_argument("spectral_curve: coupling and level counts differ");
    const double reach = std::max(std::abs(omega_grid.front()), std::abs(omega_grid.back())) + kKernelReach * bandwidth;
    std::vector<detail::CompensatedSum> acc(omega_grid.size());
    // Each unordered pair contributes at +d and -d; K(d - w) + K(d + w) keeps
    // the estimate exactly even in w on a symmetric grid.
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index stop = pairs == PairSelection::NearestNeighbor ? std::min(m, i + 2) : m;
        for (Eigen::Index j = i + 1; j < stop; ++j) {
            const double d = e(j) - e(i);
            if (d > reach) break;
            const double w = std::norm(q.matrix()(i, j));
            if (w == 0.0) continue;
            for (std::size_t g = 0; g < omega_grid.size(); ++g) {
                const double om = omega_grid[g];
                acc[g].add(w * (gauss_kernel(d - om, bandwidth) + gauss_kernel(d + om, bandwidth)));
            }
        }
    }
    std::vector<double> out(omega_grid.size());
    const double pref = kPi / static_cast<double>(m);
    for (std::size_t g = 0; g < out.size(); ++g) out[g] = pref * acc[g].result();
    return out;
}

SpectralEstimate estimate_spectral_function(std::span<const Realization> ensemble,
                                            std::span<const double> omega_grid,
                                            const EstimatorOptions& options) {
    require_samples(ensemble.size());
    validate_grid(omega_grid, options.bandwidth);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(ensemble.size()), static_cast<Eigen::Index>(omega_grid.size()));
    parallel_for(ensemble.size(), options.threads, [&](std::size_t r) {
        const auto curve = spectral_curve(ensemble[r].levels, ensemble[r].coupling, omega_grid, options.bandwidth,
                                          options.pairs);
        for (std::size_t g = 0; g < curve.size(); ++g) {
            rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(g)) = curve[g];
        }
    });
    return assemble({omega_grid.begin(), omega_grid.end()}, std::move(rows), options);
}

SpectralEstimate estimate_spectral_function(const BathSpec& bath, std::size_t realizations, std::uint64_t seed,
                                            std::span<const double> omega_grid,
                                            const EstimatorOptions& options) {
    require_samples(realizations);
    bath.levels.validate();
    validate_grid(omega_grid, options.bandwidth);
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(realizations), static_cast<Eigen::Index>(omega_grid.size()));
    parallel_for(realizations, options.threads, [&](std::size_t r) {
        const LevelSet levels = sample_levels(bath.levels, derive_seed(seed, stream::kLevels, r));
        const CouplingMatrix q =
            sample_coupling(bath.levels.levels, derive_seed(seed, stream::kCoupling, r), bath.coupling);
        const auto curve = spectral_curve(levels, q, omega_grid, options.bandwidth, options.pairs);
        for (std::size_t g = 0; g < curve.size(); ++g) {
            rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(g)) = curve[g];
        }
    });
    return assemble({omega_grid.begin(), omega_grid.end()}, std::move(rows), options);
}

double surmise_prediction(SpacingLaw law, int beta, double qbar_sq, double omega, double delta) {
    if (omega < 0.0) throw std::invalid_argument("surmise_prediction: omega must be >= 0");
    if (!(delta > 0.0)) throw std::invalid_argument("surmise_prediction: delta must be > 0");
    return kPi * qbar_sq * spacing_pdf(law, beta, omega / delta) / delta;
}

RateEstimate rate_estimate(const SpectralEstimate& est) {
    require_samples(est.samples);
    const Window win{est.bandwidth, 10.0 * est.bandwidth};
    const double slack = 1e-9 * win.hi;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < est.omega_grid.size(); ++i) {
        const double w = est.omega_grid[i];
        if (w >= win.lo - slack && w <= win.hi + slack) idx.push_back(i);
    }
    if (idx.size() < 4) {
        throw InsufficientSamples("rate_estimate: the window [bandwidth, 10 bandwidth] holds " +
                                  std::to_string(idx.size()) + " grid points, at least 4 are needed");
    }
    const Eigen::VectorXd mean = Eigen::Map<const Eigen::VectorXd>(est.r_hat.data(), static_cast<Eigen::Index>(est.r_hat.size()));
    RateEstimate out;
    out.window_low = win.lo;
    out.window_high = win.hi;
    out.raw_gamma = 0.5 * window_intercept(est.omega_grid, idx, mean);
    out.negative_intercept = out.raw_gamma < 0.0;
    out.gamma = std::max(out.raw_gamma, 0.0);

    const std::size_t b = est.bootstrap_draws.size();
    if (b > 1 && est.per_realization.rows() == static_cast<Eigen::Index>(est.samples)) {
        std::vector<double> reps(b);
        for (std::size_t k = 0; k < b; ++k) {
            const auto m = mean_rows(est.per_realization, est.bootstrap_draws[k]);
            reps[k] = 0.5 * window_intercept(est.omega_grid, idx,
                                             Eigen::Map<const Eigen::VectorXd>(m.data(), static_cast<Eigen::Index>(m.size())));
        }
        double mu = 0.0;
        for (double r : reps) mu += r;
        mu /= static_cast<double>(b);
        double var = 0.0;
        for (double r : reps) var += (r - mu) * (r - mu);
        out.standard_error = std::sqrt(var / static_cast<double>(b - 1));
    }
    return out;
}

}  // namespace dephaselab::rmt
