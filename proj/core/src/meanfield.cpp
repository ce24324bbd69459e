#include "dephaselab/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dephaselab/error.hpp"
#include "dephaselab/linalg.hpp"
#include "dephaselab/parallel.hpp"
#include "dephaselab/random.hpp"
#include "detail/compensated_sum.hpp"

namespace dephaselab::meanfield {
namespace {

Eigen::MatrixXcd conditional_hamiltonian(const Subsystem& s, double sign, double scale) {
    Eigen::MatrixXcd h = sign * scale * s.coupling.matrix();
    for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) += s.levels.levels(i);
    return h;
}

// Tr[exp(i A_- t) exp(-i A_+ t)] / dim for every t, through both spectra.
std::vector<Complex> normalized_trace(const Eigen::MatrixXcd& hp, const Eigen::MatrixXcd& hm,
                                      std::span<const double> times) {
    const linalg::EigenPair ep = linalg::eig(linalg::HermitianMatrix(hp, 1e-10));
    const linalg::EigenPair em = linalg::eig(linalg::HermitianMatrix(hm, 1e-10));
    const Eigen::MatrixXcd p = (em.eigenvectors.adjoint() * ep.eigenvectors).cwiseAbs2().cast<Complex>();
    const Eigen::Index n = p.rows();
    const Complex i(0.0, 1.0);
    std::vector<Complex> out(times.size());
    Eigen::VectorXcd right(n);
    Eigen::VectorXcd left(n);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        for (Eigen::Index b = 0; b < n; ++b) right(b) = std::exp(-i * (ep.eigenvalues(b) * t));
        for (Eigen::Index a = 0; a < n; ++a) left(a) = std::exp(i * (em.eigenvalues(a) * t));
        out[k] = left.transpose() * (p * right);
        out[k] /= static_cast<double>(n);
    }
    return out;
}

std::vector<Complex> subsystem_factor(const Subsystem& s, double scale, std::span<const double> times) {
    if (s.coupling.matrix().isZero(0.0)) return std::vector<Complex>(times.size(), Complex(1.0, 0.0));
    return normalized_trace(conditional_hamiltonian(s, +1.0, scale), conditional_hamiltonian(s, -1.0, scale), times);
}

void validate_times(std::span<const double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || (i > 0 && !(times[i] > times[i - 1]))) {
            throw std::invalid_argument("time grid must be finite and strictly ascending");
        }
    }
}

struct MeanError {
    double mean = 0.0;
    double standard_error = 0.0;
};

MeanError mean_and_error(std::span<const double> x) {
    detail::CompensatedSum s;
    for (double v : x) s.add(v);
    const double n = static_cast<double>(x.size());
    const double mu = s.result() / n;
    detail::CompensatedSum q;
    for (double v : x) q.add((v - mu) * (v - mu));
    const double var = x.size() > 1 ? q.result() / (n - 1.0) : 0.0;
    return {mu, std::sqrt(var / n)};
}

EnsembleCurve run_ensemble(rmt::LevelKind kind, const CompareConfig& cfg, std::span<const std::size_t> window) {
    const std::size_t r_count = cfg.realizations;
    const std::size_t t_count = cfg.times.size();
    std::vector<std::vector<double>> curves(r_count);
    const rmt::LevelEnsemble ens{kind, cfg.m, cfg.delta, 1};
    const rmt::CouplingOptions copt{cfg.qbar_sq, cfg.zero_diagonal};
    parallel_for(r_count, cfg.threads, [&](std::size_t r) {
        std::vector<Subsystem> subs;
        subs.reserve(cfg.n);
        for (std::size_t k = 0; k < cfg.n; ++k) {
            const std::uint64_t index = r * cfg.n + k;
            subs.push_back({rmt::sample_levels(ens, derive_seed(cfg.seed, stream::kLevels, index)),
                            rmt::sample_coupling(cfg.m, derive_seed(cfg.seed, stream::kCoupling, index), copt)});
        }
        const auto gamma = dephasing_factor(MeanFieldBath(std::move(subs)), cfg.times);
        auto& c = curves[r];
        c.resize(t_count);
        for (std::size_t t = 0; t < t_count; ++t) c[t] = std::abs(gamma[t]);
    });

    EnsembleCurve out;
    out.kind = kind;
    std::vector<double> column(r_count);
    for (std::size_t t = 0; t < t_count; ++t) {
        for (std::size_t r = 0; r < r_count; ++r) column[r] = curves[r][t];
        const MeanError me = mean_and_error(column);
        out.abs_gamma.push_back(me.mean);
        out.standard_error.push_back(me.standard_error);
    }
    std::vector<double> windowed(r_count);
    for (std::size_t r = 0; r < r_count; ++r) {
        detail::CompensatedSum s;
        for (std::size_t idx : window) s.add(curves[r][idx]);
        windowed[r] = s.result() / static_cast<double>(window.size());
    }
    const MeanError lt = mean_and_error(windowed);
    out.long_time_mean = lt.mean;
    out.long_time_stderr = lt.standard_error;
    return out;
}

}  // namespace

MeanFieldBath::MeanFieldBath(std::vector<Subsystem> subsystems, bool identical_copies)
    : subsystems_(std::move(subsystems)), identical_(identical_copies) {
    if (subsystems_.empty()) throw std::invalid_argument("MeanFieldBath: at least one subsystem is required");
    m_ = static_cast<std::size_t>(subsystems_.front().levels.levels.size());
    for (const Subsystem& s : subsystems_) {
        if (static_cast<std::size_t>(s.levels.levels.size()) != m_ || static_cast<std::size_t>(s.coupling.size()) != m_) {
            throw std::invalid_argument("MeanFieldBath: all subsystems must have the same level count");
        }
    }
    n_ = subsystems_.size();
    if (n_ > kMaxSubsystems) {
        throw DimensionCap("MeanFieldBath: N exceeds " + std::to_string(kMaxSubsystems));
    }
    if (m_ > kMaxLevels) throw DimensionCap("MeanFieldBath: M exceeds " + std::to_string(kMaxLevels));
}

MeanFieldBath MeanFieldBath::copies(Subsystem subsystem, std::size_t n) {
    if (n < 1) throw std::invalid_argument("MeanFieldBath: N must be >= 1");
    if (n > kMaxSubsystems) throw DimensionCap("MeanFieldBath: N exceeds " + std::to_string(kMaxSubsystems));
    std::vector<Subsystem> one;
    one.push_back(std::move(subsystem));
    MeanFieldBath bath(std::move(one), true);
    bath.n_ = n;
    return bath;
}

std::vector<Complex> dephasing_factor(const MeanFieldBath& bath, std::span<const double> times, int threads) {
    validate_times(times);
    const double scale = 1.0 / std::sqrt(static_cast<double>(bath.size()));
    const std::size_t distinct = bath.identical_copies() ? 1 : bath.size();
    std::vector<std::vector<Complex>> factors(distinct);
    parallel_for(distinct, threads, [&](std::size_t k) { factors[k] = subsystem_factor(bath[k], scale, times); });
    std::vector<Complex> out(times.size(), Complex(1.0, 0.0));
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const auto& f = factors[bath.identical_copies() ? 0 : k];
        for (std::size_t t = 0; t < times.size(); ++t) out[t] *= f[t];
    }
    return out;
}

std::vector<Complex> dephasing_factor_full_space(const MeanFieldBath& bath, std::span<const double> times) {
    validate_times(times);
    const std::size_t m = bath.levels();
    std::size_t dim = 1;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        if (dim > kFullSpaceCap / m) throw DimensionCap("full-space propagation: M^N exceeds the cap");
        dim *= m;
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(bath.size()));
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd hp = Eigen::MatrixXcd::Zero(d, d);
    Eigen::MatrixXcd hm = Eigen::MatrixXcd::Zero(d, d);
    std::size_t stride = 1;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const Eigen::MatrixXcd sp = conditional_hamiltonian(bath[k], +1.0, scale);
        const Eigen::MatrixXcd sm = conditional_hamiltonian(bath[k], -1.0, scale);
        // I (x) h^(k) (x) I with subsystem 0 varying fastest.
        for (std::size_t col = 0; col < dim; ++col) {
            const std::size_t b = (col / stride) % m;
            const std::size_t base = col - b * stride;
            for (std::size_t a = 0; a < m; ++a) {
                const auto row = static_cast<Eigen::Index>(base + a * stride);
                hp(row, static_cast<Eigen::Index>(col)) += sp(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                hm(row, static_cast<Eigen::Index>(col)) += sm(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
        stride *= m;
    }
    return normalized_trace(hp, hm, times);
}

std::vector<double> second_order_exponent(const MeanFieldBath& bath, std::span<const double> times) {
    validate_times(times);
    const double n = static_cast<double>(bath.size());
    const double m = static_cast<double>(bath.levels());
    const double pref = 2.0 / (n * m);
    std::vector<double> out(times.size());
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        detail::CompensatedSum total;
        for (std::size_t k = 0; k < bath.size(); ++k) {
            const Subsystem& s = bath[k];
            const Eigen::VectorXd& e = s.levels.levels;
            const Eigen::MatrixXcd& q = s.coupling.matrix();
            for (Eigen::Index b = 0; b < q.cols(); ++b) {
                for (Eigen::Index a = 0; a < q.rows(); ++a) {
                    const double w = std::norm(q(a, b));
                    if (w == 0.0) continue;
                    const double dlt = e(a) - e(b);
                    double f = t * t;
                    if (dlt != 0.0) {
                        const double h = std::sin(0.5 * dlt * t);
                        f = 4.0 * h * h / (dlt * dlt);
                    }
                    total.add(pref * w * f);
                }
            }
        }
        out[ti] = total.result();
    }
    return out;
}

std::vector<std::size_t> long_time_window(std::span<const double> times) {
    std::vector<std::size_t> idx;
    if (times.empty() || !(times.back() > 0.0)) return idx;
    const double lo = times.back() / 10.0 * (1.0 - 1e-12);
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] >= lo) idx.push_back(i);
    }
    return idx;
}

Comparison compare_ensembles(const CompareConfig& config) {
    if (config.realizations < 2) throw InsufficientSamples("compare_ensembles: at least two realizations are required");
    if (config.n < 1 || config.m < 2) throw std::invalid_argument("compare_ensembles: N >= 1 and M >= 2 are required");
    if (config.n > kMaxSubsystems || config.m > kMaxLevels) {
        throw DimensionCap("compare_ensembles: N or M exceeds the desk-scale limits");
    }
    validate_times(config.times);
    const auto window = long_time_window(config.times);
    if (window.empty()) throw InsufficientSamples("compare_ensembles: the long-time window is empty");

    Comparison out;
    out.times = config.times;
    out.window_low = config.times[window.front()];
    out.window_high = config.times[window.back()];
    out.window_points = window.size();
    out.poisson = run_ensemble(rmt::LevelKind::PoissonSpacings, config, window);
    out.goe = run_ensemble(rmt::LevelKind::GOEMatrix, config, window);
    const double diff = out.goe.long_time_mean - out.poisson.long_time_mean;
    const double err = std::hypot(out.goe.long_time_stderr, out.poisson.long_time_stderr);
    if (err > 0.0) {
        out.separation = diff / err;
    } else if (diff != 0.0) {
        out.separation = std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    out.goe_exceeds_poisson = out.separation > 2.0;
    return out;
}

}  // namespace dephaselab::meanfield
