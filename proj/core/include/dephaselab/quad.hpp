#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

namespace dephaselab::quad {

/// One-dimensional integrand on the finite interval [lower, upper].
struct IntegrandSpec {
    std::function<double(double)> evaluator;
    double lower = 0.0;
    double upper = 0.0;
    /// p such that f(x) ~ (x - lower)^p near the lower end; p > -1 is
    /// required. Negative p switches the first panel to a power-law change of
    /// variables that removes the singularity.
    std::optional<double> endpoint_exponent;
    /// t for integrands carrying a factor (1 - cos x t). The interval is cut
    /// at multiples of the period 2*pi/t before adaptive refinement.
    std::optional<double> oscillation_frequency;
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

struct Options {
    /// Absolute floor of the error target, so exactly-zero integrals converge.
    double absolute_floor = 1e-300;
    std::size_t max_intervals = std::size_t{1} << 20;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration. The error target is
/// max(rel_tol * |value|, absolute_floor); on failure the best estimate is
/// returned with converged = false.
///
/// Throws NonIntegrable when endpoint_exponent <= -1 and
/// std::invalid_argument on malformed specs.
QuadResult integrate(const IntegrandSpec& spec, double rel_tol, const Options& options = {});

struct LimitEstimate {
    double value = 0.0;
    double uncertainty = 0.0;
};

/// Estimates lim_{t->inf} f(t) from samples on an ascending grid of positive
/// times spanning at least two decades (>= 3 points). Consecutive triples are
/// fitted exactly by c + a/t + b ln(t)/t, which absorbs both the 1/t approach
/// of convergent rates and the ln(t)/t tail of logarithmic growth; the last c
/// is the estimate and the spread of successive c values its uncertainty.
///
/// Throws NotConverging when successive estimates run away.
LimitEstimate limit_at_infinity(const std::function<double(double)>& f,
                                std::span<const double> t_grid);

/// Same as limit_at_infinity with the samples already evaluated.
LimitEstimate extrapolate_tail(std::span<const double> t_grid, std::span<const double> values);

}  // namespace dephaselab::quad
