#include "dephaselab/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>
#include <utility>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "dephaselab/error.hpp"
#include "detail/compensated_sum.hpp"

namespace dephaselab::quad {
namespace {

// Kronrod 15-point abscissae (descending, positive half) and weights, with the
// embedded 7-point Gauss weights for the odd-indexed abscissae and the center.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr double kEps = std::numeric_limits<double>::epsilon();

// A panel lives either in x directly or in u in [0,1] with
// x = lower + width * u^power (the endpoint change of variables).
struct Panel {
    double lo = 0.0;
    double hi = 0.0;
    bool substituted = false;
    double value = 0.0;
    double error = 0.0;
    bool splittable = true;
};

class Integrator {
public:
    Integrator(const IntegrandSpec& spec, double sub_width, double power)
        : f_(spec.evaluator), origin_(spec.lower), sub_width_(sub_width), power_(power) {}

    void evaluate(Panel& p) {
        const double center = 0.5 * (p.lo + p.hi);
        const double half = 0.5 * (p.hi - p.lo);
        const double fc = eval(p, center);
        double kronrod = kWgk[7] * fc;
        double gauss = kWg[3] * fc;
        double absolute = std::abs(kronrod);
        for (int j = 0; j < 7; ++j) {
            const double dx = half * kXgk[j];
            const double f1 = eval(p, center - dx);
            const double f2 = eval(p, center + dx);
            kronrod += kWgk[j] * (f1 + f2);
            absolute += kWgk[j] * (std::abs(f1) + std::abs(f2));
            if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
        }
        p.value = kronrod * half;
        const double roundoff = 50.0 * kEps * absolute * std::abs(half);
        p.error = std::max(std::abs((kronrod - gauss) * half), roundoff);
        p.splittable = (p.hi - p.lo) > 64.0 * kEps * std::max(std::abs(p.lo), std::abs(p.hi));
    }

    std::size_t evaluations() const { return evaluations_; }

private:
    double eval(const Panel& p, double s) {
        ++evaluations_;
        double y;
        if (p.substituted) {
            const double up = std::pow(s, power_ - 1.0);
            const double x = origin_ + sub_width_ * up * s;
            y = f_(x) * sub_width_ * power_ * up;
        } else {
            y = f_(s);
        }
        if (!std::isfinite(y)) {
            throw DomainError("integrand returned a non-finite value");
        }
        return y;
    }

    const std::function<double(double)>& f_;
    double origin_;
    double sub_width_;
    double power_;
    std::size_t evaluations_ = 0;
};

struct ByError {
    const std::vector<Panel>* panels;
    bool operator()(std::size_t a, std::size_t b) const {
        const auto& pa = (*panels)[a];
        const auto& pb = (*panels)[b];
        if (pa.error != pb.error) return pa.error < pb.error;
        return a > b;
    }
};

}  // namespace

QuadResult integrate(const IntegrandSpec& spec, double rel_tol, const Options& options) {
    if (!spec.evaluator) throw std::invalid_argument("integrate: empty evaluator");
    if (!(rel_tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");
    if (!std::isfinite(spec.lower) || !std::isfinite(spec.upper) || spec.lower > spec.upper) {
        throw std::invalid_argument("integrate: interval must be finite with lower <= upper");
    }
    if (spec.endpoint_exponent && !(*spec.endpoint_exponent > -1.0)) {
        throw NonIntegrable("integrate: endpoint exponent <= -1 is not integrable");
    }
    if (spec.lower == spec.upper) return QuadResult{0.0, 0.0, 0, true};

    const double a = spec.lower;
    const double b = spec.upper;

    std::vector<double> cuts{a};
    if (spec.oscillation_frequency && *spec.oscillation_frequency > 0.0) {
        const double period = 2.0 * std::numbers::pi / *spec.oscillation_frequency;
        const double count = std::floor((b - a) / period);
        if (count > static_cast<double>(options.max_intervals)) {
            throw std::invalid_argument("integrate: too many oscillation periods for max_intervals");
        }
        for (std::size_t k = 1; k <= static_cast<std::size_t>(count); ++k) {
            const double x = a + static_cast<double>(k) * period;
            if (x < b * (1.0 - 1e-14)) cuts.push_back(x);
        }
    }
    cuts.push_back(b);

    double power = 1.0;
    if (spec.endpoint_exponent && *spec.endpoint_exponent < 0.0) {
        power = std::ceil(1.0 / (*spec.endpoint_exponent + 1.0) - 1e-12);
        power = std::max(power, 2.0);
    }
    const bool substitute = power > 1.0;

    Integrator integrator(spec, cuts[1] - cuts[0], power);
    std::vector<Panel> panels;
    panels.reserve(2 * cuts.size());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Panel p;
        if (i == 0 && substitute) {
            p.lo = 0.0;
            p.hi = 1.0;
            p.substituted = true;
        } else {
            p.lo = cuts[i];
            p.hi = cuts[i + 1];
        }
        integrator.evaluate(p);
        panels.push_back(p);
    }

    auto totals = [&panels] {
        detail::CompensatedSum value;
        detail::CompensatedSum error;
        for (const auto& p : panels) {
            value.add(p.value);
            error.add(p.error);
        }
        return std::pair{value.result(), error.result()};
    };
    auto target = [&](double value) { return std::max(rel_tol * std::abs(value), options.absolute_floor); };

    std::priority_queue<std::size_t, std::vector<std::size_t>, ByError> queue(ByError{&panels});
    for (std::size_t i = 0; i < panels.size(); ++i) queue.push(i);

    auto [value, error] = totals();
    double running_value = value;
    double running_error = error;
    bool converged = error <= target(value);

    while (!converged && !queue.empty() && panels.size() < options.max_intervals) {
        const std::size_t worst = queue.top();
        if (!panels[worst].splittable) break;
        queue.pop();
        Panel left = panels[worst];
        Panel right = panels[worst];
        const double mid = 0.5 * (left.lo + left.hi);
        left.hi = mid;
        right.lo = mid;
        integrator.evaluate(left);
        integrator.evaluate(right);
        running_value += left.value + right.value - panels[worst].value;
        running_error += left.error + right.error - panels[worst].error;
        panels[worst] = left;
        panels.push_back(right);
        queue.push(worst);
        queue.push(panels.size() - 1);
        if (running_error <= target(running_value)) {
            std::tie(value, error) = totals();
            running_value = value;
            running_error = error;
            converged = error <= target(value);
        }
    }
    std::tie(value, error) = totals();
    converged = error <= target(value);
    return QuadResult{value, error, integrator.evaluations(), converged};
}

LimitEstimate extrapolate_tail(std::span<const double> t, std::span<const double> f) {
    if (t.size() != f.size()) throw std::invalid_argument("extrapolate_tail: size mismatch");
    if (t.size() < 3) throw std::invalid_argument("extrapolate_tail: need at least 3 points");
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0) || (i > 0 && !(t[i] > t[i - 1]))) {
            throw std::invalid_argument("extrapolate_tail: grid must be positive and ascending");
        }
        if (!std::isfinite(f[i])) throw NotConverging("extrapolate_tail: non-finite sample");
    }
    if (t.back() / t.front() < 100.0 * (1.0 - 1e-12)) {
        throw std::invalid_argument("extrapolate_tail: grid must span at least two decades");
    }

    std::vector<double> estimates;
    for (std::size_t i = 0; i + 2 < t.size(); ++i) {
        Eigen::Matrix3d basis;
        Eigen::Vector3d rhs;
        for (int r = 0; r < 3; ++r) {
            const double tr = t[i + r];
            basis(r, 0) = 1.0;
            basis(r, 1) = 1.0 / tr;
            basis(r, 2) = std::log(tr) / tr;
            rhs(r) = f[i + r];
        }
        estimates.push_back(basis.colPivHouseholderQr().solve(rhs)(0));
    }

    const double value = estimates.back();
    const double scale = std::max(1.0, std::abs(value));
    double uncertainty;
    if (estimates.size() == 1) {
        const std::size_t n = t.size();
        const double richardson = (t[n - 1] * f[n - 1] - t[n - 2] * f[n - 2]) / (t[n - 1] - t[n - 2]);
        uncertainty = std::abs(value - richardson);
    } else {
        const std::size_t n = estimates.size();
        const double last = std::abs(estimates[n - 1] - estimates[n - 2]);
        uncertainty = last;
        if (n >= 3) {
            const double previous = std::abs(estimates[n - 2] - estimates[n - 3]);
            if (last > 2.0 * previous && last > 1e-3 * scale) {
                throw NotConverging("extrapolate_tail: successive estimates diverge");
            }
        } else if (last > 0.5 * std::max(std::abs(estimates[0]), std::abs(value)) && last > 1e-3 * scale) {
            throw NotConverging("extrapolate_tail: successive estimates diverge");
        }
    }
    return LimitEstimate{value, uncertainty};
}

LimitEstimate limit_at_infinity(const std::function<double(double)>& f, std::span<const double> t_grid) {
    std::vector<double> values;
    values.reserve(t_grid.size());
    for (double t : t_grid) values.push_back(f(t));
    return extrapolate_tail(t_grid, values);
}

}  // namespace dephaselab::quad
