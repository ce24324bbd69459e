#include "dephaselab/special_functions.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "dephaselab/error.hpp"

namespace dephaselab::special {
namespace {

constexpr double kSeriesLimit = 4.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Si(x) and Cin(x) power series; alternating but harmless for |x| <= 4.
double si_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 60; ++k) {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        const double add = term / (2.0 * k + 1.0);
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return sum;
}

double cin_series(double x) {
    const double x2 = x * x;
    double term = 1.0;  // x^{2k} / (2k)!
    double sum = 0.0;
    for (int k = 1; k < 60; ++k) {
        term *= x2 / ((2.0 * k - 1.0) * (2.0 * k));
        const double add = ((k % 2 == 1) ? 1.0 : -1.0) * term / (2.0 * k);
        sum += add;
        if (std::abs(add) < kEps * std::abs(sum)) break;
    }
    return sum;
}

// E1(ix) by the modified Lentz continued fraction; returns (Ci, Si - pi/2).
std::complex<double> e1_imaginary_tail(double x) {
    constexpr double tiny = 1e-300;
    std::complex<double> b(1.0, x);
    std::complex<double> c(1.0 / tiny, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 2; i < 100000; ++i) {
        const double a = -static_cast<double>((i - 1) * (i - 1));
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const std::complex<double> del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) {
            return h * std::complex<double>(std::cos(x), -std::sin(x));
        }
    }
    throw ConvergenceFailure("sine/cosine integral continued fraction did not converge");
}

}  // namespace

double sine_integral(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    double result;
    if (ax <= kSeriesLimit) {
        result = si_series(ax);
    } else if (std::isinf(ax)) {
        result = 0.5 * std::numbers::pi;
    } else {
        result = 0.5 * std::numbers::pi + e1_imaginary_tail(ax).imag();
    }
    return x < 0.0 ? -result : result;
}

double cosine_integral(double x) {
    if (!(x > 0.0)) throw DomainError("cosine_integral requires x > 0");
    if (x <= kSeriesLimit) {
        return std::numbers::egamma + std::log(x) - cin_series(x);
    }
    if (std::isinf(x)) return 0.0;
    return -e1_imaginary_tail(x).real();
}

double entire_cosine_integral(double x) {
    const double ax = std::abs(x);
    if (ax <= kSeriesLimit) return cin_series(ax);
    return std::numbers::egamma + std::log(ax) - cosine_integral(ax);
}

}  // namespace dephaselab::special
