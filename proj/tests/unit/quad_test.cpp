#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "dephaselab/error.hpp"
#include "dephaselab/quad.hpp"
#include "dephaselab/special_functions.hpp"
#include "reference_values.hpp"

using namespace dephaselab;
using quad::IntegrandSpec;

namespace {

IntegrandSpec one_minus_cos_over_sq(double t) {
    IntegrandSpec s;
    s.evaluator = [t](double w) {
        const double h = std::sin(0.5 * w * t);
        return 2.0 * h * h / (w * w);
    };
    s.lower = 0.0;
    s.upper = 1.0;
    s.endpoint_exponent = 0.0;
    s.oscillation_frequency = t;
    return s;
}

}  // namespace

TEST(Integrate, InverseSquareRootSingularity) {
    IntegrandSpec s{[](double w) { return 1.0 / std::sqrt(w); }, 0.0, 1.0, -0.5, std::nullopt};
    const auto r = quad::integrate(s, 1e-10);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, 2.0, 2e-10);
    EXPECT_LE(r.error_estimate, 1e-10 * 2.0);
}

TEST(Integrate, OscillatoryAgainstSineIntegral) {
    const auto r = quad::integrate(one_minus_cos_over_sq(100.0), 1e-10);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, reference::kOneMinusCos100, 1e-9 * reference::kOneMinusCos100);
}

TEST(Integrate, OscillatoryStressUpToTenThousand) {
    for (double t : {10.0, 1e3, 1e4}) {
        const double exact = t * special::sine_integral(t) - (1.0 - std::cos(t));
        const auto r = quad::integrate(one_minus_cos_over_sq(t), 1e-8);
        EXPECT_TRUE(r.converged) << t;
        EXPECT_NEAR(r.value, exact, 1e-8 * exact) << t;
    }
}

TEST(Integrate, ZeroWidthInterval) {
    IntegrandSpec s{[](double) { return 1.0; }, 0.5, 0.5, std::nullopt, std::nullopt};
    const auto r = quad::integrate(s, 1e-8);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.value, 0.0);
}

TEST(Integrate, ExactlyZeroIntegrandConverges) {
    IntegrandSpec s{[](double) { return 0.0; }, 0.0, 3.0, std::nullopt, std::nullopt};
    const auto r = quad::integrate(s, 1e-12);
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.value, 0.0);
}

TEST(Integrate, NonIntegrableDeclaredExponent) {
    IntegrandSpec s{[](double w) { return 1.0 / w; }, 0.0, 1.0, -1.0, std::nullopt};
    EXPECT_THROW(quad::integrate(s, 1e-8), NonIntegrable);
}

TEST(Integrate, MalformedSpecs) {
    IntegrandSpec s{[](double w) { return w; }, 1.0, 0.0, std::nullopt, std::nullopt};
    EXPECT_THROW(quad::integrate(s, 1e-8), std::invalid_argument);
    s.lower = 0.0;
    s.upper = 1.0;
    EXPECT_THROW(quad::integrate(s, 0.0), std::invalid_argument);
}

TEST(Integrate, ReportsNonConvergenceWithBestEstimate) {
    IntegrandSpec s{[](double w) { return std::sin(1.0 / w); }, 1e-9, 1.0, std::nullopt, std::nullopt};
    quad::Options opt;
    opt.max_intervals = 8;
    const auto r = quad::integrate(s, 1e-14, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_TRUE(std::isfinite(r.value));
}

TEST(Integrate, Linearity) {
    auto f = [](double w) { return std::pow(w, -0.3) * std::exp(-w); };
    auto g = [](double w) { return std::cos(3.0 * w); };
    const double a = 2.5;
    const double b = -1.25;
    const double tol = 1e-10;
    const double If = quad::integrate({f, 0.0, 2.0, -0.3, std::nullopt}, tol).value;
    const double Ig = quad::integrate({g, 0.0, 2.0, std::nullopt, std::nullopt}, tol).value;
    const double Ih =
        quad::integrate({[&](double w) { return a * f(w) + b * g(w); }, 0.0, 2.0, -0.3, std::nullopt}, tol).value;
    EXPECT_NEAR(Ih, a * If + b * Ig, 4 * tol * (std::abs(a * If) + std::abs(b * Ig)));
}

TEST(Integrate, IntervalAdditivity) {
    auto f = [](double w) { return std::log(1.0 + w) * std::sin(7.0 * w); };
    const double tol = 1e-11;
    for (double c : {0.1, 0.77, 1.9}) {
        const double whole = quad::integrate({f, 0.0, 2.0, std::nullopt, std::nullopt}, tol).value;
        const double left = quad::integrate({f, 0.0, c, std::nullopt, std::nullopt}, tol).value;
        const double right = quad::integrate({f, c, 2.0, std::nullopt, std::nullopt}, tol).value;
        EXPECT_NEAR(whole, left + right, 1e-10) << c;
    }
}

TEST(LimitAtInfinity, InverseTailOnThreePoints) {
    const double c = 3.25;
    const std::vector<double> grid{10.0, 100.0, 1000.0};
    const auto est = quad::limit_at_infinity([c](double t) { return c + 1.0 / t; }, grid);
    EXPECT_NEAR(est.value, c, 1e-2);
}

TEST(LimitAtInfinity, LogTailIsAbsorbed) {
    std::vector<double> grid;
    for (double t = 10.0; t <= 1e4; t *= 2.0) grid.push_back(t);
    const auto est = quad::limit_at_infinity([](double t) { return 0.5 + (2.0 * std::log(t) + 1.0) / t; }, grid);
    EXPECT_NEAR(est.value, 0.5, 1e-9);
    EXPECT_LE(est.uncertainty, 1e-9);
}

TEST(LimitAtInfinity, RejectsShortOrNarrowGrids) {
    auto f = [](double t) { return 1.0 / t; };
    EXPECT_THROW(quad::limit_at_infinity(f, std::vector<double>{10.0, 100.0}), std::invalid_argument);
    EXPECT_THROW(quad::limit_at_infinity(f, std::vector<double>{10.0, 20.0, 40.0, 80.0}), std::invalid_argument);
    EXPECT_THROW(quad::limit_at_infinity(f, std::vector<double>{10.0, 1.0, 1000.0}), std::invalid_argument);
}

TEST(LimitAtInfinity, DivergentSequenceIsFlagged) {
    std::vector<double> grid;
    for (double t = 1.0; t <= 1e4; t *= 10.0) grid.push_back(t);
    EXPECT_THROW(quad::limit_at_infinity([](double t) { return t * t; }, grid), NotConverging);
}
