#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dephaselab/error.hpp"
#include "dephaselab/special_functions.hpp"
#include "reference_values.hpp"

namespace ref = dephaselab::reference;
using namespace dephaselab::special;

TEST(SineIntegral, MatchesReferenceAcrossRegimes) {
    EXPECT_NEAR(sine_integral(0.5), ref::kSi0p5, 1e-15);
    EXPECT_NEAR(sine_integral(2.0), ref::kSi2, 1e-15);
    EXPECT_NEAR(sine_integral(10.0), ref::kSi10, 2e-15);
    EXPECT_NEAR(sine_integral(100.0), ref::kSi100, 2e-15);
    EXPECT_NEAR(sine_integral(1e4), ref::kSi1e4, 2e-15);
}

TEST(SineIntegral, OddAndZeroAtOrigin) {
    EXPECT_EQ(sine_integral(0.0), 0.0);
    EXPECT_DOUBLE_EQ(sine_integral(-3.7), -sine_integral(3.7));
    EXPECT_NEAR(sine_integral(1e8), std::numbers::pi / 2, 1e-8);
}

TEST(CosineIntegral, MatchesReference) {
    EXPECT_NEAR(cosine_integral(0.5), ref::kCi0p5, 1e-15);
    EXPECT_NEAR(cosine_integral(2.0), ref::kCi2, 1e-15);
    EXPECT_NEAR(cosine_integral(10.0), ref::kCi10, 2e-16);
    EXPECT_NEAR(cosine_integral(100.0), ref::kCi100, 2e-17);
    EXPECT_THROW(cosine_integral(0.0), dephaselab::DomainError);
}

TEST(EntireCosineIntegral, ConsistentWithCiAndSmallArgument) {
    for (double x : {0.5, 2.0, 10.0, 100.0}) {
        const double expected = std::numbers::egamma + std::log(x) - cosine_integral(x);
        EXPECT_NEAR(entire_cosine_integral(x), expected, 1e-14 * std::max(1.0, expected)) << x;
    }
    // Cin(x) = x^2/4 - x^4/96 + ...
    const double x = 1e-4;
    EXPECT_NEAR(entire_cosine_integral(x), x * x / 4 - x * x * x * x / 96, 1e-24);
}
