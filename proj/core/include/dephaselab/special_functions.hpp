#pragma once

namespace dephaselab::special {

/// Sine integral Si(x) = int_0^x sin(u)/u du.
double sine_integral(double x);

/// Cosine integral Ci(x) = gamma + ln x + int_0^x (cos u - 1)/u du, x > 0.
double cosine_integral(double x);

/// Entire cosine integral Cin(x) = int_0^x (1 - cos u)/u du, accurate for
/// small x where gamma + ln x - Ci(x) cancels.
double entire_cosine_integral(double x);

}  // namespace dephaselab::special
