#include "dephaselab/ext_real.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dephaselab/error.hpp"

namespace dephaselab {

ExtReal ExtReal::finite(double value) {
    if (!std::isfinite(value) || value < 0.0) {
        throw std::invalid_argument("ExtReal::finite requires a finite nonnegative value");
    }
    return ExtReal(value);
}

double ExtReal::value() const {
    if (divergent_) throw DomainError("value() of a divergent quantity");
    return value_;
}

double ExtReal::value_or_infinity() const noexcept {
    return divergent_ ? std::numeric_limits<double>::infinity() : value_;
}

ExtReal ExtReal::operator+(const ExtReal& other) const {
    if (divergent_ || other.divergent_) return divergent();
    return ExtReal(value_ + other.value_);
}

ExtReal ExtReal::scaled(double factor) const {
    if (!(factor >= 0.0) || !std::isfinite(factor)) {
        throw std::invalid_argument("ExtReal::scaled requires a finite nonnegative factor");
    }
    if (divergent_) return divergent();
    return ExtReal(value_ * factor);
}

std::string ExtReal::to_string() const {
    if (divergent_) return "divergent";
    std::ostringstream os;
    os.precision(17);
    os << value_;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const ExtReal& x) { return os << x.to_string(); }

}  // namespace dephaselab
