#pragma once

#include <iosfwd>
#include <string>

namespace dephaselab {

/// A nonnegative real number or the flag Divergent.
///
/// Norms and energies of singular couplings are infinite; the library treats
/// that as an outcome rather than an error. Divergent absorbs addition and
/// positive scaling.
class ExtReal {
public:
    static ExtReal finite(double value);
    static ExtReal divergent() noexcept { return ExtReal(); }

    bool is_divergent() const noexcept { return divergent_; }
    bool is_finite() const noexcept { return !divergent_; }

    /// Throws DomainError when divergent.
    double value() const;
    /// +infinity when divergent.
    double value_or_infinity() const noexcept;

    ExtReal operator+(const ExtReal& other) const;
    /// factor must be >= 0; zero times Divergent is Divergent.
    ExtReal scaled(double factor) const;

    friend bool operator==(const ExtReal&, const ExtReal&) = default;

    std::string to_string() const;

private:
    ExtReal() = default;
    explicit ExtReal(double v) : divergent_(false), value_(v) {}

    bool divergent_ = true;
    double value_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const ExtReal& x);

}  // namespace dephaselab
