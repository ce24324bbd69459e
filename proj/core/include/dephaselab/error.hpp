#pragma once

#include <stdexcept>
#include <string>

namespace dephaselab {

// Base of every failure raised by the library. Precondition violations on
// plain arguments (negative counts, unsorted grids) use std::invalid_argument.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonIntegrable : public Error {
public:
    using Error::Error;
};

class ToleranceNotMet : public Error {
public:
    ToleranceNotMet(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class NotConverging : public Error {
public:
    using Error::Error;
};

class ConvergenceFailure : public Error {
public:
    using Error::Error;
};

class UnsupportedRegime : public Error {
public:
    using Error::Error;
};

class DimensionCap : public Error {
public:
    using Error::Error;
};

class TruncationLeak : public Error {
public:
    TruncationLeak(const std::string& what, double leakage) : Error(what), leakage_(leakage) {}
    double leakage() const noexcept { return leakage_; }

private:
    double leakage_;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

}  // namespace dephaselab
