#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace stieltjes {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shapes of the operands do not fit together.
class DimensionError : public Error {
public:
    using Error::Error;
};

// A value is malformed: non-finite entries, tolerances out of range, bad grids.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// The operation is mathematically undefined for the given input
// (e.g. kappa = 0 for a Schur step, non-degenerate input to unique_solution).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Evaluation hit a pole or a singular denominator.
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::optional<std::complex<double>> z = std::nullopt)
        : Error(what), z_(z) {}

    std::optional<std::complex<double>> point() const { return z_; }

private:
    std::optional<std::complex<double>> z_;
};

// Input document does not match the expected JSON layout.
class SchemaError : public Error {
public:
    using Error::Error;
};

}  // namespace stieltjes
