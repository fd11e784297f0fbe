#pragma once

#include <stdexcept>
#include <string>

namespace symlap {

// x coincides with a kernel pole (inside the guard radius)
struct SingularityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, double value_estimate, double error_estimate)
        : std::runtime_error(what), value(value_estimate), error(error_estimate) {}
    double value;
    double error;
};

// point evaluation requested on a jump curve of the source
struct DiscontinuityError : std::domain_error {
    using std::domain_error::domain_error;
};

struct FitDegenerateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HypothesisError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ReconstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace symlap
