#pragma once

#include <stdexcept>
#include <string>

namespace svx {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyDatasetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string& msg, double violation)
        : std::runtime_error(msg), kkt_violation(violation) {}
    double kkt_violation;
};

struct DegenerateDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace svx
