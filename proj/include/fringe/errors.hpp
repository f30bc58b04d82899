#pragma once

#include <stdexcept>
#include <string>

namespace fringe {

// Error classes map one-to-one onto CLI exit codes and C API status values:
// 2 config, 3 I/O, 4 degenerate input, 5 estimator failure.
enum class ErrorClass : int {
    Config = 2,
    Io = 3,
    DegenerateInput = 4,
    EstimatorFailure = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& msg)
        : std::runtime_error(msg), cls_(cls) {}

    ErrorClass error_class() const noexcept { return cls_; }
    int code() const noexcept { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ErrorClass::Config, msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(ErrorClass::Io, msg) {}
};

class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& msg)
        : Error(ErrorClass::DegenerateInput, msg) {}
};

class EstimatorError : public Error {
public:
    explicit EstimatorError(const std::string& msg)
        : Error(ErrorClass::EstimatorFailure, msg) {}
};

}  // namespace fringe
