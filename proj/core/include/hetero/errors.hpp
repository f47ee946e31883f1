#pragma once

#include <stdexcept>

namespace hetero {

// Kernel normalizer too small for the requested bandwidth.
class CalibrationError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Rejection sampling ran out of attempts.
class SamplingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hetero
