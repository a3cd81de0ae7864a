#pragma once

#include <stdexcept>
#include <string>

namespace morrey {

// Raised when a requested quantity is provably infinite (non-integrable
// singularity or tail). The message names the offending endpoint.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Kernel evaluated at its singular point.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Exponent bookkeeping has no solution (e.g. p1 >= s').
class InfeasibleExponentError : public std::runtime_error {
public:
    explicit InfeasibleExponentError(const std::string& what) : std::runtime_error(what) {}
};

// Bad or unknown configuration input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Fast convolution disagrees with direct sums at probe sites.
class AliasingError : public std::runtime_error {
public:
    explicit AliasingError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace morrey
