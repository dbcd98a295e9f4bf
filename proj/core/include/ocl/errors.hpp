#pragma once

#include <stdexcept>
#include <string>

namespace ocl {

// Shape or size disagreement between inputs.
class DimensionError : public std::invalid_argument {
public:
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

// Invalid run configuration (bad hyperparameter, unknown policy, M out of range, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A linear system that should be SPD is numerically singular. The message
// names the ridge parameter whose value would fix it.
class IllConditionedError : public std::runtime_error {
public:
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file (CSV / JSON). Carries the offending line when known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ocl
