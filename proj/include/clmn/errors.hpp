#pragma once

#include <stdexcept>
#include <string>

namespace clmn {

/// Shape or dimension mismatch in a tensor primitive.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration value (bad range, missing requirement, dim mismatch).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file; message carries file/line context where known.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace clmn
