#pragma once

#include <stdexcept>
#include <string>

namespace hho {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: bad mesh file, bad family name, out-of-range parameter.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Structurally invalid or unsupported mesh.
class MeshError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Factorization breakdown, eigensolver non-convergence, degenerate cell.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace hho
