#pragma once

#include <stdexcept>
#include <string>

namespace brackets {

// Base class for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file (bad syntax, wrong arity, non-numeric cell).
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid file violating a schema invariant.
struct SchemaError : Error {
    using Error::Error;
};

// Data handed to an operation does not match the schema it was built for.
struct SchemaMismatch : Error {
    using Error::Error;
};

// Fewer records than an operation needs.
struct InsufficientData : Error {
    using Error::Error;
};

// Vector length disagrees with the column count.
struct DimensionMismatch : Error {
    using Error::Error;
};

// Bad run configuration (CLI arguments, sweep grids, generator settings).
struct ConfigError : Error {
    using Error::Error;
};

// Filesystem-level failure (cannot open/read/write).
struct IoError : Error {
    using Error::Error;
};

}  // namespace brackets
