#pragma once
#include <stdexcept>
#include <string>

namespace fosdnn {

// Base for all library errors. CLI maps subclasses to exit codes:
// configuration/shape/ingestion/IO -> 1, numeric/training -> 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct IngestError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace fosdnn
