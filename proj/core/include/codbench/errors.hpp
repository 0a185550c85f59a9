#pragma once

#include <stdexcept>
#include <string>

namespace codbench {

// Base for every failure raised by the library. Callers that only need a
// diagnostic can catch this; the subclasses exist for tests and for the CLI
// to pick exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

} // namespace codbench
