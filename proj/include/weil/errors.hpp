#pragma once

#include <stdexcept>
#include <string>

namespace weil {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public Error {
public:
    using Error::Error;
};

class FieldMismatch : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ResourceError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

// A verification step found that a constructed object violates a required identity.
class DefectError : public Error {
public:
    using Error::Error;
};

}  // namespace weil
