#pragma once

#include <stdexcept>
#include <string>

namespace hmhf {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class UnsupportedDegree : public Error {
public:
    using Error::Error;
};

class DegenerateElement : public Error {
public:
    using Error::Error;
};

/// Non-finite integrand encountered while assembling; the message names the element.
class AssemblyError : public Error {
public:
    using Error::Error;
};

class FactorizationError : public Error {
public:
    using Error::Error;
};

/// Constraint matrix of a saddle-point system is rank deficient.
class InfSupFailure : public Error {
public:
    using Error::Error;
};

class DegenerateExtrapolation : public Error {
public:
    using Error::Error;
};

class NormalizationFailure : public Error {
public:
    using Error::Error;
};

class FixedPointDivergence : public Error {
public:
    using Error::Error;
};

class OutOfDomain : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace hmhf
