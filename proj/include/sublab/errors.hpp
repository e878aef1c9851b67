#pragma once

#include <stdexcept>
#include <string>

namespace sublab {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid subordinator specification (bad parameters, non-integrable tail, zero process).
class SpecError : public Error {
public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numerical routine failed to converge; message carries diagnostics.
class NumericError : public Error {
public:
    using Error::Error;
};

/// The configured process can never cross the requested level.
class NeverCrossesError : public Error {
public:
    using Error::Error;
};

/// A per-sample resource cap (jump-count budget) was exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Invalid algorithm parameter (grid, term count, sample budget).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// A verifier's hypothesis gate failed; message names the violated condition.
class HypothesisError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (CSV schema mismatch, empty data section).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Config field outside its documented range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Unknown family / ell / c_fn name; message suggests the nearest valid one.
class UnknownFamilyError : public Error {
public:
    using Error::Error;
};

/// Config file could not be parsed or validated.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace sublab
