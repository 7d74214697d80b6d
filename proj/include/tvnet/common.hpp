#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tvnet {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error hierarchy. The CLI maps these onto exit codes, so every failure the
// library can report lands in one of the branches below.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameter (negative threshold, bad bandwidth, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Time index outside the range a regression setting can use.
class IndexError : public Error {
public:
    using Error::Error;
};

/// Operands whose dimensions do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Non-finite intermediate values (overflowing link, failed SVD).
class NumericError : public Error {
public:
    using Error::Error;
};

/// Inconsistent combination of otherwise valid objects.
class ConfigurationError : public Error {
public:
    using Error::Error;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, Index time_index)
        : Error(what), time_index_(time_index) {}

    /// 0-based time index of the local problem that failed, -1 if global.
    Index time_index() const noexcept { return time_index_; }

private:
    Index time_index_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ParseError : public IoError {
public:
    ParseError(const std::string& what, Index row, Index column)
        : IoError(what), row_(row), column_(column) {}

    Index row() const noexcept { return row_; }
    Index column() const noexcept { return column_; }

private:
    Index row_;
    Index column_;
};

/// Payload that contradicts its manifest or its structural mask.
class IntegrityError : public IoError {
public:
    using IoError::IoError;
};

class MissingMetadataError : public IoError {
public:
    using IoError::IoError;
};

/// An upstream artifact a pipeline stage needs is not on disk.
class DependencyError : public IoError {
public:
    using IoError::IoError;
};

}  // namespace tvnet
