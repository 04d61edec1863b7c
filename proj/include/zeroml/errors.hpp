#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace zeroml {

/// Base for every failure a builtin can raise at run time. The VM turns these
/// into RuntimeError carrying the source line of the call.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class CsvError : public Error {
public:
    CsvError(std::size_t row, const std::string& message)
        : Error("CSV row " + std::to_string(row) + ": " + message), row_(row) {}
    /// 1-based physical record number (header = 1).
    std::size_t row() const { return row_; }
private:
    std::size_t row_;
};

class CleanError : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class FoldError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class MetricError : public Error {
public:
    using Error::Error;
};

class DeadlineError : public Error {
public:
    using Error::Error;
};

class FormatError : public Error {
public:
    FormatError(const std::string& message, std::size_t byte_offset = 0)
        : Error(message), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const { return byte_offset_; }
private:
    std::size_t byte_offset_;
};

}  // namespace zeroml
