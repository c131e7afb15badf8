#pragma once

#include <stdexcept>
#include <string>

namespace c3 {

// Error categories map 1:1 to CLI exit codes (see cli.hpp).
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad arguments or preconditions: empty inputs, out-of-range parameters.
struct UsageError : Error {
  explicit UsageError(const std::string& what) : Error(what) {}
};

// Malformed configuration: missing mandatory column mapping, schema violation.
struct ConfigError : Error {
  explicit ConfigError(const std::string& what) : Error(what) {}
};

// Missing or unreadable input file.
struct FileError : Error {
  explicit FileError(const std::string& what) : Error(what) {}
};

// Corrupt data: too many invalid rows, inconsistent corpora, id mismatches.
struct DataError : Error {
  explicit DataError(const std::string& what) : Error(what) {}
};

// A statistic is undefined on the given input (zero variance, D_e = 0).
struct DegenerateError : Error {
  explicit DegenerateError(const std::string& what) : Error(what) {}
};

}  // namespace c3
