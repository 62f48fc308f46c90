#pragma once

#include <stdexcept>
#include <string>

namespace sdmcts {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class LoadErrorKind {
    io,
    empty_file,
    empty_dataset,
    missing_column,
    duplicate_column,
    non_numeric,
    malformed_row,
    bad_schema,
};

inline const char* to_string(LoadErrorKind k) {
    switch (k) {
        case LoadErrorKind::io: return "io";
        case LoadErrorKind::empty_file: return "empty file";
        case LoadErrorKind::empty_dataset: return "empty dataset";
        case LoadErrorKind::missing_column: return "missing column";
        case LoadErrorKind::duplicate_column: return "duplicate column";
        case LoadErrorKind::non_numeric: return "non-numeric value";
        case LoadErrorKind::malformed_row: return "malformed row";
        case LoadErrorKind::bad_schema: return "bad schema";
    }
    return "unknown";
}

class LoadError : public Error {
  public:
    LoadError(LoadErrorKind kind, const std::string& detail)
        : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
    LoadErrorKind kind() const noexcept { return kind_; }

  private:
    LoadErrorKind kind_;
};

/// Invalid parameter combination (search config, generator params, CLI flags).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Exhaustive enumeration exceeded its node cap.
class NodeCapExceeded : public Error {
  public:
    using Error::Error;
};

}  // namespace sdmcts
