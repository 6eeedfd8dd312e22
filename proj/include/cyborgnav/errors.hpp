#pragma once

#include <stdexcept>
#include <string>

namespace cyborgnav {

/// Invalid configuration or parameter values. The CLI maps this to exit code 1.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string& what) : std::runtime_error("config error: " + what) {}
};

/// Input data that violates an operation's precondition (degenerate geometry,
/// malformed logs, metrics requested on failed trials). Exit code 1.
class DataError : public std::runtime_error
{
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem failures. Exit code 2.
class IoError : public std::runtime_error
{
public:
    explicit IoError(const std::string& what) : std::runtime_error("i/o error: " + what) {}
};

}  // namespace cyborgnav
