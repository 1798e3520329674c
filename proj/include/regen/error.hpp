#pragma once

#include <stdexcept>
#include <string>

namespace regen {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameters. `path()` is a JSON-pointer style
/// location of the offending value, empty when unknown.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what),
          path_(std::move(path)),
          detail_(what) {}

    const std::string& path() const noexcept { return path_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Same error, re-rooted under `prefix`.
    ConfigError under(const std::string& prefix) const { return {prefix + path_, detail_}; }

private:
    std::string path_;
    std::string detail_;
};

/// A precondition of an operation was violated by its arguments.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A simulation exceeded its cycle or event budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

/// Quadrature did not converge or an integral came out non-finite.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The schedule fails the liminf ratio condition and no negative-control
/// override was requested.
class HypothesisError : public Error {
public:
    using Error::Error;
};

}  // namespace regen
