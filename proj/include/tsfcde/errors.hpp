#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsfcde {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Vector/matrix sizes that do not agree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A matrix or operator that cannot be inverted within the configured threshold.
class SingularError : public std::runtime_error {
public:
    SingularError(const std::string& what, std::size_t index)
        : std::runtime_error(what), index_(index) {}

    /// Offending pivot column or eigenvalue index.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// The Gohberg-Semencul representation is not available (leading entry too small).
class GsfInapplicableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Krylov breakdown: an inner-product denominator vanished.
class BreakdownError : public std::runtime_error {
public:
    BreakdownError(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// Non-finite values appeared in the iterates.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, int iteration)
        : std::runtime_error(what), iteration_(iteration) {}

    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// Invalid problem definition (e.g. negative diffusion coefficient).
class ProblemError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A solver failure while advancing a time level; carries the level index.
class LevelError : public std::runtime_error {
public:
    LevelError(const std::string& what, int level)
        : std::runtime_error(what), level_(level) {}

    int level() const noexcept { return level_; }

private:
    int level_;
};

}  // namespace tsfcde
