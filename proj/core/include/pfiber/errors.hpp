#ifndef PFIBER_ERRORS_HPP
#define PFIBER_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace pfiber {

/// Base class for every domain or validation failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Empty vectors, non-finite coordinates, mismatched lengths.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A vector with two equal coordinates was passed where a typical point is required.
class TieError : public InvalidInput {
public:
    TieError(std::size_t first, std::size_t second)
        : InvalidInput("coordinates " + std::to_string(first) + " and " + std::to_string(second) +
                       " are equal; a typical vector is required"),
          first_(first), second_(second)
    {
    }

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// Requested (N, M) or (N, cv) combination admits no cellular strings.
class Infeasible : public Error {
public:
    using Error::Error;
};

/// A cellular string violates one of the defining clauses (i)-(iv).
class InvalidString : public Error {
public:
    InvalidString(std::string word, std::string clause, const std::string& what)
        : Error("string '" + word + "' violates clause (" + clause + "): " + what),
          word_(std::move(word)), clause_(std::move(clause))
    {
    }

    const std::string& word() const noexcept { return word_; }
    const std::string& clause() const noexcept { return clause_; }

private:
    std::string word_;
    std::string clause_;
};

/// Two operands that must agree in length, poset or parity do not.
class InvalidPair : public Error {
public:
    using Error::Error;
};

/// Operation called outside its domain (e.g. F_l on a string without the X prefix).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A diagram lacks the structure an operation needs (e.g. no infinite point).
class InvalidDiagram : public Error {
public:
    using Error::Error;
};

/// An exhaustive structural check found a counterexample that should not exist.
class StructuralFailure : public Error {
public:
    using Error::Error;
};

/// Numerical integration produced a non-finite state.
class DivergenceError : public Error {
public:
    DivergenceError(double last_valid_time)
        : Error("trajectory diverged after t = " + std::to_string(last_valid_time)),
          last_valid_time_(last_valid_time)
    {
    }

    double last_valid_time() const noexcept { return last_valid_time_; }

private:
    double last_valid_time_;
};

} // namespace pfiber

#endif
