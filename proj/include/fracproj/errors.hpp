#pragma once

#include <stdexcept>
#include <string>

namespace fracproj {

/// Raised when an operation that needs at least one cell receives an empty set.
class EmptyInputError : public std::invalid_argument {
public:
    explicit EmptyInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A caller-supplied object does not satisfy an operation's precondition
/// (e.g. a cover that is not minimal).
class PreconditionViolation : public std::logic_error {
public:
    explicit PreconditionViolation(const std::string& what) : std::logic_error(what) {}
};

class ExtractionFailed : public std::runtime_error {
public:
    explicit ExtractionFailed(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed point-set, cover or report file.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracproj
