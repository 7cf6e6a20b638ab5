#pragma once

#include <stdexcept>
#include <string>

namespace drinfeld {

// Raised when caller-supplied data violates a precondition. The message is
// prefixed with the module that rejected it, e.g. "ff-core: ...".
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string module, const std::string& what)
        : std::invalid_argument(module + ": " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

// Raised when an internal invariant fails. These signal a bug or corrupted
// input that slipped past validation, never an ordinary data condition.
class InvariantViolation : public std::logic_error {
public:
    InvariantViolation(std::string module, const std::string& what)
        : std::logic_error(module + ": invariant violated: " + what), module_(std::move(module)) {}

    const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

} // namespace drinfeld
