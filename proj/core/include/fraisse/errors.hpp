#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fraisse {

// Structural precondition violated: mismatched signatures, unknown labels,
// tuple arity errors, malformed inputs.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two operands carry different signatures.
class SignatureMismatchError : public DomainError {
public:
    using DomainError::DomainError;
};

// A bounded search or enumeration exceeded its configured cap.
// `explored` counts the nodes visited before giving up.
class ResourceLimitError : public std::runtime_error {
public:
    ResourceLimitError(const std::string& what, std::uint64_t explored)
        : std::runtime_error(what), explored_(explored) {}

    std::uint64_t explored() const { return explored_; }

private:
    std::uint64_t explored_;
};

}  // namespace fraisse
