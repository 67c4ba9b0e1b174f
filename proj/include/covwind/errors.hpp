#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace covwind {

// Argument outside the mathematical domain of an operation (t outside [0,1],
// lowering a degree, zero-extent geometry, zero extension vector).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Malformed input data: knot vectors, JSON documents, SVG path data.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what, std::size_t offset = npos)
        : std::runtime_error(what), offset_(offset) {}

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    // Byte offset into the parsed text, or npos when not applicable.
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

// The query point coincides with a primitive in a way the caller should
// have filtered (p equal to a segment endpoint, a ray grazing a vertex).
class DegenerateInputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A loop set breaks the topological preconditions of periodic containment.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Loop pairing on a bi-periodic domain could not find a consistent partner.
class PairingError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Numerically inconsistent state, e.g. the recursion depth cap was exceeded.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace covwind
