#pragma once

#include <stdexcept>
#include <string>

namespace cfdim {

// Each failure carries a category; the CLI maps categories to exit codes.
enum class ErrorKind { Domain, Resource, Invariant };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorKind::Domain, w) {}
};

// bad or incomplete configuration (missing exponents, short horizons); reported like a domain error
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::Domain, "configuration: " + w) {}
};

struct RangeError : Error {
    explicit RangeError(const std::string& w) : Error(ErrorKind::Domain, "range: " + w) {}
};

struct ResourceError : Error {
    explicit ResourceError(const std::string& w) : Error(ErrorKind::Resource, w) {}
};

struct InvariantViolation : Error {
    explicit InvariantViolation(const std::string& w) : Error(ErrorKind::Invariant, w) {}
};

// Raised by the even-quotient selector when the target leaves the feasible window.
struct InfeasibleSelection : InvariantViolation {
    enum class Side { Below, AtOrAbove };
    InfeasibleSelection(Side s, const std::string& w) : InvariantViolation(w), side(s) {}
    Side side;
};

} // namespace cfdim
