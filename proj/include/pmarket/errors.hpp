#pragma once

#include <stdexcept>
#include <string>

namespace pmarket {

/// Raised when an operation's preconditions are violated. Operations that
/// throw DomainError leave their inputs untouched (validate-then-apply).
class DomainError : public std::runtime_error {
public:
    explicit DomainError(std::string message) : std::runtime_error(std::move(message)) {}
};

} // namespace pmarket
