#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace pmarket {

using Digest = std::array<std::uint8_t, 32>;

/// SHA-256 of the given bytes; the one hash used everywhere in the project.
Digest sha256(std::string_view data);

std::string to_hex(const Digest& digest);

/// Parses a 64-character lowercase/uppercase hex string. Throws DomainError.
Digest digest_from_hex(std::string_view hex);

/// Identity of a bet: the digest of the event's textual description.
struct EventId {
    Digest digest{};

    auto operator<=>(const EventId&) const = default;

    std::string hex() const { return to_hex(digest); }
    /// Short prefix used in human-readable traces.
    std::string short_hex() const { return to_hex(digest).substr(0, 8); }
};

/// eid = hash("Textual description of an event"). Rejects empty descriptions.
EventId derive_event_id(std::string_view description);

} // namespace pmarket
