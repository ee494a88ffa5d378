#include "pmarket/hash.hpp"
#include "pmarket/errors.hpp"

#include <openssl/evp.h>

namespace pmarket {

Digest sha256(std::string_view data)
{
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 || len != out.size())
        throw std::runtime_error("SHA-256 failed");
    return out;
}

std::string to_hex(const Digest& digest)
{
    static constexpr char alphabet[] = "0123456789abcdef";
    std::string s;
    s.reserve(64);
    for (auto b : digest) {
        s.push_back(alphabet[b >> 4]);
        s.push_back(alphabet[b & 0x0f]);
    }
    return s;
}

Digest digest_from_hex(std::string_view hex)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    if (hex.size() != 64)
        throw DomainError("digest hex must be 64 characters");
    Digest out{};
    for (std::size_t i = 0; i < 32; ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw DomainError("invalid digest hex");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

EventId derive_event_id(std::string_view description)
{
    if (description.empty())
        throw DomainError("event description must be nonempty");
    return EventId{sha256(description)};
}

} // namespace pmarket
