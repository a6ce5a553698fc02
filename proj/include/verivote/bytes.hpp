#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace verivote {

using Bytes = std::vector<uint8_t>;

inline void append_be32(Bytes& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

inline void append_be64(Bytes& out, uint64_t v) {
    append_be32(out, uint32_t(v >> 32));
    append_be32(out, uint32_t(v));
}

// Length-prefixed field: be32(len) || bytes. Concatenations of these are
// injective, which is all the canonical encodings below rely on.
inline void append_field(Bytes& out, std::string_view field) {
    append_be32(out, uint32_t(field.size()));
    out.insert(out.end(), field.begin(), field.end());
}

inline void append_field(Bytes& out, const Bytes& field) {
    append_be32(out, uint32_t(field.size()));
    out.insert(out.end(), field.begin(), field.end());
}

inline std::string to_hex(const uint8_t* data, size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        s.push_back(digits[data[i] >> 4]);
        s.push_back(digits[data[i] & 0xf]);
    }
    return s;
}

inline std::string to_hex(const Bytes& data) {
    return to_hex(data.data(), data.size());
}

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("bad hex digit");
    };
    if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
    Bytes out(hex.size() / 2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = uint8_t(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    return out;
}

}  // namespace verivote
