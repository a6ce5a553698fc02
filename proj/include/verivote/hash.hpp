#pragma once

#include <array>
#include <stdexcept>

#include <openssl/evp.h>

#include "verivote/bytes.hpp"

namespace verivote {

using Digest = std::array<uint8_t, 32>;

inline Digest sha256(const uint8_t* data, size_t len) {
    Digest out;
    unsigned outlen = 0;
    if (EVP_Digest(data, len, out.data(), &outlen, EVP_sha256(), nullptr) != 1 ||
        outlen != out.size())
        throw std::runtime_error("sha256 failed");
    return out;
}

inline Digest sha256(const Bytes& data) {
    return sha256(data.data(), data.size());
}

inline Digest sha256(std::string_view data) {
    return sha256(reinterpret_cast<const uint8_t*>(data.data()), data.size());
}

inline std::string sha256_hex(const Bytes& data) {
    auto d = sha256(data);
    return to_hex(d.data(), d.size());
}

inline std::string sha256_hex(std::string_view data) {
    auto d = sha256(data);
    return to_hex(d.data(), d.size());
}

}  // namespace verivote
