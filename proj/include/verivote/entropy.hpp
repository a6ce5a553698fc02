#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include <openssl/rand.h>

#include "verivote/bytes.hpp"
#include "verivote/hash.hpp"

namespace verivote {

// All randomness used by the library flows through this interface so that
// elections can be replayed byte-for-byte from a seed.
class EntropySource {
  public:
    virtual ~EntropySource() = default;
    virtual void fill(uint8_t* out, size_t len) = 0;

    Bytes bytes(size_t len) {
        Bytes out(len);
        fill(out.data(), out.size());
        return out;
    }
};

class SystemEntropy final : public EntropySource {
  public:
    void fill(uint8_t* out, size_t len) override {
        if (RAND_bytes(out, int(len)) != 1)
            throw std::runtime_error("system entropy source failed");
    }
};

// Deterministic stream: block_i = SHA256(seed || be64(i)).
class SeededEntropy final : public EntropySource {
  public:
    explicit SeededEntropy(Bytes seed) : seed_(std::move(seed)) {}
    explicit SeededEntropy(std::string_view seed)
        : seed_(seed.begin(), seed.end()) {}

    void fill(uint8_t* out, size_t len) override {
        while (len > 0) {
            if (pos_ == block_.size()) refill();
            size_t take = std::min(len, block_.size() - pos_);
            std::copy_n(block_.data() + pos_, take, out);
            pos_ += take;
            out += take;
            len -= take;
        }
    }

  private:
    void refill() {
        Bytes buf;
        append_field(buf, seed_);
        append_be64(buf, counter_++);
        block_ = sha256(buf);
        pos_ = 0;
    }

    Bytes seed_;
    Digest block_{};
    size_t pos_ = block_.size();
    uint64_t counter_ = 0;
};

// Replays a fixed byte script, for tests that force specific draws.
class ScriptedEntropy final : public EntropySource {
  public:
    explicit ScriptedEntropy(Bytes script) : script_(std::move(script)) {}

    void fill(uint8_t* out, size_t len) override {
        if (script_.size() - pos_ < len)
            throw std::runtime_error("scripted entropy exhausted");
        std::copy_n(script_.data() + pos_, len, out);
        pos_ += len;
    }

  private:
    Bytes script_;
    size_t pos_ = 0;
};

}  // namespace verivote
