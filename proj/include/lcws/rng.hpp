#ifndef LCWS_RNG_HPP
#define LCWS_RNG_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>

namespace lcws {

/// Source of uniformly random bytes. Implementations are not thread-safe.
class Rng {
public:
    virtual ~Rng() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
};

/// OS-backed randomness (OpenSSL RAND_bytes).
class SystemRng final : public Rng {
public:
    void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic ChaCha20 keystream keyed by SHA-256 of the seed. Identical
/// output on every platform; used for reproducible tests and golden files.
class SeededRng final : public Rng {
public:
    explicit SeededRng(std::uint64_t seed);
    ~SeededRng() override;
    SeededRng(const SeededRng&) = delete;
    SeededRng& operator=(const SeededRng&) = delete;

    void fill(std::span<std::uint8_t> out) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace lcws

#endif
