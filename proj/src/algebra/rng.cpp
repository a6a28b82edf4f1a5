#include "lcws/rng.hpp"

#include <cstring>
#include <vector>

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include "lcws/error.hpp"

namespace lcws {

void SystemRng::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        throw Error(ErrorKind::state, "RAND_bytes failed");
}

struct SeededRng::Impl {
    EVP_CIPHER_CTX* ctx = nullptr;
    std::vector<std::uint8_t> zeros;
    ~Impl() { EVP_CIPHER_CTX_free(ctx); }
};

SeededRng::SeededRng(std::uint64_t seed) : impl_(std::make_unique<Impl>()) {
    unsigned char material[8 + 16];
    for (int i = 0; i < 8; ++i) material[i] = static_cast<unsigned char>(seed >> (56 - 8 * i));
    std::memcpy(material + 8, "lcws-seeded-rng\0", 16);
    unsigned char key[SHA256_DIGEST_LENGTH];
    SHA256(material, sizeof(material), key);
    unsigned char iv[16] = {};
    impl_->ctx = EVP_CIPHER_CTX_new();
    if (!impl_->ctx || EVP_EncryptInit_ex(impl_->ctx, EVP_chacha20(), nullptr, key, iv) != 1)
        throw Error(ErrorKind::state, "chacha20 init failed");
}

SeededRng::~SeededRng() = default;

void SeededRng::fill(std::span<std::uint8_t> out) {
    if (out.empty()) return;
    if (impl_->zeros.size() < out.size()) impl_->zeros.resize(out.size());
    int len = 0;
    if (EVP_EncryptUpdate(impl_->ctx, out.data(), &len, impl_->zeros.data(), static_cast<int>(out.size())) != 1)
        throw Error(ErrorKind::state, "chacha20 keystream failed");
}

} // namespace lcws
