#include "lcws/algebra.hpp"

#include <array>
#include <memory>

#include <openssl/core_names.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>

#include "lcws/error.hpp"
#include "params.hpp"

namespace lcws {

using detail::mul_mod;
using detail::params;

namespace {

struct MdCtxDeleter {
    void operator()(EVP_MD_CTX* c) const { EVP_MD_CTX_free(c); }
};

// SHA-256(len(tag) || tag || counter || lane || msg)
std::array<unsigned char, 32> tagged_digest(std::string_view tag, std::uint32_t counter, std::uint8_t lane,
                                            ByteView msg) {
    std::unique_ptr<EVP_MD_CTX, MdCtxDeleter> ctx(EVP_MD_CTX_new());
    unsigned char prefix[6] = {static_cast<unsigned char>(tag.size()),
                               static_cast<unsigned char>(counter >> 24), static_cast<unsigned char>(counter >> 16),
                               static_cast<unsigned char>(counter >> 8), static_cast<unsigned char>(counter), lane};
    std::array<unsigned char, 32> out{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), prefix, 1) != 1 || EVP_DigestUpdate(ctx.get(), tag.data(), tag.size()) != 1 ||
        EVP_DigestUpdate(ctx.get(), prefix + 1, 5) != 1 ||
        (!msg.empty() && EVP_DigestUpdate(ctx.get(), msg.data(), msg.size()) != 1) ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1)
        throw Error(ErrorKind::state, "SHA-256 failed");
    return out;
}

} // namespace

G0Element hash_to_g0(std::string_view domain_tag, ByteView msg) {
    if (domain_tag.size() > 255) throw Error(ErrorKind::argument, "domain tag longer than 255 bytes");
    const auto& cp = params();
    // Try-and-increment: derive a 512-bit candidate x, keep it if x^3 + x is a
    // nonzero square, pick the root whose parity matches a hash bit, then
    // clear the cofactor.
    for (std::uint32_t counter = 0;; ++counter) {
        std::array<unsigned char, 64> wide{};
        auto d1 = tagged_digest(domain_tag, counter, 1, msg);
        auto d2 = tagged_digest(domain_tag, counter, 2, msg);
        std::copy(d1.begin(), d1.end(), wide.begin());
        std::copy(d2.begin(), d2.end(), wide.begin() + 32);
        mpz_class x = detail::read_fixed(wide.data(), wide.size());
        detail::mod_p(x);
        mpz_class rhs;
        mul_mod(rhs, x, x);
        rhs += 1;
        mul_mod(rhs, rhs, x);
        if (rhs == 0 || mpz_legendre(rhs.get_mpz_t(), cp.p.get_mpz_t()) != 1) continue;
        mpz_class y;
        mpz_powm(y.get_mpz_t(), rhs.get_mpz_t(), cp.sqrt_exp.get_mpz_t(), cp.p.get_mpz_t());
        if (static_cast<int>(mpz_odd_p(y.get_mpz_t())) != (d1[0] & 1)) y = cp.p - y;
        auto pt = G0Element::from_affine_unchecked(std::move(x), std::move(y)).pow_raw(cp.cofactor);
        if (!pt.is_identity()) return pt;
    }
}

void apply_kdf_mask(const GTElement& k, std::span<std::uint8_t> data) {
    if (data.empty()) return;
    static EVP_KDF* kdf = EVP_KDF_fetch(nullptr, "X963KDF", nullptr);
    if (!kdf) throw Error(ErrorKind::state, "X963KDF unavailable");
    EVP_KDF_CTX* ctx = EVP_KDF_CTX_new(kdf);
    if (!ctx) throw Error(ErrorKind::state, "X963KDF context allocation failed");
    auto secret = k.to_bytes();
    static const char info[] = "lcws-mask";
    char digest[] = "SHA256";
    OSSL_PARAM ps[] = {
        OSSL_PARAM_construct_utf8_string(OSSL_KDF_PARAM_DIGEST, digest, 0),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_KEY, secret.data(), secret.size()),
        OSSL_PARAM_construct_octet_string(OSSL_KDF_PARAM_INFO, const_cast<char*>(info), sizeof(info) - 1),
        OSSL_PARAM_construct_end(),
    };
    Bytes stream(data.size());
    const int rc = EVP_KDF_derive(ctx, stream.data(), stream.size(), ps);
    EVP_KDF_CTX_free(ctx);
    if (rc != 1) throw Error(ErrorKind::state, "X963KDF derive failed");
    xor_into(data, stream);
}

Bytes kdf_mask(const GTElement& k, std::size_t out_len) {
    if (out_len == 0) throw Error(ErrorKind::argument, "kdf_mask length must be positive");
    Bytes out(out_len, 0);
    apply_kdf_mask(k, out);
    return out;
}

const SuiteInfo& suite() {
    static const SuiteInfo info{kSuiteId, "lcws-ss512-r160", params().scalar_bytes, 2 * params().field_bytes,
                                2 * params().field_bytes};
    return info;
}

} // namespace lcws
