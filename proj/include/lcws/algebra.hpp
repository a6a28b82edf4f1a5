#ifndef LCWS_ALGEBRA_HPP
#define LCWS_ALGEBRA_HPP

// Symmetric (type-1) pairing group over the supersingular curve
// y^2 = x^3 + x on F_p, p = 3 (mod 4), embedding degree 2.
//
//   G0 : order-r subgroup of E(F_p)
//   GT : order-r subgroup of F_p2^* with F_p2 = F_p[i], i^2 = -1
//   e  : reduced Tate pairing composed with the distortion map (x, y) -> (-x, iy)
//
// All values are immutable after construction and safe to share between threads.

#include <cstdint>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "lcws/bytes.hpp"
#include "lcws/rng.hpp"

namespace lcws {

/// Parameters of the single compiled-in suite.
struct SuiteInfo {
    std::uint16_t id;
    const char* name;
    std::size_t scalar_bytes;
    std::size_t g0_bytes;
    std::size_t gt_bytes;
};

const SuiteInfo& suite();

constexpr std::uint16_t kSuiteId = 1;

/// Element of Z_r where r is the prime group order.
class Scalar {
public:
    Scalar() = default;

    static Scalar from_u64(std::uint64_t v);
    /// Reduces an arbitrary (possibly negative) integer mod r.
    static Scalar from_mpz(const mpz_class& v);
    static Scalar random(Rng& rng);
    static Scalar random_nonzero(Rng& rng);
    static const mpz_class& order();

    bool is_zero() const { return value_ == 0; }
    const mpz_class& value() const { return value_; }

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator-() const;
    /// Throws an argument error for zero.
    Scalar inverse() const;
    Scalar operator/(const Scalar& o) const { return *this * o.inverse(); }

    bool operator==(const Scalar& o) const { return value_ == o.value_; }

    Bytes to_bytes() const;
    /// Fixed-length big-endian; rejects values >= r.
    static Scalar from_bytes(ByteView data);

private:
    mpz_class value_{0};
};

/// Element of the source group G0, kept in affine coordinates.
class G0Element {
public:
    /// Identity (point at infinity).
    G0Element() = default;

    static const G0Element& generator();
    static G0Element identity() { return {}; }

    bool is_identity() const { return infinity_; }
    const mpz_class& x() const { return x_; }
    const mpz_class& y() const { return y_; }

    G0Element operator*(const G0Element& o) const;
    G0Element inverse() const;
    G0Element operator/(const G0Element& o) const { return *this * o.inverse(); }
    G0Element pow(const Scalar& e) const;
    /// Exponent taken as a raw non-negative integer (used for cofactor clearing and subgroup checks).
    G0Element pow_raw(const mpz_class& e) const;

    bool operator==(const G0Element& o) const;

    /// x || y, each a fixed-width big-endian field element. Identity is all zeros.
    Bytes to_bytes() const;
    /// Accepts only canonical encodings of points in the order-r subgroup.
    static G0Element from_bytes(ByteView data);

    static G0Element from_affine_unchecked(mpz_class x, mpz_class y);

private:
    mpz_class x_, y_;
    bool infinity_ = true;
};

/// Precomputed multiples d * 16^j * base (d = 1..15, j = 0..39) in affine
/// form; an exponentiation is then at most 40 mixed additions.
class G0PowTable {
public:
    explicit G0PowTable(const G0Element& base);
    const G0Element& base() const { return base_; }
    G0Element pow(const Scalar& e) const;

private:
    G0Element base_;
    std::vector<mpz_class> xs_, ys_; // row-major, 15 per row
};

/// base^e for bases used over and over (generator, public-key elements,
/// attribute hashes). A table is built on the second use of a base and kept
/// in a small process-wide cache. Thread-safe.
G0Element pow_fixed(const G0Element& base, const Scalar& e);

/// Element of the target group GT (a + b*i in F_p2).
class GTElement {
public:
    /// Identity.
    GTElement() : a_(1), b_(0) {}

    static GTElement identity() { return {}; }
    static GTElement from_components_unchecked(mpz_class a, mpz_class b);

    bool is_identity() const { return a_ == 1 && b_ == 0; }
    const mpz_class& real() const { return a_; }
    const mpz_class& imag() const { return b_; }

    GTElement operator*(const GTElement& o) const;
    GTElement inverse() const;
    GTElement operator/(const GTElement& o) const { return *this * o.inverse(); }
    GTElement pow(const Scalar& e) const;

    bool operator==(const GTElement& o) const { return a_ == o.a_ && b_ == o.b_; }

    Bytes to_bytes() const;
    /// Accepts only canonical encodings of elements of the order-r subgroup.
    static GTElement from_bytes(ByteView data);

private:
    mpz_class a_, b_;
};

/// Bilinear, non-degenerate, symmetric map G0 x G0 -> GT.
GTElement pair(const G0Element& u, const G0Element& v);

inline constexpr std::string_view kTagMessage = "Hv";
inline constexpr std::string_view kTagAttribute = "Hatt";

/// Deterministic hash onto G0 with domain separation by tag.
G0Element hash_to_g0(std::string_view domain_tag, ByteView msg);

/// ANSI X9.63 KDF (SHA-256) keystream keyed by the canonical encoding of k.
Bytes kdf_mask(const GTElement& k, std::size_t out_len);
/// data ^= kdf_mask(k, data.size()).
void apply_kdf_mask(const GTElement& k, std::span<std::uint8_t> data);

} // namespace lcws

#endif
