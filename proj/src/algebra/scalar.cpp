#include "lcws/algebra.hpp"

#include <vector>

#include "lcws/error.hpp"
#include "params.hpp"

namespace lcws {

using detail::params;

const mpz_class& Scalar::order() { return params().r; }

Scalar Scalar::from_u64(std::uint64_t v) {
    mpz_class m;
    mpz_import(m.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return from_mpz(m);
}

Scalar Scalar::from_mpz(const mpz_class& v) {
    Scalar s;
    mpz_mod(s.value_.get_mpz_t(), v.get_mpz_t(), order().get_mpz_t());
    return s;
}

Scalar Scalar::random(Rng& rng) {
    const auto width = params().scalar_bytes;
    std::vector<std::uint8_t> buf(width);
    const auto bits = mpz_sizeinbase(order().get_mpz_t(), 2);
    const auto top_mask = static_cast<std::uint8_t>(0xff >> (8 * width - bits));
    for (;;) {
        rng.fill(buf);
        buf[0] &= top_mask;
        Scalar s;
        s.value_ = detail::read_fixed(buf.data(), width);
        if (s.value_ < order()) return s;
    }
}

Scalar Scalar::random_nonzero(Rng& rng) {
    for (;;) {
        auto s = random(rng);
        if (!s.is_zero()) return s;
    }
}

Scalar Scalar::operator+(const Scalar& o) const { return from_mpz(value_ + o.value_); }
Scalar Scalar::operator-(const Scalar& o) const { return from_mpz(value_ - o.value_); }
Scalar Scalar::operator*(const Scalar& o) const { return from_mpz(value_ * o.value_); }
Scalar Scalar::operator-() const { return from_mpz(-value_); }

Scalar Scalar::inverse() const {
    if (is_zero()) throw Error(ErrorKind::argument, "inverse of zero scalar");
    Scalar s;
    mpz_invert(s.value_.get_mpz_t(), value_.get_mpz_t(), order().get_mpz_t());
    return s;
}

Bytes Scalar::to_bytes() const {
    Bytes out(params().scalar_bytes);
    detail::write_fixed(value_, out.size(), out.data());
    return out;
}

Scalar Scalar::from_bytes(ByteView data) {
    if (data.size() != params().scalar_bytes) throw Error(ErrorKind::decode, "scalar encoding has wrong length");
    Scalar s;
    s.value_ = detail::read_fixed(data.data(), data.size());
    if (s.value_ >= order()) throw Error(ErrorKind::decode, "non-canonical scalar encoding");
    return s;
}

} // namespace lcws
