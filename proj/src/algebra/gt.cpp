#include "lcws/algebra.hpp"

#include "lcws/error.hpp"
#include "fp2.hpp"

namespace lcws {

using detail::mod_p;
using detail::mul_mod;
using detail::fp2_mul;
using detail::fp2_sqr;
using detail::params;

GTElement GTElement::from_components_unchecked(mpz_class a, mpz_class b) {
    GTElement e;
    e.a_ = std::move(a);
    e.b_ = std::move(b);
    return e;
}

GTElement GTElement::operator*(const GTElement& o) const {
    GTElement out;
    fp2_mul(out.a_, out.b_, a_, b_, o.a_, o.b_);
    return out;
}

GTElement GTElement::inverse() const {
    // 1 / (a + bi) = (a - bi) / (a^2 + b^2)
    mpz_class norm, t;
    mul_mod(norm, a_, a_);
    mul_mod(t, b_, b_);
    norm += t;
    mod_p(norm);
    if (norm == 0) throw Error(ErrorKind::argument, "inverse of zero in F_p2");
    mpz_invert(norm.get_mpz_t(), norm.get_mpz_t(), params().p.get_mpz_t());
    GTElement out;
    mul_mod(out.a_, a_, norm);
    mpz_class nb = -b_;
    mul_mod(out.b_, nb, norm);
    return out;
}

namespace detail {

GTElement fp2_pow(const GTElement& base, const mpz_class& e) {
    mpz_class a = 1, b = 0;
    const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    if (e == 0) return GTElement::identity();
    for (auto i = bits; i-- > 0;) {
        fp2_sqr(a, b);
        if (mpz_tstbit(e.get_mpz_t(), i)) fp2_mul(a, b, a, b, base.real(), base.imag());
    }
    return GTElement::from_components_unchecked(std::move(a), std::move(b));
}

} // namespace detail

GTElement GTElement::pow(const Scalar& e) const { return detail::fp2_pow(*this, e.value()); }

Bytes GTElement::to_bytes() const {
    const auto w = params().field_bytes;
    Bytes out(2 * w);
    detail::write_fixed(a_, w, out.data());
    detail::write_fixed(b_, w, out.data() + w);
    return out;
}

GTElement GTElement::from_bytes(ByteView data) {
    const auto w = params().field_bytes;
    if (data.size() != 2 * w) throw Error(ErrorKind::decode, "GT encoding has wrong length");
    auto a = detail::read_fixed(data.data(), w);
    auto b = detail::read_fixed(data.data() + w, w);
    if (a >= params().p || b >= params().p) throw Error(ErrorKind::decode, "non-canonical GT component");
    auto e = from_components_unchecked(std::move(a), std::move(b));
    if (!detail::fp2_pow(e, params().r).is_identity())
        throw Error(ErrorKind::decode, "GT encoding is outside the order-r subgroup");
    return e;
}

} // namespace lcws
