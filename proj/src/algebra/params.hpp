#ifndef LCWS_SRC_ALGEBRA_PARAMS_HPP
#define LCWS_SRC_ALGEBRA_PARAMS_HPP

#include <gmpxx.h>

namespace lcws::detail {

// Suite "lcws-ss512-r160": r = 2^159 + 2^17 + 1 (Solinas prime),
// p = c*r - 1 with c the first multiple of 12 above 2^511 / r that makes p prime.
struct CurveParams {
    mpz_class p;        // base field prime, p = 3 (mod 4)
    mpz_class r;        // prime order of G0 and GT
    mpz_class cofactor; // c = (p + 1) / r
    mpz_class sqrt_exp; // (p + 1) / 4
    std::size_t field_bytes;
    std::size_t scalar_bytes;
};

const CurveParams& params();

inline void mod_p(mpz_class& v) { mpz_mod(v.get_mpz_t(), v.get_mpz_t(), params().p.get_mpz_t()); }

inline void mul_mod(mpz_class& out, const mpz_class& a, const mpz_class& b) {
    mpz_mul(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mod_p(out);
}

void write_fixed(const mpz_class& v, std::size_t width, unsigned char* out);
mpz_class read_fixed(const unsigned char* in, std::size_t width);

} // namespace lcws::detail

#endif
