#ifndef LCWS_SRC_ALGEBRA_FP2_HPP
#define LCWS_SRC_ALGEBRA_FP2_HPP

#include "lcws/algebra.hpp"
#include "params.hpp"

namespace lcws::detail {

// (a + bi)(c + di) with three base-field multiplications. Outputs may alias inputs.
inline void fp2_mul(mpz_class& ra, mpz_class& rb, const mpz_class& a, const mpz_class& b, const mpz_class& c,
                    const mpz_class& d) {
    mpz_class t1, t2, t3, s1, s2;
    mul_mod(t1, a, c);
    mul_mod(t2, b, d);
    s1 = a + b;
    s2 = c + d;
    mul_mod(t3, s1, s2);
    ra = t1 - t2;
    mod_p(ra);
    rb = t3 - t1 - t2;
    mod_p(rb);
}

inline void fp2_sqr(mpz_class& a, mpz_class& b) {
    mpz_class s = a + b, d = a - b, ab;
    mul_mod(ab, a, b);
    mul_mod(a, s, d);
    b = 2 * ab;
    mod_p(b);
}

GTElement fp2_pow(const GTElement& base, const mpz_class& e);

} // namespace lcws::detail

#endif
