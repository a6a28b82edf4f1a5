#include "lcws/algebra.hpp"

#include "fp2.hpp"

namespace lcws {

using detail::fp2_mul;
using detail::fp2_sqr;
using detail::mod_p;
using detail::mul_mod;
using detail::params;

GTElement pair(const G0Element& u, const G0Element& v) {
    if (u.is_identity() || v.is_identity()) return GTElement::identity();
    const auto& cp = params();
    const auto& r = cp.r;

    // Miller loop computing f_{r,u} at psi(v) = (-x_v, i*y_v). Vertical lines
    // evaluate into F_p and are erased by the final exponentiation, so only
    // the tangent/chord lines are accumulated.
    const mpz_class& qx = v.x();
    const mpz_class& qy = v.y();
    mpz_class tx = u.x(), ty = u.y();
    mpz_class fa = 1, fb = 0;
    mpz_class lambda, t, la, x3, y3;

    // f *= (lambda*(x_v + x_T) - y_T) + i*y_v, then T <- line's third point.
    auto step = [&](const mpz_class& other_x) {
        t = qx + tx;
        mul_mod(la, lambda, t);
        la -= ty;
        mod_p(la);
        fp2_mul(fa, fb, fa, fb, la, qy);
        mul_mod(x3, lambda, lambda);
        x3 -= tx + other_x;
        mod_p(x3);
        t = tx - x3;
        mul_mod(y3, lambda, t);
        y3 -= ty;
        mod_p(y3);
        tx.swap(x3);
        ty.swap(y3);
    };

    const auto bits = mpz_sizeinbase(r.get_mpz_t(), 2);
    for (auto i = bits - 1; i-- > 0;) {
        fp2_sqr(fa, fb);
        mul_mod(lambda, tx, tx);
        lambda = 3 * lambda + 1;
        t = 2 * ty;
        mpz_invert(t.get_mpz_t(), t.get_mpz_t(), cp.p.get_mpz_t());
        mul_mod(lambda, lambda, t);
        step(tx);
        if (mpz_tstbit(r.get_mpz_t(), i)) {
            if (tx == u.x()) {
                // T == -u: the chord is vertical and T + u is infinity. Only
                // reachable on the last bit, since u has order r.
                continue;
            }
            lambda = u.y() - ty;
            t = u.x() - tx;
            mod_p(t);
            mpz_invert(t.get_mpz_t(), t.get_mpz_t(), cp.p.get_mpz_t());
            mul_mod(lambda, lambda, t);
            step(u.x());
        }
    }

    // Final exponentiation by (p^2 - 1)/r = (p - 1) * c. The Frobenius on
    // F_p2 is conjugation, so f^(p-1) = conj(f) / f.
    auto f = GTElement::from_components_unchecked(fa, fb);
    mpz_class nb = -fb;
    mod_p(nb);
    auto frob = GTElement::from_components_unchecked(fa, nb);
    return detail::fp2_pow(frob / f, cp.cofactor);
}

} // namespace lcws
