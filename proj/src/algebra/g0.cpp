#include "lcws/algebra.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "lcws/error.hpp"
#include "params.hpp"

namespace lcws {

using detail::mod_p;
using detail::mul_mod;
using detail::params;

namespace {

// Jacobian point (X : Y : Z) representing (X/Z^2, Y/Z^3); Z == 0 is infinity.
struct Jacobian {
    mpz_class x, y, z;
    bool infinity() const { return z == 0; }
};

// Curve y^2 = x^3 + a*x with a = 1.
void dbl(Jacobian& pt) {
    if (pt.infinity() || pt.y == 0) {
        pt.z = 0;
        return;
    }
    mpz_class yy, s, zz, m, t;
    mul_mod(yy, pt.y, pt.y);
    mul_mod(s, pt.x, yy);
    s *= 4;
    mod_p(s);
    mul_mod(zz, pt.z, pt.z);
    mul_mod(m, pt.x, pt.x);
    m *= 3;
    mul_mod(t, zz, zz);
    m += t;
    mod_p(m);
    // Z3 = 2*Y*Z (uses the old Y)
    mul_mod(pt.z, pt.y, pt.z);
    pt.z *= 2;
    mod_p(pt.z);
    // X3 = M^2 - 2S
    mul_mod(pt.x, m, m);
    pt.x -= 2 * s;
    mod_p(pt.x);
    // Y3 = M(S - X3) - 8 YY^2
    mul_mod(t, yy, yy);
    t *= 8;
    s -= pt.x;
    mul_mod(pt.y, m, s);
    pt.y -= t;
    mod_p(pt.y);
}

// pt += (ax, ay), affine second operand.
void add_mixed(Jacobian& pt, const mpz_class& ax, const mpz_class& ay) {
    if (pt.infinity()) {
        pt.x = ax;
        pt.y = ay;
        pt.z = 1;
        return;
    }
    mpz_class z1z1, u2, s2, h, r;
    mul_mod(z1z1, pt.z, pt.z);
    mul_mod(u2, ax, z1z1);
    mul_mod(s2, ay, pt.z);
    mul_mod(s2, s2, z1z1);
    h = u2 - pt.x;
    mod_p(h);
    r = s2 - pt.y;
    mod_p(r);
    if (h == 0) {
        if (r == 0) {
            dbl(pt);
        } else {
            pt.z = 0;
        }
        return;
    }
    mpz_class hh, hhh, v, t;
    mul_mod(hh, h, h);
    mul_mod(hhh, h, hh);
    mul_mod(v, pt.x, hh);
    mul_mod(pt.x, r, r);
    pt.x -= hhh + 2 * v;
    mod_p(pt.x);
    mul_mod(t, pt.y, hhh);
    v -= pt.x;
    mul_mod(pt.y, r, v);
    pt.y -= t;
    mod_p(pt.y);
    mul_mod(pt.z, pt.z, h);
}

bool on_curve(const mpz_class& x, const mpz_class& y) {
    mpz_class lhs, rhs;
    mul_mod(lhs, y, y);
    mul_mod(rhs, x, x);
    rhs += 1;
    mul_mod(rhs, rhs, x);
    return lhs == rhs;
}

} // namespace

G0Element G0Element::from_affine_unchecked(mpz_class x, mpz_class y) {
    G0Element e;
    e.x_ = std::move(x);
    e.y_ = std::move(y);
    e.infinity_ = false;
    return e;
}

const G0Element& G0Element::generator() {
    static const G0Element g = hash_to_g0("lcws-generator", {});
    return g;
}

bool G0Element::operator==(const G0Element& o) const {
    if (infinity_ || o.infinity_) return infinity_ == o.infinity_;
    return x_ == o.x_ && y_ == o.y_;
}

G0Element G0Element::inverse() const {
    if (infinity_) return *this;
    mpz_class ny = params().p - y_;
    mod_p(ny);
    return from_affine_unchecked(x_, ny);
}

G0Element G0Element::operator*(const G0Element& o) const {
    if (infinity_) return o;
    if (o.infinity_) return *this;
    const auto& p = params().p;
    mpz_class lambda, t;
    if (x_ == o.x_) {
        if (y_ != o.y_ || y_ == 0) return identity();
        // tangent slope (3x^2 + 1) / 2y
        mul_mod(lambda, x_, x_);
        lambda = 3 * lambda + 1;
        t = 2 * y_;
    } else {
        lambda = o.y_ - y_;
        t = o.x_ - x_;
    }
    mod_p(t);
    mpz_invert(t.get_mpz_t(), t.get_mpz_t(), p.get_mpz_t());
    mul_mod(lambda, lambda, t);
    mpz_class x3, y3;
    mul_mod(x3, lambda, lambda);
    x3 -= x_ + o.x_;
    mod_p(x3);
    t = x_ - x3;
    mul_mod(y3, lambda, t);
    y3 -= y_;
    mod_p(y3);
    return from_affine_unchecked(std::move(x3), std::move(y3));
}

G0Element G0Element::pow_raw(const mpz_class& e) const {
    if (infinity_ || e == 0) return identity();
    if (e < 0) return inverse().pow_raw(-e);
    Jacobian acc{0, 1, 0};
    const auto bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (auto i = bits; i-- > 0;) {
        dbl(acc);
        if (mpz_tstbit(e.get_mpz_t(), i)) add_mixed(acc, x_, y_);
    }
    if (acc.infinity()) return identity();
    mpz_class zinv, zinv2, x, y;
    mpz_invert(zinv.get_mpz_t(), acc.z.get_mpz_t(), params().p.get_mpz_t());
    mul_mod(zinv2, zinv, zinv);
    mul_mod(x, acc.x, zinv2);
    mul_mod(zinv2, zinv2, zinv);
    mul_mod(y, acc.y, zinv2);
    return from_affine_unchecked(std::move(x), std::move(y));
}

G0Element G0Element::pow(const Scalar& e) const { return pow_raw(e.value()); }

Bytes G0Element::to_bytes() const {
    const auto w = params().field_bytes;
    Bytes out(2 * w, 0);
    if (!infinity_) {
        detail::write_fixed(x_, w, out.data());
        detail::write_fixed(y_, w, out.data() + w);
    }
    return out;
}

G0Element G0Element::from_bytes(ByteView data) {
    const auto w = params().field_bytes;
    if (data.size() != 2 * w) throw Error(ErrorKind::decode, "G0 encoding has wrong length");
    auto x = detail::read_fixed(data.data(), w);
    auto y = detail::read_fixed(data.data() + w, w);
    // (0, 0) lies on the curve but has order 2, so the all-zero string is free to mean infinity.
    if (x == 0 && y == 0) return identity();
    if (x >= params().p || y >= params().p) throw Error(ErrorKind::decode, "non-canonical G0 coordinate");
    if (!on_curve(x, y)) throw Error(ErrorKind::decode, "G0 encoding is not on the curve");
    auto pt = from_affine_unchecked(std::move(x), std::move(y));
    if (!pt.pow_raw(params().r).is_identity()) throw Error(ErrorKind::decode, "G0 encoding is outside the order-r subgroup");
    return pt;
}

namespace {

constexpr std::size_t kRows = 40; // 4-bit digits of a 160-bit exponent
constexpr std::size_t kDigits = 15;

} // namespace

G0PowTable::G0PowTable(const G0Element& base) : base_(base) {
    if (mpz_sizeinbase(params().r.get_mpz_t(), 2) > 4 * kRows)
        throw Error(ErrorKind::state, "group order too large for the table layout");
    if (base.is_identity()) return;
    xs_.reserve(kRows * kDigits);
    ys_.reserve(kRows * kDigits);
    mpz_class bx = base.x(), by = base.y();
    std::vector<Jacobian> row(kDigits + 1);
    std::vector<mpz_class> prefix(kDigits + 1);
    for (std::size_t j = 0; j < kRows; ++j) {
        // row[d - 1] = d * B, row[15] = 16 * B, all Jacobian
        row[0] = {bx, by, 1};
        for (std::size_t d = 1; d <= kDigits; ++d) {
            row[d] = row[d - 1];
            add_mixed(row[d], bx, by);
        }
        // one inversion per row (Montgomery's trick)
        for (std::size_t k = 0; k <= kDigits; ++k) {
            if (row[k].infinity()) {
                xs_.clear();
                ys_.clear();
                return; // not in the prime-order subgroup; pow() falls back
            }
            if (k == 0) prefix[0] = row[0].z;
            else mul_mod(prefix[k], prefix[k - 1], row[k].z);
        }
        mpz_class inv;
        mpz_invert(inv.get_mpz_t(), prefix[kDigits].get_mpz_t(), params().p.get_mpz_t());
        std::vector<mpz_class> ax(kDigits + 1), ay(kDigits + 1);
        for (std::size_t k = kDigits + 1; k-- > 0;) {
            mpz_class zinv, z2, z3;
            if (k) mul_mod(zinv, inv, prefix[k - 1]);
            else zinv = inv;
            mul_mod(inv, inv, row[k].z);
            mul_mod(z2, zinv, zinv);
            mul_mod(z3, z2, zinv);
            mul_mod(ax[k], row[k].x, z2);
            mul_mod(ay[k], row[k].y, z3);
        }
        for (std::size_t d = 0; d < kDigits; ++d) {
            xs_.push_back(std::move(ax[d]));
            ys_.push_back(std::move(ay[d]));
        }
        bx = std::move(ax[kDigits]);
        by = std::move(ay[kDigits]);
    }
}

G0Element G0PowTable::pow(const Scalar& e) const {
    if (xs_.empty()) return base_.pow(e);
    const auto& v = e.value();
    Jacobian acc{0, 1, 0};
    for (std::size_t j = 0; j < kRows; ++j) {
        unsigned digit = 0;
        for (unsigned b = 0; b < 4; ++b) digit |= static_cast<unsigned>(mpz_tstbit(v.get_mpz_t(), 4 * j + b)) << b;
        if (digit) add_mixed(acc, xs_[j * kDigits + digit - 1], ys_[j * kDigits + digit - 1]);
    }
    if (acc.infinity()) return G0Element::identity();
    mpz_class zinv, zinv2, x, y;
    mpz_invert(zinv.get_mpz_t(), acc.z.get_mpz_t(), params().p.get_mpz_t());
    mul_mod(zinv2, zinv, zinv);
    mul_mod(x, acc.x, zinv2);
    mul_mod(zinv2, zinv2, zinv);
    mul_mod(y, acc.y, zinv2);
    return G0Element::from_affine_unchecked(std::move(x), std::move(y));
}

G0Element pow_fixed(const G0Element& base, const Scalar& e) {
    struct Entry {
        unsigned uses = 0;
        std::shared_ptr<const G0PowTable> table;
    };
    static std::mutex mu;
    static std::map<Bytes, Entry> cache;

    auto key = base.to_bytes();
    std::shared_ptr<const G0PowTable> table;
    {
        std::lock_guard lk(mu);
        auto& entry = cache[key];
        table = entry.table;
        if (!table && ++entry.uses < 2) return base.pow(e);
    }
    if (!table) {
        table = std::make_shared<const G0PowTable>(base);
        std::lock_guard lk(mu);
        if (cache.size() > 512) cache.clear();
        cache[key].table = table;
    }
    return table->pow(e);
}

} // namespace lcws
