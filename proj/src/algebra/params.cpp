#include "params.hpp"

#include <vector>

namespace lcws::detail {

const CurveParams& params() {
    static const CurveParams instance = [] {
        CurveParams cp;
        cp.p = mpz_class("800000000000000000000000000000000000000000000000000000000000000000000000000000000000033a"
                         "000000000000000000200030001800040ce80673",
                         16);
        cp.r = mpz_class("8000000000000000000000000000000000020001", 16);
        cp.cofactor = (cp.p + 1) / cp.r;
        cp.sqrt_exp = (cp.p + 1) / 4;
        cp.field_bytes = 64;
        cp.scalar_bytes = 20;
        return cp;
    }();
    return instance;
}

void write_fixed(const mpz_class& v, std::size_t width, unsigned char* out) {
    std::size_t count = 0;
    std::vector<unsigned char> tmp(width + 1);
    mpz_export(tmp.data(), &count, 1, 1, 1, 0, v.get_mpz_t());
    std::fill(out, out + width, 0);
    std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(count), out + (width - count));
}

mpz_class read_fixed(const unsigned char* in, std::size_t width) {
    mpz_class v;
    mpz_import(v.get_mpz_t(), width, 1, 1, 1, 0, in);
    return v;
}

} // namespace lcws::detail
