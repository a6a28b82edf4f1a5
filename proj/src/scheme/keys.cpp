#include <algorithm>
#include <mutex>
#include <unordered_map>

#include "lcws/error.hpp"
#include "lcws/scheme.hpp"

namespace lcws {

G0Element attribute_point(std::string_view attribute) {
    static std::mutex mu;
    static std::unordered_map<std::string, G0Element> cache;
    {
        std::lock_guard lk(mu);
        if (auto it = cache.find(std::string(attribute)); it != cache.end()) return it->second;
    }
    auto h = hash_to_g0(kTagAttribute, as_bytes(attribute));
    std::lock_guard lk(mu);
    if (cache.size() >= 4096) cache.clear();
    cache.emplace(attribute, h);
    return h;
}

EncryptionContext encryption_context(const MasterKey& mk) { return {mk.q, mk.k}; }

const AttributeKey* SecretKey::find(std::string_view attribute) const {
    auto it = std::lower_bound(components.begin(), components.end(), attribute,
                               [](const AttributeKey& c, std::string_view a) { return c.attribute < a; });
    return (it != components.end() && it->attribute == attribute) ? &*it : nullptr;
}

AttributeSet SecretKey::attributes() const {
    AttributeSet out;
    for (const auto& c : components) out.insert(c.attribute);
    return out;
}

std::pair<PublicKey, MasterKey> setup(Rng& rng, SetupTrace* trace) {
    const auto& g = G0Element::generator();
    const auto alpha = Scalar::random_nonzero(rng);
    MasterKey mk;
    mk.beta = Scalar::random_nonzero(rng);
    mk.q = Scalar::random_nonzero(rng);
    mk.k = Scalar::random_nonzero(rng);
    mk.g_alpha = g.pow(alpha);
    PublicKey pk{g, g.pow(mk.beta), pair(g, mk.g_alpha)};
    if (trace) trace->alpha = alpha;
    return {std::move(pk), std::move(mk)};
}

SecretKey keygen(const PublicKey& pk, const MasterKey& mk, const AttributeSet& attrs, Rng& rng, KeygenTrace* trace) {
    if (attrs.empty()) throw Error(ErrorKind::argument, "attribute set is empty");
    const auto r = Scalar::random_nonzero(rng);
    const auto g_r = pow_fixed(pk.g, r);
    SecretKey sk;
    // D = (g^alpha * g^r)^{1/beta}
    sk.d = (mk.g_alpha * g_r).pow(mk.beta.inverse());
    sk.d_hat = pow_fixed(pk.g, r * mk.q);
    if (trace) trace->r = r;
    for (const auto& a : attrs) {
        const auto r_j = Scalar::random_nonzero(rng);
        const auto h = attribute_point(a);
        sk.components.push_back({a, g_r * pow_fixed(h, r_j), pow_fixed(pk.g, r_j)});
        if (trace) trace->r_j[a] = r_j;
    }
    return sk;
}

G0Element data_verification(ByteView message, const Scalar& k) { return hash_to_g0(kTagMessage, message).pow(k); }

std::vector<DataBlock> partition_message(ByteView message, std::uint32_t n) {
    if (n == 0) throw Error(ErrorKind::argument, "block count must be at least 1");
    const std::size_t seg = (message.size() + n - 1) / n;
    std::vector<Bytes> segments(n, Bytes(seg, 0));
    for (std::uint32_t i = 0; i < n; ++i) {
        const std::size_t begin = std::min(message.size(), i * seg);
        const std::size_t end = std::min(message.size(), begin + seg);
        std::copy(message.begin() + static_cast<std::ptrdiff_t>(begin),
                  message.begin() + static_cast<std::ptrdiff_t>(end), segments[i].begin());
    }
    std::vector<DataBlock> out;
    out.reserve(n);
    out.push_back({1, segments[0]});
    for (std::uint32_t i = 1; i < n; ++i) {
        Bytes db = segments[i];
        xor_into(db, segments[i - 1]);
        out.push_back({i + 1, std::move(db)});
    }
    return out;
}

Bytes unchain_blocks(std::span<const DataBlock> blocks, std::uint64_t length) {
    if (blocks.empty()) throw Error(ErrorKind::argument, "no blocks to unchain");
    const auto seg = blocks.front().payload.size();
    if (length > seg * blocks.size()) throw Error(ErrorKind::argument, "message length exceeds block capacity");
    Bytes out;
    out.reserve(seg * blocks.size());
    Bytes prev;
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto& b = blocks[k];
        if (b.index != k + 1) throw Error(ErrorKind::argument, "blocks out of order");
        if (b.payload.size() != seg) throw Error(ErrorKind::argument, "blocks differ in length");
        Bytes m = b.payload;
        if (k > 0) xor_into(m, prev);
        out.insert(out.end(), m.begin(), m.end());
        prev = std::move(m);
    }
    out.resize(static_cast<std::size_t>(length));
    return out;
}

VerificationTuple make_challenge(const G0Element& commitment, const MasterKey& mk, Rng& rng, Scalar* t_out) {
    const auto t = Scalar::random_nonzero(rng);
    if (t_out) *t_out = t;
    return {commitment.pow(t / mk.k), G0Element::generator().pow(t)};
}

bool verify_message(ByteView message, const VerificationTuple& v) {
    // An identity V_2 would make both sides trivially equal.
    if (v.v2.is_identity()) return false;
    return pair(hash_to_g0(kTagMessage, message), v.v2) == pair(v.v1, G0Element::generator());
}

} // namespace lcws
