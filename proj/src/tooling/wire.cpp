#include "lcws/wire.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "lcws/error.hpp"

namespace lcws {

namespace fs = std::filesystem;

namespace {

constexpr char kCtbMagic[4] = {'L', 'C', 'W', 'S'};
constexpr std::uint8_t kFlagCommitment = 0x01;
constexpr std::uint8_t kFlagSentinel = 0x02;

void write_preamble(ByteWriter& w, const char (&magic)[5]) {
    w.raw(as_bytes(std::string_view(magic, 4)));
    w.u16(kWireVersion);
    w.u16(suite().id);
}

void read_preamble(ByteReader& r, const char (&magic)[5], const char* what) {
    auto m = r.raw(4);
    if (std::memcmp(m.data(), magic, 4) != 0) throw Error(ErrorKind::format, std::string("bad magic for ") + what);
    if (r.u16() != kWireVersion) throw Error(ErrorKind::format, std::string("unsupported version of ") + what);
    if (r.u16() != suite().id) throw Error(ErrorKind::format, std::string("unknown suite in ") + what);
}

template <typename T>
T parse_section(ByteReader& r, T (*decode)(ByteView)) {
    return decode(r.section());
}

template <typename Seq>
void require_ascending(const Seq& v, const char* what) {
    for (std::size_t k = 1; k < v.size(); ++k)
        if (!(v[k - 1].node < v[k].node)) throw Error(ErrorKind::decode, std::string(what) + " not in ascending order");
}

} // namespace

Bytes encode_descriptor(const LevelDescriptor& d) {
    ByteWriter w;
    w.u32(d.level);
    w.u32(static_cast<std::uint32_t>(d.nodes.size()));
    for (const auto& n : d.nodes) {
        w.u32(n.id);
        w.u32(n.parent);
        w.u32(n.index);
        w.u8(n.leaf ? 1 : 0);
        if (n.leaf) {
            if (n.attribute.size() > 0xffff) throw Error(ErrorKind::argument, "attribute name too long");
            w.u16(static_cast<std::uint16_t>(n.attribute.size()));
            w.raw(as_bytes(n.attribute));
        } else {
            w.u32(n.threshold);
            w.u32(n.child_count);
        }
    }
    return std::move(w).take();
}

LevelDescriptor decode_descriptor(ByteView data) {
    ByteReader r(data);
    LevelDescriptor d;
    d.level = r.u32();
    const auto count = r.u32();
    if (count > r.remaining() / 13) throw Error(ErrorKind::decode, "descriptor node count exceeds buffer");
    for (std::uint32_t k = 0; k < count; ++k) {
        DescriptorNode n;
        n.id = r.u32();
        n.parent = r.u32();
        n.index = r.u32();
        const auto kind = r.u8();
        if (kind == 1) {
            n.leaf = true;
            auto a = r.raw(r.u16());
            n.attribute.assign(a.begin(), a.end());
            if (n.attribute.empty()) throw Error(ErrorKind::decode, "empty attribute in descriptor");
        } else if (kind == 0) {
            n.threshold = r.u32();
            n.child_count = r.u32();
            if (n.threshold < 1 || n.threshold > n.child_count)
                throw Error(ErrorKind::decode, "descriptor gate threshold out of range");
        } else {
            throw Error(ErrorKind::decode, "unknown descriptor node kind");
        }
        if (n.id == 0 || (!d.nodes.empty() && d.nodes.back().id >= n.id))
            throw Error(ErrorKind::decode, "descriptor node ids not strictly ascending");
        d.nodes.push_back(std::move(n));
    }
    r.expect_done("level descriptor");
    return d;
}

Bytes serialize_ctb(const CiphertextBlock& ctb) {
    ByteWriter w;
    write_preamble(w, "LCWS");
    w.raw(ctb.message_id);
    w.u32(ctb.index);
    w.u32(ctb.count);
    std::uint8_t flags = 0;
    if (ctb.commitment) flags |= kFlagCommitment;
    if (ctb.has_sentinel_sec()) flags |= kFlagSentinel;
    w.u8(flags);

    ByteWriter header;
    header.u64(ctb.header.message_length);
    header.u32(ctb.header.block_length);
    w.section(header.bytes());
    w.section(encode_descriptor(ctb.descriptor));
    w.section(ctb.c_tilde);
    w.section(ctb.c.to_bytes());
    if (ctb.commitment) w.section(ctb.commitment->to_bytes());

    ByteWriter deltas;
    deltas.u32(static_cast<std::uint32_t>(ctb.deltas.size()));
    for (const auto& d : ctb.deltas) {
        deltas.u32(d.node);
        deltas.raw(d.value.to_bytes());
    }
    w.section(deltas.bytes());

    ByteWriter leaves;
    leaves.u32(static_cast<std::uint32_t>(ctb.leaves.size()));
    for (const auto& l : ctb.leaves) {
        leaves.u32(l.node);
        leaves.raw(l.c_hat.to_bytes());
        leaves.raw(l.c_hat_prime.to_bytes());
    }
    w.section(leaves.bytes());
    return std::move(w).take();
}

CiphertextBlock parse_ctb(ByteView data) {
    ByteReader r(data);
    read_preamble(r, "LCWS", "ciphertext block");
    CiphertextBlock ctb;
    auto id = r.raw(ctb.message_id.size());
    std::copy(id.begin(), id.end(), ctb.message_id.begin());
    ctb.index = r.u32();
    ctb.count = r.u32();
    const auto flags = r.u8();
    if (ctb.count == 0 || ctb.index == 0 || ctb.index > ctb.count)
        throw Error(ErrorKind::decode, "block index out of range");
    if (flags & ~(kFlagCommitment | kFlagSentinel)) throw Error(ErrorKind::decode, "unknown flag bits");
    if (bool(flags & kFlagCommitment) != (ctb.index == 1))
        throw Error(ErrorKind::decode, "commitment flag must be set exactly on the first block");
    if (bool(flags & kFlagSentinel) != (ctb.index == ctb.count))
        throw Error(ErrorKind::decode, "sentinel flag must be set exactly on the last block");

    {
        ByteReader h(r.section());
        ctb.header.message_length = h.u64();
        ctb.header.block_length = h.u32();
        h.expect_done("block header");
    }
    ctb.descriptor = decode_descriptor(r.section());
    if (ctb.descriptor.level != ctb.index) throw Error(ErrorKind::decode, "descriptor level differs from block index");
    auto ct = r.section();
    ctb.c_tilde.assign(ct.begin(), ct.end());
    ctb.c = parse_section(r, &G0Element::from_bytes);
    if (flags & kFlagCommitment) ctb.commitment = parse_section(r, &G0Element::from_bytes);

    const auto g0 = suite().g0_bytes;
    {
        ByteReader d(r.section());
        const auto count = d.u32();
        if (count > d.remaining() / (4 + g0)) throw Error(ErrorKind::decode, "delta count exceeds section");
        for (std::uint32_t k = 0; k < count; ++k) {
            DeltaComponent c;
            c.node = d.u32();
            c.value = G0Element::from_bytes(d.raw(g0));
            ctb.deltas.push_back(std::move(c));
        }
        d.expect_done("delta components");
    }
    {
        ByteReader l(r.section());
        const auto count = l.u32();
        if (count > l.remaining() / (4 + 2 * g0)) throw Error(ErrorKind::decode, "leaf count exceeds section");
        for (std::uint32_t k = 0; k < count; ++k) {
            LeafComponent c;
            c.node = l.u32();
            c.c_hat = G0Element::from_bytes(l.raw(g0));
            c.c_hat_prime = G0Element::from_bytes(l.raw(g0));
            ctb.leaves.push_back(std::move(c));
        }
        l.expect_done("leaf components");
    }
    r.expect_done("ciphertext block");
    if (ctb.index == 1 && !ctb.deltas.empty()) throw Error(ErrorKind::decode, "first block carries link elements");
    require_ascending(ctb.deltas, "delta components");
    require_ascending(ctb.leaves, "leaf components");
    return ctb;
}

Bytes serialize(const PublicKey& pk) {
    ByteWriter w;
    write_preamble(w, "LCPK");
    w.section(pk.g.to_bytes());
    w.section(pk.h.to_bytes());
    w.section(pk.egg_alpha.to_bytes());
    return std::move(w).take();
}

PublicKey parse_public_key(ByteView data) {
    ByteReader r(data);
    read_preamble(r, "LCPK", "public key");
    PublicKey pk;
    pk.g = parse_section(r, &G0Element::from_bytes);
    pk.h = parse_section(r, &G0Element::from_bytes);
    pk.egg_alpha = parse_section(r, &GTElement::from_bytes);
    r.expect_done("public key");
    if (!(pk.g == G0Element::generator())) throw Error(ErrorKind::format, "public key uses a foreign generator");
    return pk;
}

Bytes serialize(const MasterKey& mk) {
    ByteWriter w;
    write_preamble(w, "LCMK");
    w.section(mk.beta.to_bytes());
    w.section(mk.g_alpha.to_bytes());
    w.section(mk.q.to_bytes());
    w.section(mk.k.to_bytes());
    return std::move(w).take();
}

MasterKey parse_master_key(ByteView data) {
    ByteReader r(data);
    read_preamble(r, "LCMK", "master key");
    MasterKey mk;
    mk.beta = parse_section(r, &Scalar::from_bytes);
    mk.g_alpha = parse_section(r, &G0Element::from_bytes);
    mk.q = parse_section(r, &Scalar::from_bytes);
    mk.k = parse_section(r, &Scalar::from_bytes);
    r.expect_done("master key");
    if (mk.beta.is_zero() || mk.q.is_zero() || mk.k.is_zero())
        throw Error(ErrorKind::decode, "master key scalars must be nonzero");
    return mk;
}

Bytes serialize(const SecretKey& sk) {
    ByteWriter w;
    write_preamble(w, "LCSK");
    w.section(sk.d.to_bytes());
    w.section(sk.d_hat.to_bytes());
    w.u32(static_cast<std::uint32_t>(sk.components.size()));
    for (const auto& c : sk.components) {
        w.section(as_bytes(c.attribute));
        w.section(c.d_j.to_bytes());
        w.section(c.d_j_prime.to_bytes());
    }
    return std::move(w).take();
}

SecretKey parse_secret_key(ByteView data) {
    ByteReader r(data);
    read_preamble(r, "LCSK", "secret key");
    SecretKey sk;
    sk.d = parse_section(r, &G0Element::from_bytes);
    sk.d_hat = parse_section(r, &G0Element::from_bytes);
    const auto count = r.u32();
    if (count == 0) throw Error(ErrorKind::decode, "secret key without attributes");
    for (std::uint32_t k = 0; k < count; ++k) {
        AttributeKey c;
        auto a = r.section();
        c.attribute.assign(a.begin(), a.end());
        c.d_j = parse_section(r, &G0Element::from_bytes);
        c.d_j_prime = parse_section(r, &G0Element::from_bytes);
        if (!sk.components.empty() && !(sk.components.back().attribute < c.attribute))
            throw Error(ErrorKind::decode, "secret key attributes not sorted and unique");
        sk.components.push_back(std::move(c));
    }
    r.expect_done("secret key");
    return sk;
}

Bytes serialize(const EncryptionContext& ctx) {
    ByteWriter w;
    write_preamble(w, "LCEC");
    w.section(ctx.q.to_bytes());
    w.section(ctx.k.to_bytes());
    return std::move(w).take();
}

EncryptionContext parse_encryption_context(ByteView data) {
    ByteReader r(data);
    read_preamble(r, "LCEC", "encryption context");
    EncryptionContext ctx;
    ctx.q = parse_section(r, &Scalar::from_bytes);
    ctx.k = parse_section(r, &Scalar::from_bytes);
    r.expect_done("encryption context");
    if (ctx.q.is_zero() || ctx.k.is_zero()) throw Error(ErrorKind::decode, "encryption context scalars must be nonzero");
    return ctx;
}

Bytes serialize(const VerificationTuple& v) {
    ByteWriter w;
    write_preamble(w, "LCVT");
    w.section(v.v1.to_bytes());
    w.section(v.v2.to_bytes());
    return std::move(w).take();
}

VerificationTuple parse_verification_tuple(ByteView data) {
    ByteReader r(data);
    read_preamble(r, "LCVT", "verification tuple");
    VerificationTuple v;
    v.v1 = parse_section(r, &G0Element::from_bytes);
    v.v2 = parse_section(r, &G0Element::from_bytes);
    r.expect_done("verification tuple");
    return v;
}

Bytes read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    Bytes out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorKind::io, "read failed for " + path.string());
    return out;
}

void write_file(const fs::path& path, ByteView data, bool owner_only) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::io, "cannot create " + tmp.string());
        out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
        if (!out) throw Error(ErrorKind::io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    if (owner_only) {
        fs::permissions(tmp, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace, ec);
        if (ec) throw Error(ErrorKind::io, "cannot restrict permissions of " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) throw Error(ErrorKind::io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

} // namespace lcws
