#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lcws/error.hpp"
#include "lcws/scheme.hpp"
#include "support.hpp"

using namespace lcws;
using test::Fixture;

namespace {

const G0Element& g() {
    return G0Element::generator();
}

Scalar s(std::uint64_t v) {
    return Scalar::from_u64(v);
}

// Hand-built key with chosen r and r_j, for checks that need them fixed.
SecretKey key_with(const Fixture& f, const Scalar& r, const std::map<std::string, Scalar>& rj) {
    SecretKey sk;
    const auto& beta = f.mk.beta;
    sk.d = g().pow((f.trace.alpha + r) / beta);
    sk.d_hat = g().pow(r * f.mk.q);
    for (const auto& [att, v] : rj)
        sk.components.push_back(
            {att, g().pow(r) * hash_to_g0(kTagAttribute, as_bytes(att)).pow(v), g().pow(v)});
    return sk;
}

} // namespace

TEST_SUITE("scheme") {

TEST_CASE("setup") {
    Fixture f(31), f2(32);
    CHECK_FALSE(f.pk.egg_alpha == f2.pk.egg_alpha);
    CHECK(pair(g(), f.mk.g_alpha) == f.pk.egg_alpha);
    CHECK(f.pk.egg_alpha == f.egg_pow(f.trace.alpha));
    CHECK(pair(f.pk.h, g().pow(f.mk.beta.inverse())) == f.egg);
    CHECK(f.pk.g == g());
    CHECK_FALSE(f.mk.beta.is_zero());
    CHECK_FALSE(f.mk.q.is_zero());
    CHECK_FALSE(f.mk.k.is_zero());
    CHECK(f.ctx.q == f.mk.q);
    CHECK(f.ctx.k == f.mk.k);
}

TEST_CASE("keygen") {
    Fixture f(33);
    SeededRng rng(34);
    KeygenTrace tr;
    auto sk = keygen(f.pk, f.mk, {"a", "b", "c"}, rng, &tr);
    CHECK(sk.components.size() == 3);
    CHECK(sk.attributes() == AttributeSet{"a", "b", "c"});
    CHECK(pair(sk.d, f.pk.h) == f.pk.egg_alpha * f.egg_pow(tr.r));
    CHECK(sk.d_hat == g().pow(tr.r * f.mk.q));
    for (const auto& c : sk.components) {
        CHECK(pair(c.d_j, g()) / pair(hash_to_g0(kTagAttribute, as_bytes(c.attribute)), c.d_j_prime) ==
              f.egg_pow(tr.r));
        CHECK(c.d_j_prime == g().pow(tr.r_j.at(c.attribute)));
    }
    CHECK(sk.find("b") != nullptr);
    CHECK(sk.find("z") == nullptr);

    auto sk2 = keygen(f.pk, f.mk, {"a", "b", "c"}, rng);
    CHECK_FALSE(sk.d == sk2.d);
    CHECK_THROWS_AS(keygen(f.pk, f.mk, {}, rng), Error);
}

TEST_CASE("data verification commitment") {
    Fixture f(35);
    auto m = as_bytes("meter reading 42");
    auto c = data_verification(m, f.mk);
    CHECK(c == data_verification(m, f.mk));
    CHECK(c == hash_to_g0(kTagMessage, m).pow(f.mk.k));
    CHECK_FALSE(c == data_verification(as_bytes("meter reading 43"), f.mk));
}

TEST_CASE("message partition and chaining") {
    SUBCASE("single block") {
        Bytes m{1, 2, 3};
        auto blocks = partition_message(m, 1);
        REQUIRE(blocks.size() == 1);
        CHECK(blocks[0].index == 1);
        CHECK(blocks[0].payload == m);
    }
    SUBCASE("two bytes over two blocks") {
        auto blocks = partition_message(from_hex("AABB"), 2);
        REQUIRE(blocks.size() == 2);
        CHECK(blocks[0].payload == from_hex("AA"));
        CHECK(blocks[1].payload == from_hex("11"));
        CHECK(unchain_blocks(blocks, 2) == from_hex("AABB"));
    }
    SUBCASE("padding") {
        auto blocks = partition_message(from_hex("0102030405"), 3);
        REQUIRE(blocks.size() == 3);
        for (const auto& b : blocks) CHECK(b.payload.size() == 2);
        CHECK(blocks[2].payload == from_hex("0604")); // 03 04 ^ 05 00 (zero padded)
        CHECK(unchain_blocks(blocks, 5) == from_hex("0102030405"));
    }
    SUBCASE("more blocks than bytes") {
        auto blocks = partition_message(from_hex("AB"), 4);
        CHECK(blocks.size() == 4);
        CHECK(unchain_blocks(blocks, 1) == from_hex("AB"));
    }
    SUBCASE("round trips") {
        std::mt19937_64 gen(36);
        for (std::uint32_t n = 1; n <= 16; ++n) {
            for (std::size_t len : {std::size_t{1}, std::size_t{n}, std::size_t{97}, std::size_t{1000}}) {
                auto m = test::random_bytes(gen, len);
                CHECK(unchain_blocks(partition_message(m, n), len) == m);
            }
        }
    }
    CHECK_THROWS_AS(partition_message(from_hex("AA"), 0), Error);
}

TEST_CASE("block structure") {
    Fixture f(37);
    SeededRng rng(38);
    SUBCASE("single attribute policy") {
        auto ctbs = encrypt_message(f.pk, f.ctx, parse_policy("a"), as_bytes("hello"), rng);
        REQUIRE(ctbs.size() == 1);
        CHECK(ctbs[0].leaves.size() == 1);
        CHECK(ctbs[0].deltas.empty());
        CHECK(ctbs[0].commitment.has_value());
        CHECK(ctbs[0].has_sentinel_sec());
    }
    SUBCASE("two leaves under the root") {
        auto ctbs = encrypt_message(f.pk, f.ctx, parse_policy("(a AND b)"), as_bytes("hello"), rng);
        REQUIRE(ctbs.size() == 2);
        CHECK(ctbs[0].leaves.empty());
        CHECK(ctbs[0].deltas.empty());
        CHECK(ctbs[0].commitment.has_value());
        CHECK(ctbs[1].leaves.size() == 2);
        CHECK(ctbs[1].deltas.empty());
        CHECK_FALSE(ctbs[1].commitment.has_value());
        CHECK(ctbs[1].has_sentinel_sec());
    }
    SUBCASE("one link element per gate below the root") {
        auto ctbs = encrypt_message(f.pk, f.ctx, parse_policy("(a AND (b OR (c AND d)) AND (e OR f))"),
                                    as_bytes("hello"), rng);
        REQUIRE(ctbs.size() == 4);
        CHECK(ctbs[1].deltas.size() == 2);
        CHECK(ctbs[2].deltas.size() == 1);
        CHECK(ctbs[3].deltas.empty());
        for (const auto& c : ctbs) {
            CHECK(c.message_id == ctbs[0].message_id);
            CHECK(c.count == 4);
            CHECK(c.header.message_length == 5);
        }
    }
    SUBCASE("empty message is rejected") {
        CHECK_THROWS_AS(encrypt_message(f.pk, f.ctx, parse_policy("a"), {}, rng), Error);
    }
}

TEST_CASE("encryption closed forms") {
    Fixture f(39);
    SeededRng rng(40);
    EncryptionTrace tr;
    Bytes m(300);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(i);
    auto tree = parse_policy("(2 of (a, (b AND c), (d OR (e AND f))))");
    auto ctbs = encrypt_message(f.pk, f.ctx, tree, m, rng, &tr);
    const auto n = ctbs.size();
    REQUIRE(tr.level_secrets.size() == n);
    auto dbs = partition_message(m, static_cast<std::uint32_t>(n));

    const auto g_alpha_over_beta = g().pow(f.trace.alpha / f.mk.beta);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = ctbs[i];
        const auto& si = tr.level_secrets[i];
        CAPTURE(i);
        CHECK(c.c == f.pk.h.pow(si));
        // e(h^{s_i}, g^{alpha/beta}) = e(g,g)^{alpha s_i} strips the mask
        Bytes plain = c.c_tilde;
        apply_kdf_mask(pair(c.c, g_alpha_over_beta), plain);
        Bytes db(plain.begin(), plain.begin() + c.header.block_length);
        CHECK(db == dbs[i].payload);
        auto sec = G0Element::from_bytes(ByteView(plain).subspan(c.header.block_length));
        if (i + 1 < n) CHECK(sec == g().pow(tr.level_secrets[i + 1] / f.mk.q));
        else CHECK(sec.is_identity());
        for (const auto& d : c.deltas) {
            const auto& node = tree.node(d.node);
            CHECK(node.level == i + 1);
            CHECK(d.value == g().pow((si - tr.shares.at(d.node)) / f.mk.q));
        }
        for (const auto& l : c.leaves) {
            const auto& share = tr.shares.at(l.node);
            CHECK(l.c_hat == g().pow(share));
            CHECK(l.c_hat_prime == hash_to_g0(kTagAttribute, as_bytes(tree.node(l.node).attribute)).pow(share));
        }
    }
    CHECK(tr.shares.at(1) == tr.level_secrets[0]);
    CHECK(*ctbs[0].commitment == data_verification(m, f.mk));
    // shares are consistent with each gate's polynomial
    for (const auto& [id, poly] : tr.polys) {
        const auto& node = tree.node(id);
        CHECK(poly.size() == node.threshold);
        CHECK(poly[0] == tr.shares.at(id));
        for (auto child : node.children) {
            Scalar acc;
            const auto x = s(tree.node(child).index);
            for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
            CHECK(acc == tr.shares.at(child));
        }
    }
}

TEST_CASE("leaf decryption") {
    Fixture f(41);
    SeededRng rng(42);
    EncryptionTrace tr;
    auto tree = parse_policy("(a OR b)");
    auto ctbs = encrypt_message(f.pk, f.ctx, tree, as_bytes("x"), rng, &tr);
    const auto& ctb = ctbs[1];
    const Scalar r = s(1234567);
    auto sk = key_with(f, r, {{"a", s(11)}});
    auto fa = decrypt_leaf(ctb, sk, 2);
    REQUIRE(fa);
    CHECK(*fa == f.egg_pow(r * tr.shares.at(2)));
    CHECK_FALSE(decrypt_leaf(ctb, sk, 3).has_value());
    CHECK_THROWS_AS(decrypt_leaf(ctb, sk, 1), Error);

    // r_j cancels out
    auto sk2 = key_with(f, r, {{"a", s(99)}});
    CHECK(*decrypt_leaf(ctb, sk2, 2) == *fa);
}

TEST_CASE("interior decryption") {
    Fixture f(43);
    SUBCASE("single child passes through") {
        std::map<std::uint32_t, GTElement> ch{{1, f.egg_pow(s(17))}};
        CHECK(*decrypt_interior(ch, 1) == f.egg_pow(s(17)));
    }
    SUBCASE("q(x) = 5 + 2x with r = 3") {
        std::map<std::uint32_t, GTElement> ch{{1, f.egg_pow(s(3 * 7))}, {2, f.egg_pow(s(3 * 9))}};
        CHECK(*decrypt_interior(ch, 2) == f.egg_pow(s(15)));
    }
    SUBCASE("any k of the children interpolate alike") {
        // q(x) = 5 + 2x + x^2 at 1..4, r = 1
        auto q = [](std::uint64_t x) { return 5 + 2 * x + x * x; };
        std::map<std::uint32_t, GTElement> all;
        for (std::uint32_t i = 1; i <= 4; ++i) all[i] = f.egg_pow(s(q(i)));
        for (std::uint32_t skip = 1; skip <= 4; ++skip) {
            auto ch = all;
            ch.erase(skip);
            CHECK(*decrypt_interior(ch, 3) == f.egg_pow(s(5)));
        }
    }
    SUBCASE("too few children") {
        std::map<std::uint32_t, GTElement> ch{{2, f.egg_pow(s(1))}};
        CHECK_FALSE(decrypt_interior(ch, 2).has_value());
        CHECK_FALSE(decrypt_interior({}, 1).has_value());
    }
}

TEST_CASE("block unlock paths") {
    Fixture f(44);
    const Scalar r = s(777);
    auto sk = key_with(f, r, {{"a", s(5)}});

    SUBCASE("link element with s_i = 9, q_x(0) = 4") {
        CiphertextBlock ctb;
        ctb.index = 2;
        ctb.count = 2;
        ctb.deltas.push_back({7, g().pow(s(5) / f.mk.q)});
        auto a = unlock_value(ctb, sk, GateUnlock{7, f.egg_pow(s(4) * r)});
        CHECK(a == f.egg_pow(s(9) * r));
        CHECK_THROWS_AS(unlock_value(ctb, sk, GateUnlock{8, f.egg_pow(r)}), Error);
        CHECK_THROWS_AS(unlock_value(ctb, sk, RootUnlock{f.egg_pow(r)}), Error);
    }
    SUBCASE("sec path") {
        CiphertextBlock ctb;
        ctb.index = 3;
        const Scalar si = s(31337);
        CHECK(unlock_value(ctb, sk, SecUnlock{g().pow(si / f.mk.q)}) == f.egg_pow(r * si));
    }
    SUBCASE("mask key") {
        CiphertextBlock ctb;
        const Scalar si = s(4242);
        ctb.c = f.pk.h.pow(si);
        CHECK(mask_key(ctb, sk, f.egg_pow(r * si)) == f.egg_pow(f.trace.alpha * si));
    }
}

TEST_CASE("staged decryption") {
    Fixture f(45);
    SeededRng rng(46);
    std::mt19937_64 gen(46);
    auto m = test::random_bytes(gen, 1000);

    SUBCASE("root opens the first block, the chain opens the rest") {
        auto ctbs = encrypt_message(f.pk, f.ctx, parse_policy("(a AND b)"), m, rng);
        auto sk = keygen(f.pk, f.mk, {"a", "b"}, rng);
        Decryptor dec(sk);
        for (auto& c : ctbs) dec.receive(c);
        CHECK(dec.state().opened_by.at(1) == UnlockPath::root);
        CHECK(dec.state().opened_by.at(2) == UnlockPath::sec);
        CHECK(assemble_message(dec.state(), sk) == m);
    }
    SUBCASE("arrival order does not matter") {
        auto tree = parse_policy("(a AND (b OR c) AND (2 of (d, e, (f AND g))))");
        auto ctbs = encrypt_message(f.pk, f.ctx, tree, m, rng);
        auto sk = keygen(f.pk, f.mk, {"a", "c", "d", "f", "g"}, rng);
        std::vector<std::size_t> order(ctbs.size());
        std::iota(order.begin(), order.end(), 0);
        for (int trial = 0; trial < 4; ++trial) {
            std::shuffle(order.begin(), order.end(), gen);
            Decryptor dec(sk);
            for (auto k : order) dec.receive(ctbs[k]);
            CHECK(dec.complete());
            CHECK(assemble_message(dec.state(), sk) == m);
        }
    }
    SUBCASE("sec chain alone opens stripped blocks") {
        EncryptionTrace tr;
        KeygenTrace kt;
        auto tree = parse_policy("(a AND (b OR (c AND d)))");
        auto ctbs = encrypt_message(f.pk, f.ctx, tree, m, rng, &tr);
        auto sk = keygen(f.pk, f.mk, {"a", "b", "c", "d"}, rng, &kt);
        Decryptor dec(sk);
        for (std::size_t i = 0; i < ctbs.size(); ++i) {
            auto c = ctbs[i];
            if (i > 0) c.leaves.clear();
            dec.receive(std::move(c));
        }
        CHECK(dec.state().blocks.empty());
        auto& st = dec.state();
        auto opened = decrypt_block(st.unopened.at(1), sk, RootUnlock{f.egg_pow(kt.r * tr.level_secrets[0])});
        st.blocks[1] = opened.block;
        st.secs[2] = opened.next_sec;
        st.unopened.erase(1);
        CHECK(assemble_message(st, sk) == m);
    }
    SUBCASE("partial access without the first block yields nothing") {
        auto tree = parse_policy("(a AND (b AND c))");
        auto ctbs = encrypt_message(f.pk, f.ctx, tree, m, rng);
        auto sk = keygen(f.pk, f.mk, {"b", "c"}, rng);
        Decryptor dec(sk);
        for (auto& c : ctbs) dec.receive(c);
        CHECK(dec.state().blocks.count(2) == 1);
        CHECK(dec.state().opened_by.at(2) == UnlockPath::gate);
        CHECK(dec.state().blocks.count(1) == 0);
        CHECK_FALSE(assemble_message(dec.state(), sk).has_value());
        auto dbs = partition_message(m, 3);
        CHECK(dec.state().blocks.at(2) == dbs[1]);
    }
    SUBCASE("missing blocks") {
        auto ctbs = encrypt_message(f.pk, f.ctx, parse_policy("(a AND b)"), m, rng);
        auto sk = keygen(f.pk, f.mk, {"a", "b"}, rng);
        CHECK_FALSE(decrypt_message(std::span(ctbs).first(1), sk).has_value());
    }
    SUBCASE("blocks of another message are refused") {
        auto one = encrypt_message(f.pk, f.ctx, parse_policy("(a AND b)"), m, rng);
        auto two = encrypt_message(f.pk, f.ctx, parse_policy("(a AND b)"), m, rng);
        auto sk = keygen(f.pk, f.mk, {"a", "b"}, rng);
        Decryptor dec(sk);
        dec.receive(one[0]);
        CHECK_THROWS_AS(dec.receive(two[1]), Error);
        CHECK_THROWS_AS(dec.receive(one[0]), Error);
    }
}

TEST_CASE("challenge and verification") {
    Fixture f(47);
    SeededRng rng(48);
    auto m = as_bytes("integrity matters");
    auto c = data_verification(m, f.mk);
    Scalar t;
    auto v = make_challenge(c, f.mk, rng, &t);
    CHECK(v.v2 == g().pow(t));
    CHECK(v.v1 == hash_to_g0(kTagMessage, m).pow(t));
    CHECK(verify_message(m, v));

    auto v2 = make_challenge(c, f.mk, rng);
    CHECK_FALSE(v2.v2 == v.v2);

    Bytes tampered(m.begin(), m.end());
    tampered[3] ^= 0x01;
    CHECK_FALSE(verify_message(tampered, v));

    auto wrong = v;
    wrong.v2 = g().pow(t + s(1));
    CHECK_FALSE(verify_message(m, wrong));

    VerificationTuple degenerate{G0Element::identity(), G0Element::identity()};
    CHECK_FALSE(verify_message(m, degenerate));
}

} // TEST_SUITE
