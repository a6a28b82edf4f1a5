// Exercises the shared library through its C interface only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "lcws/lcws.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path path;
    Scratch() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("lcws-capi-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Authority {
    lcws_rng* rng = nullptr;
    lcws_public_key* pk = nullptr;
    lcws_master_key* mk = nullptr;
    lcws_enc_context* ctx = nullptr;

    explicit Authority(std::uint64_t seed) {
        REQUIRE(lcws_rng_new_seeded(seed, &rng) == LCWS_OK);
        REQUIRE(lcws_setup(rng, &pk, &mk) == LCWS_OK);
        REQUIRE(lcws_enc_context_from_master(mk, &ctx) == LCWS_OK);
    }
    ~Authority() {
        lcws_enc_context_free(ctx);
        lcws_master_key_free(mk);
        lcws_public_key_free(pk);
        lcws_rng_free(rng);
    }

    lcws_secret_key* key(std::vector<const char*> attrs) {
        lcws_secret_key* sk = nullptr;
        REQUIRE(lcws_keygen(pk, mk, attrs.data(), attrs.size(), rng, &sk) == LCWS_OK);
        return sk;
    }
};

std::vector<std::uint8_t> message(std::size_t n, unsigned seed) {
    std::mt19937 gen(seed);
    std::vector<std::uint8_t> m(n);
    for (auto& b : m) b = static_cast<std::uint8_t>(gen());
    return m;
}

} // namespace

TEST_CASE("status names and errors") {
    CHECK(std::string(lcws_status_name(LCWS_OK)) == "ok");
    CHECK(std::string(lcws_status_name(LCWS_ERR_ACCESS)) != "");
    CHECK(std::strlen(lcws_suite_name()) > 0);
    CHECK(lcws_rng_new_seeded(1, nullptr) == LCWS_ERR_ARGUMENT);
    CHECK(std::strlen(lcws_last_error()) > 0);
    lcws_rng_free(nullptr);
    lcws_public_key_free(nullptr);
    lcws_buffer_free(nullptr);
    lcws_string_free(nullptr);
}

TEST_CASE("policies") {
    uint32_t depth = 0, leaves = 0;
    REQUIRE(lcws_policy_check("(a AND (b OR c))", &depth, &leaves) == LCWS_OK);
    CHECK(depth == 3);
    CHECK(leaves == 3);
    CHECK(lcws_policy_check("(a AND", &depth, &leaves) == LCWS_ERR_POLICY_SYNTAX);

    char* text = nullptr;
    REQUIRE(lcws_policy_normalize("(a and  B)", &text) == LCWS_OK);
    CHECK(std::string(text) == "(a AND B)");
    lcws_string_free(text);

    REQUIRE(lcws_synthetic_policy(10, 100, &text) == LCWS_OK);
    REQUIRE(lcws_policy_check(text, &depth, &leaves) == LCWS_OK);
    CHECK(depth == 10);
    CHECK(leaves == 100);
    lcws_string_free(text);
    CHECK(lcws_synthetic_policy(0, 1, &text) == LCWS_ERR_ARGUMENT);
}

TEST_CASE("message ids") {
    uint8_t id[LCWS_MESSAGE_ID_BYTES];
    for (int k = 0; k < LCWS_MESSAGE_ID_BYTES; ++k) id[k] = static_cast<uint8_t>(k);
    char hex[LCWS_MESSAGE_ID_HEX];
    REQUIRE(lcws_message_id_format(id, hex) == LCWS_OK);
    CHECK(std::string(hex) == "000102030405060708090a0b0c0d0e0f");
    uint8_t back[LCWS_MESSAGE_ID_BYTES];
    REQUIRE(lcws_message_id_parse(hex, back) == LCWS_OK);
    CHECK(std::memcmp(id, back, sizeof id) == 0);
    CHECK(lcws_message_id_parse("abc", back) == LCWS_ERR_ARGUMENT);
}

TEST_CASE("key files") {
    Scratch dir;
    Authority ta(5);
    auto* sk = ta.key({"a", "b", "c"});
    size_t count = 0;
    REQUIRE(lcws_secret_key_attribute_count(sk, &count) == LCWS_OK);
    CHECK(count == 3);

    REQUIRE(lcws_public_key_save(ta.pk, (dir / "pk").c_str()) == LCWS_OK);
    REQUIRE(lcws_master_key_save(ta.mk, (dir / "mk").c_str()) == LCWS_OK);
    REQUIRE(lcws_secret_key_save(sk, (dir / "sk").c_str()) == LCWS_OK);
    REQUIRE(lcws_enc_context_save(ta.ctx, (dir / "ctx").c_str()) == LCWS_OK);
    for (const char* name : {"mk", "sk", "ctx"}) {
        auto perms = fs::status(dir / name).permissions();
        CHECK((perms & (fs::perms::group_all | fs::perms::others_all)) == fs::perms::none);
    }

    lcws_public_key* pk = nullptr;
    lcws_master_key* mk = nullptr;
    lcws_secret_key* sk2 = nullptr;
    lcws_enc_context* ctx = nullptr;
    CHECK(lcws_public_key_load((dir / "pk").c_str(), &pk) == LCWS_OK);
    CHECK(lcws_master_key_load((dir / "mk").c_str(), &mk) == LCWS_OK);
    CHECK(lcws_secret_key_load((dir / "sk").c_str(), &sk2) == LCWS_OK);
    CHECK(lcws_enc_context_load((dir / "ctx").c_str(), &ctx) == LCWS_OK);
    REQUIRE(lcws_secret_key_attribute_count(sk2, &count) == LCWS_OK);
    CHECK(count == 3);

    // wrong kind of file, missing file
    lcws_master_key* wrong = nullptr;
    CHECK(lcws_master_key_load((dir / "pk").c_str(), &wrong) == LCWS_ERR_FORMAT);
    CHECK(wrong == nullptr);
    CHECK(lcws_public_key_load((dir / "nope").c_str(), &pk) == LCWS_ERR_IO);

    const char* none[] = {"x"};
    lcws_secret_key* empty = nullptr;
    CHECK(lcws_keygen(ta.pk, ta.mk, none, 0, ta.rng, &empty) == LCWS_ERR_ARGUMENT);

    lcws_public_key_free(pk);
    lcws_master_key_free(mk);
    lcws_secret_key_free(sk2);
    lcws_enc_context_free(ctx);
    lcws_secret_key_free(sk);
}

TEST_CASE("store round trip and access control") {
    Scratch dir;
    Authority ta(6);
    const auto store = dir / "cloud";
    auto m = message(5000, 1);
    uint8_t id[LCWS_MESSAGE_ID_BYTES];
    uint32_t blocks = 0;
    REQUIRE(lcws_encrypt_to_store(ta.pk, ta.ctx, "(a AND (b OR c))", m.data(), m.size(), store.c_str(), ta.rng, 0,
                                  id, &blocks) == LCWS_OK);
    CHECK(blocks == 3);
    uint32_t stored = 0;
    REQUIRE(lcws_store_block_count(id, store.c_str(), &stored) == LCWS_OK);
    CHECK(stored == 3);

    auto* good = ta.key({"a", "c"});
    auto* bad = ta.key({"b", "c"});
    uint8_t* out = nullptr;
    size_t len = 0;
    REQUIRE(lcws_decrypt_from_store(good, id, store.c_str(), &out, &len) == LCWS_OK);
    CHECK(std::vector<uint8_t>(out, out + len) == m);
    lcws_buffer_free(out);

    out = nullptr;
    CHECK(lcws_decrypt_from_store(bad, id, store.c_str(), &out, &len) == LCWS_ERR_ACCESS);
    CHECK(out == nullptr);
    CHECK(std::string(lcws_last_error()) == "access policy not satisfied");

    uint8_t unknown[LCWS_MESSAGE_ID_BYTES] = {};
    CHECK(lcws_decrypt_from_store(good, unknown, store.c_str(), &out, &len) == LCWS_ERR_NOT_FOUND);

    CHECK(lcws_encrypt_to_store(ta.pk, ta.ctx, "(a AND", m.data(), m.size(), store.c_str(), ta.rng, 0, id,
                                &blocks) == LCWS_ERR_POLICY_SYNTAX);
    CHECK(lcws_encrypt_to_store(ta.pk, ta.ctx, "a", m.data(), 0, store.c_str(), ta.rng, 0, id, &blocks) ==
          LCWS_ERR_ARGUMENT);

    lcws_secret_key_free(good);
    lcws_secret_key_free(bad);
}

TEST_CASE("damaged store objects") {
    Scratch dir;
    Authority ta(7);
    const auto store = dir / "cloud";
    auto m = message(300, 2);
    uint8_t id[LCWS_MESSAGE_ID_BYTES];
    uint32_t blocks = 0;
    REQUIRE(lcws_encrypt_to_store(ta.pk, ta.ctx, "(a AND b)", m.data(), m.size(), store.c_str(), ta.rng, 0, id,
                                  &blocks) == LCWS_OK);
    auto* sk = ta.key({"a", "b"});
    char hex[LCWS_MESSAGE_ID_HEX];
    lcws_message_id_format(id, hex);
    const fs::path second = fs::path(store) / (std::string(hex) + "-2.ctb");
    REQUIRE(fs::exists(second));

    SUBCASE("garbled bytes") {
        fs::permissions(second, fs::perms::owner_write, fs::perm_options::add);
        std::ofstream(second, std::ios::binary | std::ios::trunc) << "not a block";
        uint8_t* out = nullptr;
        size_t len = 0;
        CHECK(lcws_decrypt_from_store(sk, id, store.c_str(), &out, &len) == LCWS_ERR_FORMAT);
    }
    SUBCASE("missing block") {
        fs::remove(second);
        uint8_t* out = nullptr;
        size_t len = 0;
        CHECK(lcws_decrypt_from_store(sk, id, store.c_str(), &out, &len) != LCWS_OK);
    }
    lcws_secret_key_free(sk);
}

TEST_CASE("challenge and verification") {
    Scratch dir;
    Authority ta(8);
    const auto store = dir / "cloud";
    auto m = message(1000, 3);
    uint8_t id[LCWS_MESSAGE_ID_BYTES];
    uint32_t blocks = 0;
    REQUIRE(lcws_encrypt_to_store(ta.pk, ta.ctx, "x", m.data(), m.size(), store.c_str(), ta.rng, 0, id, &blocks) ==
            LCWS_OK);
    lcws_vtuple* v = nullptr;
    REQUIRE(lcws_challenge(ta.mk, id, store.c_str(), ta.rng, &v) == LCWS_OK);
    int valid = -1;
    REQUIRE(lcws_verify(m.data(), m.size(), v, &valid) == LCWS_OK);
    CHECK(valid == 1);
    m[500] ^= 1;
    REQUIRE(lcws_verify(m.data(), m.size(), v, &valid) == LCWS_OK);
    CHECK(valid == 0);

    REQUIRE(lcws_vtuple_save(v, (dir / "v").c_str()) == LCWS_OK);
    lcws_vtuple* v2 = nullptr;
    REQUIRE(lcws_vtuple_load((dir / "v").c_str(), &v2) == LCWS_OK);
    m[500] ^= 1;
    REQUIRE(lcws_verify(m.data(), m.size(), v2, &valid) == LCWS_OK);
    CHECK(valid == 1);

    uint8_t unknown[LCWS_MESSAGE_ID_BYTES] = {9};
    lcws_vtuple* none = nullptr;
    CHECK(lcws_challenge(ta.mk, unknown, store.c_str(), ta.rng, &none) == LCWS_ERR_NOT_FOUND);
    lcws_vtuple_free(v);
    lcws_vtuple_free(v2);
}

TEST_CASE("seeded runs are reproducible") {
    Scratch dir;
    auto m = message(64, 4);
    uint8_t id1[LCWS_MESSAGE_ID_BYTES], id2[LCWS_MESSAGE_ID_BYTES];
    uint32_t blocks = 0;
    {
        Authority ta(9);
        REQUIRE(lcws_encrypt_to_store(ta.pk, ta.ctx, "a", m.data(), m.size(), (dir / "s1").c_str(), ta.rng, 0, id1,
                                      &blocks) == LCWS_OK);
    }
    {
        Authority ta(9);
        REQUIRE(lcws_encrypt_to_store(ta.pk, ta.ctx, "a", m.data(), m.size(), (dir / "s2").c_str(), ta.rng, 0, id2,
                                      &blocks) == LCWS_OK);
    }
    CHECK(std::memcmp(id1, id2, sizeof id1) == 0);
}

TEST_CASE("bench through the C interface") {
    Scratch dir;
    const uint64_t sizes[] = {16 * 1024, 32 * 1024};
    lcws_bench_config cfg{sizes, 2, 2, 2, 8.0 * 1024 * 1024, 1, 3};
    REQUIRE(lcws_bench(&cfg, (dir / "b.csv").c_str(), (dir / "b.dat").c_str(), 0) == LCWS_OK);
    CHECK(fs::file_size(dir / "b.csv") > 0);
    CHECK(fs::file_size(dir / "b.dat") > 0);

    const uint64_t unsorted[] = {2, 1};
    cfg.sizes = unsorted;
    CHECK(lcws_bench(&cfg, (dir / "c.csv").c_str(), nullptr, 0) == LCWS_ERR_ARGUMENT);
}
