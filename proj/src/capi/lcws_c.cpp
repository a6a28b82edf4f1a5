#include "lcws/lcws.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "lcws/bench.hpp"
#include "lcws/error.hpp"
#include "lcws/rng.hpp"
#include "lcws/scheme.hpp"
#include "lcws/store.hpp"
#include "lcws/wire.hpp"

struct lcws_rng {
    std::unique_ptr<lcws::Rng> impl;
};
struct lcws_public_key {
    lcws::PublicKey impl;
};
struct lcws_master_key {
    lcws::MasterKey impl;
};
struct lcws_secret_key {
    lcws::SecretKey impl;
};
struct lcws_enc_context {
    lcws::EncryptionContext impl;
};
struct lcws_vtuple {
    lcws::VerificationTuple impl;
};

namespace {

thread_local std::string g_last_error;

lcws_status status_of(lcws::ErrorKind kind) {
    using lcws::ErrorKind;
    switch (kind) {
    case ErrorKind::argument: return LCWS_ERR_ARGUMENT;
    case ErrorKind::decode:
    case ErrorKind::format: return LCWS_ERR_FORMAT;
    case ErrorKind::policy_syntax: return LCWS_ERR_POLICY_SYNTAX;
    case ErrorKind::state: return LCWS_ERR_STATE;
    case ErrorKind::not_found: return LCWS_ERR_NOT_FOUND;
    case ErrorKind::io: return LCWS_ERR_IO;
    case ErrorKind::access: return LCWS_ERR_ACCESS;
    }
    return LCWS_ERR_INTERNAL;
}

lcws_status fail(lcws_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

template <typename F>
lcws_status guard(F&& f) {
    g_last_error.clear();
    try {
        f();
        return LCWS_OK;
    } catch (const lcws::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(LCWS_ERR_INTERNAL, "out of memory");
    } catch (const std::filesystem::filesystem_error& e) {
        return fail(LCWS_ERR_IO, e.what());
    } catch (const std::exception& e) {
        return fail(LCWS_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(LCWS_ERR_INTERNAL, "unknown error");
    }
}

void require(bool cond, const char* what) {
    if (!cond) throw lcws::Error(lcws::ErrorKind::argument, what);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

lcws::MessageId to_id(const uint8_t* id) {
    lcws::MessageId m{};
    std::memcpy(m.data(), id, m.size());
    return m;
}

template <typename Handle, typename Parse>
lcws_status load_handle(const char* path, Handle** out, Parse parse) {
    return guard([&] {
        require(path && out, "null argument");
        auto bytes = lcws::read_file(path);
        *out = new Handle{parse(bytes)};
    });
}

template <typename T>
lcws_status save_handle(const T* h, const char* path, bool owner_only) {
    return guard([&] {
        require(h && path, "null argument");
        lcws::write_file(path, lcws::serialize(h->impl), owner_only);
    });
}

lcws::LinkModel link_for(double bandwidth) {
    lcws::LinkModel m;
    m.bandwidth = bandwidth > 0 ? bandwidth : std::numeric_limits<double>::infinity();
    return m;
}

} // namespace

extern "C" {

const char* lcws_last_error(void) {
    return g_last_error.c_str();
}

const char* lcws_status_name(lcws_status status) {
    switch (status) {
    case LCWS_OK: return "ok";
    case LCWS_ERR_ARGUMENT: return "argument";
    case LCWS_ERR_ACCESS: return "access";
    case LCWS_ERR_IO: return "io";
    case LCWS_ERR_FORMAT: return "format";
    case LCWS_ERR_POLICY_SYNTAX: return "policy-syntax";
    case LCWS_ERR_NOT_FOUND: return "not-found";
    case LCWS_ERR_STATE: return "state";
    case LCWS_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* lcws_suite_name(void) {
    return lcws::suite().name;
}

void lcws_buffer_free(uint8_t* data) {
    std::free(data);
}

void lcws_string_free(char* s) {
    std::free(s);
}

lcws_status lcws_rng_new_system(lcws_rng** out) {
    return guard([&] {
        require(out, "null argument");
        *out = new lcws_rng{std::make_unique<lcws::SystemRng>()};
    });
}

lcws_status lcws_rng_new_seeded(uint64_t seed, lcws_rng** out) {
    return guard([&] {
        require(out, "null argument");
        *out = new lcws_rng{std::make_unique<lcws::SeededRng>(seed)};
    });
}

void lcws_rng_free(lcws_rng* rng) {
    delete rng;
}

lcws_status lcws_setup(lcws_rng* rng, lcws_public_key** pk_out, lcws_master_key** mk_out) {
    return guard([&] {
        require(rng && pk_out && mk_out, "null argument");
        auto [pk, mk] = lcws::setup(*rng->impl);
        auto pk_h = std::make_unique<lcws_public_key>(lcws_public_key{std::move(pk)});
        *mk_out = new lcws_master_key{std::move(mk)};
        *pk_out = pk_h.release();
    });
}

lcws_status lcws_keygen(const lcws_public_key* pk, const lcws_master_key* mk, const char* const* attributes,
                        size_t attribute_count, lcws_rng* rng, lcws_secret_key** out) {
    return guard([&] {
        require(pk && mk && rng && out, "null argument");
        require(attribute_count > 0 && attributes, "at least one attribute is required");
        lcws::AttributeSet attrs;
        for (size_t i = 0; i < attribute_count; ++i) {
            require(attributes[i] && *attributes[i], "attribute names must be non-empty");
            attrs.insert(attributes[i]);
        }
        *out = new lcws_secret_key{lcws::keygen(pk->impl, mk->impl, attrs, *rng->impl)};
    });
}

lcws_status lcws_enc_context_from_master(const lcws_master_key* mk, lcws_enc_context** out) {
    return guard([&] {
        require(mk && out, "null argument");
        *out = new lcws_enc_context{lcws::encryption_context(mk->impl)};
    });
}

lcws_status lcws_secret_key_attribute_count(const lcws_secret_key* sk, size_t* out) {
    return guard([&] {
        require(sk && out, "null argument");
        *out = sk->impl.components.size();
    });
}

lcws_status lcws_public_key_save(const lcws_public_key* pk, const char* path) {
    return save_handle(pk, path, false);
}
lcws_status lcws_public_key_load(const char* path, lcws_public_key** out) {
    return load_handle(path, out, &lcws::parse_public_key);
}
lcws_status lcws_master_key_save(const lcws_master_key* mk, const char* path) {
    return save_handle(mk, path, true);
}
lcws_status lcws_master_key_load(const char* path, lcws_master_key** out) {
    return load_handle(path, out, &lcws::parse_master_key);
}
lcws_status lcws_secret_key_save(const lcws_secret_key* sk, const char* path) {
    return save_handle(sk, path, true);
}
lcws_status lcws_secret_key_load(const char* path, lcws_secret_key** out) {
    return load_handle(path, out, &lcws::parse_secret_key);
}
lcws_status lcws_enc_context_save(const lcws_enc_context* ctx, const char* path) {
    return save_handle(ctx, path, true);
}
lcws_status lcws_enc_context_load(const char* path, lcws_enc_context** out) {
    return load_handle(path, out, &lcws::parse_encryption_context);
}
lcws_status lcws_vtuple_save(const lcws_vtuple* v, const char* path) {
    return save_handle(v, path, false);
}
lcws_status lcws_vtuple_load(const char* path, lcws_vtuple** out) {
    return load_handle(path, out, &lcws::parse_verification_tuple);
}

void lcws_public_key_free(lcws_public_key* pk) {
    delete pk;
}
void lcws_master_key_free(lcws_master_key* mk) {
    delete mk;
}
void lcws_secret_key_free(lcws_secret_key* sk) {
    delete sk;
}
void lcws_enc_context_free(lcws_enc_context* ctx) {
    delete ctx;
}
void lcws_vtuple_free(lcws_vtuple* v) {
    delete v;
}

lcws_status lcws_policy_check(const char* policy, uint32_t* depth_out, uint32_t* leaf_count_out) {
    return guard([&] {
        require(policy, "null argument");
        auto tree = lcws::parse_policy(policy);
        if (depth_out) *depth_out = tree.depth();
        if (leaf_count_out) *leaf_count_out = static_cast<uint32_t>(tree.leaf_count());
    });
}

lcws_status lcws_policy_normalize(const char* policy, char** out) {
    return guard([&] {
        require(policy && out, "null argument");
        *out = dup_string(lcws::to_policy_string(lcws::parse_policy(policy)));
    });
}

lcws_status lcws_synthetic_policy(uint32_t levels, uint32_t leaves, char** out) {
    return guard([&] {
        require(out, "null argument");
        *out = dup_string(lcws::synthetic_policy(levels, leaves));
    });
}

lcws_status lcws_message_id_format(const uint8_t id[LCWS_MESSAGE_ID_BYTES], char out[LCWS_MESSAGE_ID_HEX]) {
    return guard([&] {
        require(id && out, "null argument");
        auto hex = lcws::message_id_hex(to_id(id));
        std::memcpy(out, hex.c_str(), LCWS_MESSAGE_ID_HEX);
    });
}

lcws_status lcws_message_id_parse(const char* hex, uint8_t out[LCWS_MESSAGE_ID_BYTES]) {
    return guard([&] {
        require(hex && out, "null argument");
        auto id = lcws::parse_message_id(hex);
        std::memcpy(out, id.data(), id.size());
    });
}

lcws_status lcws_encrypt_to_store(const lcws_public_key* pk, const lcws_enc_context* ctx, const char* policy,
                                  const uint8_t* message, size_t message_len, const char* store_dir, lcws_rng* rng,
                                  double bandwidth, uint8_t id_out[LCWS_MESSAGE_ID_BYTES],
                                  uint32_t* block_count_out) {
    return guard([&] {
        require(pk && ctx && policy && store_dir && rng && id_out, "null argument");
        require(message || message_len == 0, "null message");
        require(bandwidth >= 0 && !std::isnan(bandwidth), "bandwidth must be >= 0");
        auto tree = lcws::parse_policy(policy);
        lcws::ByteView m(message, message_len);
        lcws::BlockEncryptor encryptor(pk->impl, ctx->impl, tree, m, *rng->impl);
        lcws::ObjectStore store(store_dir);
        lcws::SimulatedLink link(link_for(bandwidth));
        const auto id = encryptor.message_id();
        lcws::run_encrypt_pipeline(
            encryptor.block_count(), [&](std::size_t) { return lcws::serialize_ctb(encryptor.next()); }, link,
            [&](std::size_t i, lcws::Bytes&& b) { store.put({id, static_cast<uint32_t>(i)}, b); },
            lcws::ExecutionMode::overlapped);
        std::memcpy(id_out, id.data(), id.size());
        if (block_count_out) *block_count_out = encryptor.block_count();
    });
}

lcws_status lcws_store_block_count(const uint8_t id[LCWS_MESSAGE_ID_BYTES], const char* store_dir, uint32_t* out) {
    return guard([&] {
        require(id && store_dir && out, "null argument");
        lcws::ObjectStore store(store_dir);
        *out = static_cast<uint32_t>(store.list(to_id(id)).size());
    });
}

lcws_status lcws_decrypt_from_store(const lcws_secret_key* sk, const uint8_t id[LCWS_MESSAGE_ID_BYTES],
                                    const char* store_dir, uint8_t** out, size_t* out_len) {
    return guard([&] {
        require(sk && id && store_dir && out && out_len, "null argument");
        const auto mid = to_id(id);
        lcws::ObjectStore store(store_dir);
        const auto ids = store.list(mid);
        if (ids.empty()) throw lcws::Error(lcws::ErrorKind::not_found, "unknown message id " + lcws::message_id_hex(mid));
        for (std::size_t k = 0; k < ids.size(); ++k)
            if (ids[k].index != k + 1) throw lcws::Error(lcws::ErrorKind::format, "message blocks are not contiguous");

        lcws::Decryptor decryptor(sk->impl);
        lcws::SimulatedLink link(link_for(0));
        lcws::run_decrypt_pipeline(
            ids.size(), [&](std::size_t i) { return store.get(ids[i - 1]); }, link,
            [&](std::size_t i, lcws::Bytes&& b) {
                auto ctb = lcws::parse_ctb(b);
                if (ctb.message_id != mid || ctb.index != i)
                    throw lcws::Error(lcws::ErrorKind::format, "stored block does not match its object id");
                decryptor.receive(std::move(ctb));
            },
            lcws::ExecutionMode::overlapped);
        if (!decryptor.complete()) throw lcws::Error(lcws::ErrorKind::format, "message is missing blocks");

        auto plain = lcws::assemble_message(decryptor.state(), sk->impl);
        if (!plain) throw lcws::Error(lcws::ErrorKind::access, "access policy not satisfied");
        auto* buf = static_cast<uint8_t*>(std::malloc(plain->empty() ? 1 : plain->size()));
        if (!buf) throw std::bad_alloc();
        std::memcpy(buf, plain->data(), plain->size());
        *out = buf;
        *out_len = plain->size();
    });
}

lcws_status lcws_challenge(const lcws_master_key* mk, const uint8_t id[LCWS_MESSAGE_ID_BYTES], const char* store_dir,
                           lcws_rng* rng, lcws_vtuple** out) {
    return guard([&] {
        require(mk && id && store_dir && rng && out, "null argument");
        lcws::ObjectStore store(store_dir);
        const auto mid = to_id(id);
        if (!store.contains({mid, 1}))
            throw lcws::Error(lcws::ErrorKind::not_found, "unknown message id " + lcws::message_id_hex(mid));
        auto ctb = lcws::parse_ctb(store.get({mid, 1}));
        if (!ctb.commitment) throw lcws::Error(lcws::ErrorKind::format, "first block carries no commitment");
        *out = new lcws_vtuple{lcws::make_challenge(*ctb.commitment, mk->impl, *rng->impl)};
    });
}

lcws_status lcws_verify(const uint8_t* message, size_t message_len, const lcws_vtuple* v, int* valid_out) {
    return guard([&] {
        require(v && valid_out, "null argument");
        require(message || message_len == 0, "null message");
        *valid_out = lcws::verify_message(lcws::ByteView(message, message_len), v->impl) ? 1 : 0;
    });
}

lcws_status lcws_bench(const lcws_bench_config* config, const char* csv_path, const char* dat_path, int verbose) {
    return guard([&] {
        require(config && csv_path, "null argument");
        require(config->sizes || config->size_count == 0, "null size list");
        lcws::BenchConfig c;
        c.sizes.assign(config->sizes, config->sizes + config->size_count);
        c.levels = config->levels;
        c.leaves = config->leaves;
        c.link = link_for(config->bandwidth);
        c.runs = config->runs;
        c.seed = config->seed;
        lcws::BenchProgress progress;
        if (verbose) progress = [](const std::string& s) { std::cerr << s << '\n'; };
        auto report = lcws::run_bench(c, progress);

        auto write = [&](const char* path, auto writer) {
            std::ofstream f(path);
            if (!f) throw lcws::Error(lcws::ErrorKind::io, std::string("cannot write ") + path);
            writer(report, f);
            if (!f) throw lcws::Error(lcws::ErrorKind::io, std::string("write failed for ") + path);
        };
        write(csv_path, [](const lcws::BenchReport& r, std::ostream& o) { lcws::write_bench_csv(r, o); });
        if (dat_path) write(dat_path, [](const lcws::BenchReport& r, std::ostream& o) { lcws::write_bench_dat(r, o); });
    });
}

} // extern "C"
