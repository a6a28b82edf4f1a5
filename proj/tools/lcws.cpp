// Command-line front end for the four roles: trusted authority (ta-*),
// data owner (do-*), data receiver (dr-*), plus the benchmark sweep.
// The cloud server is a directory passed as --store.
//
// Exit codes: 0 success, 1 usage error or failed verification,
// 2 policy/key failure, 3 I/O, 4 malformed input.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcws/lcws.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kPolicy = 2, kIo = 3, kFormat = 4 };

int exit_code(lcws_status s) {
    switch (s) {
    case LCWS_OK: return kOk;
    case LCWS_ERR_ACCESS:
    case LCWS_ERR_POLICY_SYNTAX: return kPolicy;
    case LCWS_ERR_IO:
    case LCWS_ERR_NOT_FOUND: return kIo;
    case LCWS_ERR_FORMAT: return kFormat;
    default: return kUsage;
    }
}

struct Failure {
    int code;
};

void check(lcws_status s) {
    if (s == LCWS_OK) return;
    std::fprintf(stderr, "lcws: %s\n", lcws_last_error());
    throw Failure{exit_code(s)};
}

[[noreturn]] void fail(int code, const std::string& msg) {
    std::fprintf(stderr, "lcws: %s\n", msg.c_str());
    throw Failure{code};
}

// Small RAII holder for the library's opaque handles.
template <typename T, void (*Free)(T*)>
struct Handle {
    T* p = nullptr;
    Handle() = default;
    Handle(const Handle&) = delete;
    Handle& operator=(const Handle&) = delete;
    ~Handle() { Free(p); }
    T** out() { return &p; }
    T* get() const { return p; }
};

using Rng = Handle<lcws_rng, lcws_rng_free>;
using PublicKey = Handle<lcws_public_key, lcws_public_key_free>;
using MasterKey = Handle<lcws_master_key, lcws_master_key_free>;
using SecretKey = Handle<lcws_secret_key, lcws_secret_key_free>;
using EncContext = Handle<lcws_enc_context, lcws_enc_context_free>;
using VTuple = Handle<lcws_vtuple, lcws_vtuple_free>;

void make_rng(Rng& rng, const std::optional<std::uint64_t>& seed) {
    check(seed ? lcws_rng_new_seeded(*seed, rng.out()) : lcws_rng_new_system(rng.out()));
}

std::vector<std::uint8_t> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(kIo, "cannot open " + path);
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(kIo, "read failed for " + path);
    return data;
}

void write_all(const std::string& path, const std::uint8_t* data, std::size_t len) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(kIo, "cannot create " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
    if (!out) fail(kIo, "write failed for " + path);
}

std::string join(const std::string& dir, const char* name) {
    if (dir.empty() || dir.back() == '/') return dir + name;
    return dir + "/" + name;
}

constexpr const char* kPublicKeyFile = "public.key";
constexpr const char* kMasterKeyFile = "master.key";
constexpr const char* kContextFile = "encryption.ctx";

void parse_id(const std::string& hex, std::uint8_t id[LCWS_MESSAGE_ID_BYTES]) {
    if (lcws_message_id_parse(hex.c_str(), id) != LCWS_OK) fail(kUsage, lcws_last_error());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Level-partitioned attribute-based encryption with pipelined outsourcing"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("lcws 0.1.0 (") + lcws_suite_name() + ")");

    std::optional<std::uint64_t> seed;
    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Deterministic randomness (testing only)");
    };

    // ta-setup
    std::string setup_dir;
    auto* ta_setup = app.add_subcommand("ta-setup", "Generate the public key, master key and encryption context");
    ta_setup->add_option("--out-dir", setup_dir, "Directory for the key files")->required();
    add_seed(ta_setup);

    // ta-keygen
    std::string keys_dir = ".";
    std::vector<std::string> attrs;
    std::string key_out;
    auto* ta_keygen = app.add_subcommand("ta-keygen", "Issue a secret key for a set of attributes");
    ta_keygen->add_option("--keys", keys_dir, "Directory written by ta-setup")->capture_default_str();
    ta_keygen->add_option("--attrs", attrs, "Comma-separated attributes")->delimiter(',')->required();
    ta_keygen->add_option("--out", key_out, "Secret key file")->required();
    add_seed(ta_keygen);

    // ta-challenge
    std::string message_id, store_dir, vtuple_out;
    auto* ta_challenge = app.add_subcommand("ta-challenge", "Issue a verification tuple for a stored message");
    ta_challenge->add_option("--keys", keys_dir, "Directory written by ta-setup")->capture_default_str();
    ta_challenge->add_option("--message-id", message_id, "Message id printed by do-encrypt")->required();
    ta_challenge->add_option("--store", store_dir, "Store directory")->required();
    ta_challenge->add_option("--out", vtuple_out, "Verification tuple file")->required();
    add_seed(ta_challenge);

    // do-encrypt
    std::string message_file, policy, pk_file, context_file;
    double bandwidth = 0;
    auto* do_encrypt = app.add_subcommand("do-encrypt", "Encrypt a file under a policy and upload it");
    do_encrypt->add_option("--message", message_file, "Plaintext file")->required();
    do_encrypt->add_option("--policy", policy, "Access policy, e.g. \"(a AND (2 of (b, c, d)))\"")->required();
    do_encrypt->add_option("--pk", pk_file, "Public key file")->required();
    do_encrypt->add_option("--context", context_file, "Encryption context file")->required();
    do_encrypt->add_option("--store", store_dir, "Store directory")->required();
    do_encrypt->add_option("--link-bandwidth", bandwidth, "Throttle uploads to this many bytes per second")
        ->transform(CLI::AsSizeValue(false));
    add_seed(do_encrypt);

    // dr-decrypt
    std::string sk_file, out_file;
    auto* dr_decrypt = app.add_subcommand("dr-decrypt", "Download and decrypt a message");
    dr_decrypt->add_option("--message-id", message_id, "Message id")->required();
    dr_decrypt->add_option("--sk", sk_file, "Secret key file")->required();
    dr_decrypt->add_option("--store", store_dir, "Store directory")->required();
    dr_decrypt->add_option("--out", out_file, "Plaintext output file")->required();

    // dr-verify
    std::string vtuple_file;
    auto* dr_verify = app.add_subcommand("dr-verify", "Check a decrypted file against a verification tuple");
    dr_verify->add_option("--message", message_file, "Decrypted file")->required();
    dr_verify->add_option("--vtuple", vtuple_file, "Verification tuple file")->required();

    // bench
    std::vector<std::uint64_t> sizes;
    std::uint32_t depth = 10, leaves = 0, runs = 5;
    double link_bandwidth = 1.5 * 1024 * 1024;
    std::string csv_out, dat_out;
    bool verbose = false;
    auto* bench = app.add_subcommand("bench", "Sequential vs pipelined timing sweep over message sizes");
    bench->add_option("--sizes", sizes, "Comma-separated message sizes, e.g. 1MiB,2MiB")
        ->delimiter(',')
        ->transform(CLI::AsSizeValue(false))
        ->required();
    bench->add_option("--policy-depth", depth, "Levels of the synthetic policy")->capture_default_str();
    bench->add_option("--leaves", leaves, "Leaves of the synthetic policy (default 100, or 1 for depth 1)");
    bench->add_option("--link-bandwidth", link_bandwidth, "Simulated link in bytes per second")
        ->transform(CLI::AsSizeValue(false))
        ->capture_default_str();
    bench->add_option("--runs", runs, "Runs per size; the report holds medians")->capture_default_str();
    bench->add_option("--out-csv", csv_out, "Report CSV")->required();
    bench->add_option("--out-dat", dat_out, "gnuplot data file (default: CSV path with .dat)");
    bench->add_flag("-v,--verbose", verbose, "Progress on stderr");
    add_seed(bench);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*ta_setup) {
            Rng rng;
            make_rng(rng, seed);
            PublicKey pk;
            MasterKey mk;
            EncContext ctx;
            check(lcws_setup(rng.get(), pk.out(), mk.out()));
            check(lcws_enc_context_from_master(mk.get(), ctx.out()));
            std::error_code ec;
            std::filesystem::create_directories(setup_dir, ec);
            if (ec) fail(kIo, "cannot create " + setup_dir);
            check(lcws_public_key_save(pk.get(), join(setup_dir, kPublicKeyFile).c_str()));
            check(lcws_master_key_save(mk.get(), join(setup_dir, kMasterKeyFile).c_str()));
            check(lcws_enc_context_save(ctx.get(), join(setup_dir, kContextFile).c_str()));
            std::printf("%s\n%s\n%s\n", join(setup_dir, kPublicKeyFile).c_str(),
                        join(setup_dir, kMasterKeyFile).c_str(), join(setup_dir, kContextFile).c_str());
        } else if (*ta_keygen) {
            if (attrs.empty()) fail(kUsage, "at least one attribute is required");
            PublicKey pk;
            MasterKey mk;
            check(lcws_public_key_load(join(keys_dir, kPublicKeyFile).c_str(), pk.out()));
            check(lcws_master_key_load(join(keys_dir, kMasterKeyFile).c_str(), mk.out()));
            std::vector<const char*> names;
            for (const auto& a : attrs) {
                if (a.empty()) fail(kUsage, "attribute names must be non-empty");
                names.push_back(a.c_str());
            }
            Rng rng;
            make_rng(rng, seed);
            SecretKey sk;
            check(lcws_keygen(pk.get(), mk.get(), names.data(), names.size(), rng.get(), sk.out()));
            check(lcws_secret_key_save(sk.get(), key_out.c_str()));
            std::size_t count = 0;
            check(lcws_secret_key_attribute_count(sk.get(), &count));
            std::printf("%zu attribute components\n", count);
        } else if (*ta_challenge) {
            std::uint8_t id[LCWS_MESSAGE_ID_BYTES];
            parse_id(message_id, id);
            MasterKey mk;
            check(lcws_master_key_load(join(keys_dir, kMasterKeyFile).c_str(), mk.out()));
            Rng rng;
            make_rng(rng, seed);
            VTuple v;
            check(lcws_challenge(mk.get(), id, store_dir.c_str(), rng.get(), v.out()));
            check(lcws_vtuple_save(v.get(), vtuple_out.c_str()));
        } else if (*do_encrypt) {
            PublicKey pk;
            EncContext ctx;
            check(lcws_policy_check(policy.c_str(), nullptr, nullptr));
            check(lcws_public_key_load(pk_file.c_str(), pk.out()));
            check(lcws_enc_context_load(context_file.c_str(), ctx.out()));
            auto message = read_all(message_file);
            Rng rng;
            make_rng(rng, seed);
            std::uint8_t id[LCWS_MESSAGE_ID_BYTES];
            std::uint32_t blocks = 0;
            check(lcws_encrypt_to_store(pk.get(), ctx.get(), policy.c_str(), message.data(), message.size(),
                                        store_dir.c_str(), rng.get(), bandwidth, id, &blocks));
            char hex[LCWS_MESSAGE_ID_HEX];
            check(lcws_message_id_format(id, hex));
            std::printf("%s\n", hex);
            std::fprintf(stderr, "uploaded %u blocks\n", blocks);
        } else if (*dr_decrypt) {
            std::uint8_t id[LCWS_MESSAGE_ID_BYTES];
            parse_id(message_id, id);
            SecretKey sk;
            check(lcws_secret_key_load(sk_file.c_str(), sk.out()));
            std::uint8_t* plain = nullptr;
            std::size_t len = 0;
            check(lcws_decrypt_from_store(sk.get(), id, store_dir.c_str(), &plain, &len));
            try {
                write_all(out_file, plain, len);
            } catch (...) {
                lcws_buffer_free(plain);
                throw;
            }
            lcws_buffer_free(plain);
        } else if (*dr_verify) {
            VTuple v;
            check(lcws_vtuple_load(vtuple_file.c_str(), v.out()));
            auto message = read_all(message_file);
            int valid = 0;
            check(lcws_verify(message.data(), message.size(), v.get(), &valid));
            std::printf("%s\n", valid ? "True" : "False");
            return valid ? kOk : kUsage;
        } else if (*bench) {
            if (leaves == 0) leaves = depth == 1 ? 1 : 100;
            if (dat_out.empty()) {
                auto dot = csv_out.rfind('.');
                auto slash = csv_out.rfind('/');
                dat_out = (dot != std::string::npos && (slash == std::string::npos || dot > slash))
                              ? csv_out.substr(0, dot) + ".dat"
                              : csv_out + ".dat";
            }
            lcws_bench_config cfg{sizes.data(), sizes.size(), depth, leaves, link_bandwidth, runs, seed.value_or(1)};
            check(lcws_bench(&cfg, csv_out.c_str(), dat_out.c_str(), verbose ? 1 : 0));
            std::printf("%s\n%s\n", csv_out.c_str(), dat_out.c_str());
        }
    } catch (const Failure& f) {
        return f.code;
    }
    return kOk;
}
