#include "lcws/bench.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <ostream>

#include "lcws/error.hpp"
#include "lcws/rng.hpp"
#include "lcws/scheme.hpp"
#include "lcws/wire.hpp"

namespace lcws {

void BenchConfig::validate() const {
    if (sizes.empty()) throw Error(ErrorKind::argument, "bench needs at least one message size");
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        if (sizes[k] == 0) throw Error(ErrorKind::argument, "message sizes must be positive");
        if (k && sizes[k] <= sizes[k - 1]) throw Error(ErrorKind::argument, "message sizes must be strictly increasing");
    }
    if (runs == 0) throw Error(ErrorKind::argument, "bench needs at least one run");
    link.validate();
}

double median(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorKind::argument, "median of nothing");
    std::sort(values.begin(), values.end());
    const auto m = values.size() / 2;
    return values.size() % 2 ? values[m] : (values[m - 1] + values[m]) / 2;
}

namespace {

double min_slack(const std::vector<double>& link, const std::vector<double>& compute) {
    double s = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < link.size(); ++i) s = std::min(s, link[i] - compute[i]);
    return s;
}

struct Samples {
    std::vector<double> seq, pip, delta, model, slack;

    void add(const PipelineRun& run, Side side) {
        const auto& s = run.schedule;
        seq.push_back(s.total_sequential);
        pip.push_back(s.total_pipelined);
        delta.push_back(s.total_sequential - s.total_pipelined);
        model.push_back(delta_t(run.measured, side));
        const auto& m = run.measured;
        slack.push_back(side == Side::enc ? min_slack(m.tt, m.et) : min_slack(m.tt, m.dt));
    }
};

} // namespace

BenchReport run_bench(const BenchConfig& config, const BenchProgress& progress) {
    config.validate();
    BenchReport report;
    report.policy = synthetic_policy(config.levels, config.leaves);
    report.bandwidth = config.link.bandwidth;
    report.runs = config.runs;
    const auto tree = parse_policy(report.policy);

    SeededRng key_rng(config.seed);
    auto [pk, mk] = setup(key_rng);
    AttributeSet all;
    for (const auto& node : tree.nodes())
        if (node.leaf) all.insert(node.attribute);
    const auto sk = keygen(pk, mk, all, key_rng);
    const auto ctx = encryption_context(mk);

    std::vector<Bytes> messages;
    for (const auto size : config.sizes) {
        messages.emplace_back(size);
        SeededRng(config.seed ^ 0x6d657373616765ULL).fill(messages.back());
    }

    // One round trip per call. Each run visits every size in a fresh random
    // order, so slow drift in machine speed does not line up with size.
    auto measure = [&](const Bytes& message, std::uint64_t run_seed, Samples* enc, Samples* dec) {
        SeededRng rng(run_seed);
        BlockEncryptor encryptor(pk, ctx, tree, message, rng);
        const auto n = encryptor.block_count();

        std::vector<Bytes> uploaded(n);
        {
            SimulatedLink link(config.link);
            auto r = run_encrypt_pipeline(
                n, [&](std::size_t) { return serialize_ctb(encryptor.next()); }, link,
                [&](std::size_t i, Bytes&& b) { uploaded[i - 1] = std::move(b); }, ExecutionMode::overlapped);
            if (enc) enc->add(r, Side::enc);
        }
        {
            SimulatedLink link(config.link);
            Decryptor decryptor(sk);
            auto r = run_decrypt_pipeline(
                n, [&](std::size_t i) { return uploaded[i - 1]; }, link,
                [&](std::size_t, Bytes&& b) { decryptor.receive(parse_ctb(b)); }, ExecutionMode::overlapped);
            if (dec) dec->add(r, Side::dec);
            auto out = assemble_message(decryptor.state(), sk);
            if (!out || *out != message) throw Error(ErrorKind::state, "benchmark round trip failed");
        }
        return n;
    };

    if (progress) progress("warm-up");
    measure(messages.front(), config.seed, nullptr, nullptr);

    std::vector<Samples> enc(config.sizes.size()), dec(config.sizes.size());
    std::vector<std::uint32_t> blocks(config.sizes.size());
    std::vector<std::size_t> order(config.sizes.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 shuffler(config.seed);
    for (std::uint32_t run = 0; run < config.runs; ++run) {
        std::shuffle(order.begin(), order.end(), shuffler);
        for (const auto k : order) {
            if (progress)
                progress("run " + std::to_string(run + 1) + "/" + std::to_string(config.runs) + " size " +
                         std::to_string(config.sizes[k]));
            blocks[k] = measure(messages[k], config.seed + run, &enc[k], &dec[k]);
        }
    }

    for (std::size_t k = 0; k < config.sizes.size(); ++k) {
        BenchRow row;
        row.size = config.sizes[k];
        row.blocks = blocks[k];
        row.enc_sequential = median(enc[k].seq);
        row.enc_pipelined = median(enc[k].pip);
        row.enc_delta = median(enc[k].delta);
        row.enc_model_delta = median(enc[k].model);
        row.enc_min_slack = median(enc[k].slack);
        row.dec_sequential = median(dec[k].seq);
        row.dec_pipelined = median(dec[k].pip);
        row.dec_delta = median(dec[k].delta);
        row.dec_model_delta = median(dec[k].model);
        row.dec_min_slack = median(dec[k].slack);
        report.rows.push_back(row);
    }
    return report;
}

void write_bench_csv(const BenchReport& report, std::ostream& out) {
    out << "size_bytes,blocks,enc_sequential,enc_pipelined,enc_delta,enc_model_delta,enc_min_slack,"
           "dec_sequential,dec_pipelined,dec_delta,dec_model_delta,dec_min_slack\n";
    out << std::setprecision(9);
    for (const auto& r : report.rows) {
        out << r.size << ',' << r.blocks << ',' << r.enc_sequential << ',' << r.enc_pipelined << ',' << r.enc_delta
            << ',' << r.enc_model_delta << ',' << r.enc_min_slack << ',' << r.dec_sequential << ','
            << r.dec_pipelined << ',' << r.dec_delta << ',' << r.dec_model_delta << ',' << r.dec_min_slack << '\n';
    }
}

void write_bench_dat(const BenchReport& report, std::ostream& out) {
    out << "# bandwidth " << report.bandwidth << " B/s, " << report.runs << " runs, medians\n";
    out << "# size_mib enc_sequential enc_pipelined dec_sequential dec_pipelined enc_delta dec_delta\n";
    out << std::setprecision(9);
    for (const auto& r : report.rows) {
        out << static_cast<double>(r.size) / (1024.0 * 1024.0) << ' ' << r.enc_sequential << ' ' << r.enc_pipelined
            << ' ' << r.dec_sequential << ' ' << r.dec_pipelined << ' ' << r.enc_delta << ' ' << r.dec_delta
            << '\n';
    }
}

} // namespace lcws
