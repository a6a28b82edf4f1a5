#ifndef LCWS_BENCH_HPP
#define LCWS_BENCH_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "lcws/pipeline.hpp"

namespace lcws {

struct BenchConfig {
    std::vector<std::size_t> sizes; // message sizes in bytes, strictly increasing
    std::uint32_t levels = 10;
    std::uint32_t leaves = 100;
    LinkModel link{1.5 * 1024 * 1024, 0, std::nullopt, 0};
    std::uint32_t runs = 5;
    std::uint64_t seed = 1;

    void validate() const;
};

/// One sweep point. Every timing is the median over the configured runs.
/// "sequential" is the sum of the measured stage durations, "pipelined" the
/// measured makespan of the overlapped run, and "model_delta" the gap the
/// recurrence predicts from the same measured durations. "min_slack" is
/// min_i(TT_i - ET_i) on the encryption side and min_i(TT_i - DT_i) on the
/// decryption side; positive means the link dominates.
struct BenchRow {
    std::size_t size = 0;
    std::uint32_t blocks = 0;
    double enc_sequential = 0, enc_pipelined = 0, enc_delta = 0, enc_model_delta = 0, enc_min_slack = 0;
    double dec_sequential = 0, dec_pipelined = 0, dec_delta = 0, dec_model_delta = 0, dec_min_slack = 0;
};

struct BenchReport {
    std::string policy;
    double bandwidth = 0;
    std::uint32_t runs = 0;
    std::vector<BenchRow> rows;
};

using BenchProgress = std::function<void(const std::string&)>;

BenchReport run_bench(const BenchConfig& config, const BenchProgress& progress = {});

double median(std::vector<double> values);

void write_bench_csv(const BenchReport& report, std::ostream& out);
/// Whitespace-separated columns with a '#' header, sizes in MiB.
void write_bench_dat(const BenchReport& report, std::ostream& out);

} // namespace lcws

#endif
