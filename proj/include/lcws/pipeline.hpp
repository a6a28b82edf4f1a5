#ifndef LCWS_PIPELINE_HPP
#define LCWS_PIPELINE_HPP

// Two-stage pipeline latency model: one compute worker and one link, FIFO,
// no reordering. Encryption side: encrypt -> transmit. Decryption side:
// transmit -> decrypt.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "lcws/bytes.hpp"
#include "lcws/error.hpp"

namespace lcws {

/// Per-block stage durations in seconds.
struct StageTimes {
    std::vector<double> et; // encryption
    std::vector<double> tt; // transmission
    std::vector<double> dt; // decryption

    std::size_t n() const { return tt.size(); }
    /// Throws unless all three lists have length n and hold finite, non-negative values.
    void validate() const;

    static StageTimes uniform(std::size_t n, double et, double tt, double dt);
};

enum class Side { enc, dec };

struct Interval {
    double start = 0;
    double end = 0;
    double duration() const { return end - start; }
};

struct ScheduleResult {
    Side side = Side::enc;
    // Per-block intervals; only the two stages of `side` are populated.
    std::vector<Interval> enc, tx, dec;
    double total_sequential = 0;
    double total_pipelined = 0;
    double delta_t = 0;
};

/// ET_M + TT_M.
double sequential_total_enc(const StageTimes& t);
/// TT_M + DT_M.
double sequential_total_dec(const StageTimes& t);

/// E_i = E_{i-1} + ET_i, X_i = max(X_{i-1}, E_i) + TT_i, total = X_n.
ScheduleResult pipelined_total_enc(const StageTimes& t);
/// A_i = A_{i-1} + TT_i, D_i = max(D_{i-1}, A_i) + DT_i, total = D_n.
ScheduleResult pipelined_total_dec(const StageTimes& t);

double delta_t(const StageTimes& t, Side side);

/// Event-driven simulation of the same two-stage topology.
ScheduleResult simulate_schedule(const StageTimes& t, Side side);

/// Columns: block, enc_start, enc_end, tx_start, tx_end, dec_start, dec_end.
/// Stages not involved on this side are left empty.
void write_schedule_csv(const ScheduleResult& r, std::ostream& out);

struct LinkModel {
    double bandwidth = 1e9;   // bytes per second, > 0 (infinity allowed)
    double latency = 0;       // seconds per message
    std::optional<std::uint64_t> jitter_seed;
    double jitter = 0;        // relative, transfer time scaled by U[1 - jitter, 1 + jitter]

    void validate() const;
    double transfer_time(std::size_t bytes) const;
};

/// Sleeps for the link's transfer time of `bytes`. Not thread-safe when jitter is enabled.
class SimulatedLink {
public:
    explicit SimulatedLink(LinkModel model);
    ~SimulatedLink();
    SimulatedLink(const SimulatedLink&) = delete;
    SimulatedLink& operator=(const SimulatedLink&) = delete;

    void transmit(std::size_t bytes);
    const LinkModel& model() const { return model_; }

private:
    LinkModel model_;
    struct Jitter;
    std::unique_ptr<Jitter> jitter_;
};

class PipelineError : public Error {
public:
    /// `kind` is the kind of the underlying lcws::Error, or state for foreign exceptions.
    PipelineError(std::size_t block, ErrorKind kind, const std::string& what)
        : Error(kind, "pipeline stage failed at block " + std::to_string(block) + ": " + what),
          block_(block) {}
    /// 1-based index of the failing block.
    std::size_t block() const noexcept { return block_; }

private:
    std::size_t block_;
};

enum class ExecutionMode {
    overlapped, // stage two of block i runs while stage one works on block i + 1
    serial,     // all of stage one, then all of stage two
};

struct PipelineRun {
    ScheduleResult schedule; // measured intervals; total_pipelined is the measured makespan
    StageTimes measured;     // per-block measured durations
};

/// Runs first(i) then second(i) for i = 1..n on two threads connected by a
/// bounded FIFO (capacity 0 means n). Intervals are wall-clock seconds from
/// the start of the run. Any stage exception aborts the run with PipelineError.
PipelineRun run_two_stage(std::size_t n, const std::function<void(std::size_t)>& first,
                          const std::function<void(std::size_t)>& second, Side side, ExecutionMode mode,
                          std::size_t queue_capacity = 0);

/// Encryption side: produce(i) builds the wire bytes of block i, the link
/// carries them, deliver(i, bytes) hands them to the receiver (e.g. the store).
PipelineRun run_encrypt_pipeline(std::size_t n, const std::function<Bytes(std::size_t)>& produce, SimulatedLink& link,
                                 const std::function<void(std::size_t, Bytes&&)>& deliver, ExecutionMode mode);

/// Decryption side: fetch(i) obtains block i's bytes from the sender, the link
/// carries them, consume(i, bytes) decrypts.
PipelineRun run_decrypt_pipeline(std::size_t n, const std::function<Bytes(std::size_t)>& fetch, SimulatedLink& link,
                                 const std::function<void(std::size_t, Bytes&&)>& consume, ExecutionMode mode);

} // namespace lcws

#endif
