#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "lcws/pipeline.hpp"

namespace lcws {

namespace {

using Clock = std::chrono::steady_clock;

template <typename T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity ? capacity : 1) {}

    bool push(T v) {
        std::unique_lock lk(mu_);
        not_full_.wait(lk, [&] { return closed_ || items_.size() < capacity_; });
        if (closed_) return false;
        items_.push_back(std::move(v));
        not_empty_.notify_one();
        return true;
    }

    std::optional<T> pop() {
        std::unique_lock lk(mu_);
        not_empty_.wait(lk, [&] { return closed_ || !items_.empty(); });
        if (items_.empty()) return std::nullopt;
        T v = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return v;
    }

    void close() {
        std::lock_guard lk(mu_);
        closed_ = true;
        not_empty_.notify_all();
        not_full_.notify_all();
    }

private:
    std::size_t capacity_;
    std::mutex mu_;
    std::condition_variable not_empty_, not_full_;
    std::deque<T> items_;
    bool closed_ = false;
};

} // namespace

void LinkModel::validate() const {
    if (!(bandwidth > 0)) throw Error(ErrorKind::argument, "link bandwidth must be positive");
    if (!(latency >= 0) || !std::isfinite(latency)) throw Error(ErrorKind::argument, "link latency must be >= 0");
    if (!(jitter >= 0 && jitter < 1)) throw Error(ErrorKind::argument, "link jitter must be in [0, 1)");
}

double LinkModel::transfer_time(std::size_t bytes) const {
    validate();
    return static_cast<double>(bytes) / bandwidth + latency;
}

struct SimulatedLink::Jitter {
    std::mt19937_64 gen;
    std::uniform_real_distribution<double> dist;
};

SimulatedLink::SimulatedLink(LinkModel model) : model_(model) {
    model_.validate();
    if (model_.jitter_seed && model_.jitter > 0)
        jitter_ = std::make_unique<Jitter>(
            Jitter{std::mt19937_64(*model_.jitter_seed),
                   std::uniform_real_distribution<double>(1.0 - model_.jitter, 1.0 + model_.jitter)});
}

SimulatedLink::~SimulatedLink() = default;

void SimulatedLink::transmit(std::size_t bytes) {
    double seconds = model_.transfer_time(bytes);
    if (jitter_) seconds *= jitter_->dist(jitter_->gen);
    if (seconds <= 0) return;
    std::this_thread::sleep_until(Clock::now() + std::chrono::duration<double>(seconds));
}

PipelineRun run_two_stage(std::size_t n, const std::function<void(std::size_t)>& first,
                          const std::function<void(std::size_t)>& second, Side side, ExecutionMode mode,
                          std::size_t queue_capacity) {
    PipelineRun run;
    auto& sched = run.schedule;
    sched.side = side;
    auto& a = side == Side::enc ? sched.enc : sched.tx;
    auto& b = side == Side::enc ? sched.tx : sched.dec;
    a.assign(n, {});
    b.assign(n, {});

    const auto t0 = Clock::now();
    auto now = [&] { return std::chrono::duration<double>(Clock::now() - t0).count(); };

    std::mutex err_mu;
    std::optional<std::size_t> failed_block;
    std::string failure;
    ErrorKind failure_kind = ErrorKind::state;
    auto record_failure = [&](std::size_t block, const std::exception& e) {
        std::lock_guard lk(err_mu);
        if (!failed_block || block < *failed_block) {
            failed_block = block;
            failure = e.what();
            auto* err = dynamic_cast<const Error*>(&e);
            failure_kind = err ? err->kind() : ErrorKind::state;
        }
    };
    auto run_stage = [&](const std::function<void(std::size_t)>& fn, std::vector<Interval>& slots, std::size_t i) {
        slots[i].start = now();
        try {
            fn(i + 1);
        } catch (const std::exception& e) {
            record_failure(i + 1, e);
            return false;
        }
        slots[i].end = now();
        return true;
    };

    if (mode == ExecutionMode::serial) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) ok = run_stage(first, a, i);
        for (std::size_t i = 0; i < n && ok; ++i) ok = run_stage(second, b, i);
    } else {
        BoundedQueue<std::size_t> queue(queue_capacity ? queue_capacity : std::max<std::size_t>(n, 1));
        std::atomic<bool> abort{false};
        std::thread producer([&] {
            for (std::size_t i = 0; i < n && !abort.load(); ++i) {
                if (!run_stage(first, a, i)) break;
                if (!queue.push(i)) break;
            }
            queue.close();
        });
        while (auto i = queue.pop()) {
            if (!run_stage(second, b, *i)) {
                abort = true;
                queue.close();
                break;
            }
        }
        producer.join();
    }
    if (failed_block) throw PipelineError(*failed_block, failure_kind, failure);

    auto& m = run.measured;
    m.et.assign(n, 0.0);
    m.tt.assign(n, 0.0);
    m.dt.assign(n, 0.0);
    auto& ma = side == Side::enc ? m.et : m.tt;
    auto& mb = side == Side::enc ? m.tt : m.dt;
    double seq = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ma[i] = a[i].duration();
        mb[i] = b[i].duration();
        seq += ma[i] + mb[i];
    }
    sched.total_sequential = seq;
    sched.total_pipelined = n ? std::max(b.back().end, a.back().end) : 0.0;
    sched.delta_t = sched.total_sequential - sched.total_pipelined;
    return run;
}

PipelineRun run_encrypt_pipeline(std::size_t n, const std::function<Bytes(std::size_t)>& produce, SimulatedLink& link,
                                 const std::function<void(std::size_t, Bytes&&)>& deliver, ExecutionMode mode) {
    std::vector<Bytes> slots(n);
    return run_two_stage(
        n, [&](std::size_t i) { slots[i - 1] = produce(i); },
        [&](std::size_t i) {
            link.transmit(slots[i - 1].size());
            deliver(i, std::move(slots[i - 1]));
        },
        Side::enc, mode);
}

PipelineRun run_decrypt_pipeline(std::size_t n, const std::function<Bytes(std::size_t)>& fetch, SimulatedLink& link,
                                 const std::function<void(std::size_t, Bytes&&)>& consume, ExecutionMode mode) {
    std::vector<Bytes> slots(n);
    return run_two_stage(
        n,
        [&](std::size_t i) {
            slots[i - 1] = fetch(i);
            link.transmit(slots[i - 1].size());
        },
        [&](std::size_t i) { consume(i, std::move(slots[i - 1])); }, Side::dec, mode);
}

} // namespace lcws
