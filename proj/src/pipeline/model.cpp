#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>

#include "lcws/pipeline.hpp"

namespace lcws {

void StageTimes::validate() const {
    const auto n = tt.size();
    if (et.size() != n || dt.size() != n) throw Error(ErrorKind::argument, "stage time lists differ in length");
    for (const auto* v : {&et, &tt, &dt})
        for (double d : *v)
            if (!std::isfinite(d) || d < 0) throw Error(ErrorKind::argument, "stage durations must be finite and >= 0");
}

StageTimes StageTimes::uniform(std::size_t n, double e, double t, double d) {
    return {std::vector<double>(n, e), std::vector<double>(n, t), std::vector<double>(n, d)};
}

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Shared two-stage recurrence: first stage back to back, second stage starts
// at max(previous second-stage finish, own first-stage finish).
void two_stage(const std::vector<double>& first, const std::vector<double>& second, std::vector<Interval>& a,
               std::vector<Interval>& b) {
    const auto n = first.size();
    a.resize(n);
    b.resize(n);
    double fa = 0, fb = 0;
    for (std::size_t i = 0; i < n; ++i) {
        a[i] = {fa, fa + first[i]};
        fa = a[i].end;
        const double start = std::max(fb, fa);
        b[i] = {start, start + second[i]};
        fb = b[i].end;
    }
}

} // namespace

double sequential_total_enc(const StageTimes& t) {
    t.validate();
    return sum(t.et) + sum(t.tt);
}

double sequential_total_dec(const StageTimes& t) {
    t.validate();
    return sum(t.tt) + sum(t.dt);
}

ScheduleResult pipelined_total_enc(const StageTimes& t) {
    t.validate();
    ScheduleResult r;
    r.side = Side::enc;
    two_stage(t.et, t.tt, r.enc, r.tx);
    r.total_sequential = sequential_total_enc(t);
    r.total_pipelined = r.tx.empty() ? 0.0 : r.tx.back().end;
    r.delta_t = r.total_sequential - r.total_pipelined;
    return r;
}

ScheduleResult pipelined_total_dec(const StageTimes& t) {
    t.validate();
    ScheduleResult r;
    r.side = Side::dec;
    two_stage(t.tt, t.dt, r.tx, r.dec);
    r.total_sequential = sequential_total_dec(t);
    r.total_pipelined = r.dec.empty() ? 0.0 : r.dec.back().end;
    r.delta_t = r.total_sequential - r.total_pipelined;
    return r;
}

double delta_t(const StageTimes& t, Side side) {
    return (side == Side::enc ? pipelined_total_enc(t) : pipelined_total_dec(t)).delta_t;
}

ScheduleResult simulate_schedule(const StageTimes& t, Side side) {
    t.validate();
    const auto& first = side == Side::enc ? t.et : t.tt;
    const auto& second = side == Side::enc ? t.tt : t.dt;
    const auto n = first.size();

    ScheduleResult r;
    r.side = side;
    auto& a = side == Side::enc ? r.enc : r.tx;
    auto& b = side == Side::enc ? r.tx : r.dec;
    a.resize(n);
    b.resize(n);

    enum Kind { first_done, second_done };
    struct Event {
        double time;
        std::uint64_t seq;
        Kind kind;
        std::size_t block;
        bool operator>(const Event& o) const { return time != o.time ? time > o.time : seq > o.seq; }
    };
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events;
    std::uint64_t seq = 0;
    std::queue<std::size_t> waiting; // finished stage one, not yet started stage two
    bool second_busy = false;
    std::size_t next_first = 0;

    auto start_first = [&](double now) {
        if (next_first >= n) return;
        a[next_first].start = now;
        events.push({now + first[next_first], seq++, first_done, next_first});
        ++next_first;
    };
    auto start_second = [&](double now) {
        if (second_busy || waiting.empty()) return;
        const auto i = waiting.front();
        waiting.pop();
        second_busy = true;
        b[i].start = now;
        events.push({now + second[i], seq++, second_done, i});
    };

    start_first(0.0);
    while (!events.empty()) {
        const auto ev = events.top();
        events.pop();
        if (ev.kind == first_done) {
            a[ev.block].end = ev.time;
            waiting.push(ev.block);
            start_first(ev.time);
        } else {
            b[ev.block].end = ev.time;
            second_busy = false;
        }
        start_second(ev.time);
    }
    r.total_sequential = side == Side::enc ? sequential_total_enc(t) : sequential_total_dec(t);
    r.total_pipelined = n ? b.back().end : 0.0;
    r.delta_t = r.total_sequential - r.total_pipelined;
    return r;
}

void write_schedule_csv(const ScheduleResult& r, std::ostream& out) {
    out << "block,enc_start,enc_end,tx_start,tx_end,dec_start,dec_end\n";
    const auto n = std::max({r.enc.size(), r.tx.size(), r.dec.size()});
    auto cell = [&](const std::vector<Interval>& v, std::size_t i) {
        if (i < v.size()) {
            out << ',' << v[i].start << ',' << v[i].end;
        } else {
            out << ",,";
        }
    };
    const auto old = out.precision(9);
    for (std::size_t i = 0; i < n; ++i) {
        out << (i + 1);
        cell(r.enc, i);
        cell(r.tx, i);
        cell(r.dec, i);
        out << '\n';
    }
    out.precision(old);
}

} // namespace lcws
