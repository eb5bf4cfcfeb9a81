#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "ppfl/config.hpp"
#include "ppfl/rng.hpp"
#include "ppfl/transcript.hpp"
#include "ppfl/wire.hpp"

namespace ppfl {

// Star-topology latency model: per-client one-way base delay sampled once
// from the profile range, plus fresh uniform jitter per message. Delivery on
// each (sender, recipient) channel is FIFO.
class LatencyGraph {
public:
    LatencyGraph() = default;
    LatencyGraph(const LatencyProfile& profile, int n_clients, Rng rng);

    std::uint64_t base(std::uint32_t client) const { return base_[client]; }
    std::uint64_t min_base() const { return min_base_; }
    // one-way delay for a message between client and server (either direction)
    std::uint64_t delay(std::uint32_t client, Rng& jitter_rng) const;

    std::string profile_name;

private:
    std::vector<std::uint64_t> base_;
    std::uint64_t jitter_max_ = 0;
    std::uint64_t min_base_ = 0;
};

LatencyGraph build_graph(const LatencyProfile& profile, const std::string& name, int n_clients,
                         std::uint64_t seed);

enum class Category : std::uint8_t { DhSetup = 0, Encryption = 1, Training = 2, ServerAgg = 3 };
constexpr int kCategoryCount = 4;
std::string category_name(Category c);

// Operation counts reported by party handlers; converted to simulated
// nanoseconds through the cost table so timing is reproducible.
struct OpCounts {
    std::uint64_t dh_keygen = 0;
    std::uint64_t dh_shared = 0;
    std::uint64_t mask_derive = 0;
    std::uint64_t noise_pair = 0;
    std::uint64_t laplace_share = 0;
    std::uint64_t train_example_iter = 0;
    std::uint64_t server_add = 0;
    std::uint64_t server_forward_pair = 0;
    std::uint64_t server_relay = 0;

    OpCounts& operator+=(const OpCounts& o);
};

struct CostTable {
    CostModelConfig c;
    std::uint64_t category_ns(const OpCounts& ops, Category cat) const;
    std::uint64_t total_ns(const OpCounts& ops) const;
};

// Calibrates per-operation charges by micro-benchmarking the real kernels on
// this host. Used when cost_model.kind == "calibrated".
CostModelConfig calibrate_cost_model(const FixedPointParams& fp, const std::string& dh_group);

struct TimingReport {
    // (entity, round, category) -> ns; entity kServerId is the server
    std::map<std::tuple<std::uint32_t, std::uint32_t, Category>, std::uint64_t> cells;

    void add(std::uint32_t entity, std::uint32_t round, Category cat, std::uint64_t ns);
    std::uint64_t total() const;
    std::uint64_t total(Category cat) const;
    std::uint64_t total_entity(std::uint32_t entity) const;
};

struct BreakdownRow {
    std::string category;
    std::string entity;
    std::uint32_t round;
    std::uint64_t ns;
    double per_iteration_ns;
};
std::vector<BreakdownRow> timing_breakdown(const TimingReport& report, int rounds);

// A party's reaction to one delivered message.
struct Actions {
    std::vector<Message> out;
    OpCounts ops;
    std::uint32_t round = 0;  // round the compute is attributed to
};

using Handler = std::function<Actions(const Message&)>;

struct SimStats {
    std::uint64_t events_processed = 0;
    std::uint64_t final_time_ns = 0;
    std::vector<std::uint64_t> round_complete_ns;  // filled by the driver
};

// Deterministic discrete-event loop over one server and n clients. Messages
// are delivered in (deliver_at, seq) order; each party processes one message
// at a time and may not act again before its charged compute finishes.
class SimEngine {
public:
    SimEngine(int n_clients, LatencyGraph graph, CostTable costs, Rng network_rng,
              Transcript* transcript);

    void register_party(std::uint32_t id, Handler h);
    void post(std::uint64_t at_ns, Message m);  // initial/self events, no latency
    void run();

    std::uint64_t now() const { return now_; }
    const TimingReport& timing() const { return timing_; }
    SimStats& stats() { return stats_; }
    // deadlock diagnostics: set by the driver, printed if the queue drains early
    std::function<std::string()> incomplete_report;
    std::function<bool()> complete;

private:
    struct Ev {
        std::uint64_t at;
        std::uint64_t seq;
        std::uint32_t recipient;
        Message msg;
    };
    struct EvCmp {
        bool operator()(const Ev& a, const Ev& b) const {
            return a.at != b.at ? a.at > b.at : a.seq > b.seq;
        }
    };

    void send(std::uint32_t from, std::uint64_t when, Message m);

    int n_;
    LatencyGraph graph_;
    CostTable costs_;
    Rng net_rng_;
    Transcript* transcript_;
    std::priority_queue<Ev, std::vector<Ev>, EvCmp> queue_;
    std::map<std::uint32_t, Handler> handlers_;
    std::map<std::uint32_t, std::uint64_t> ready_at_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> chan_last_;
    std::uint64_t seq_ = 0;
    std::uint64_t now_ = 0;
    TimingReport timing_;
    SimStats stats_;
};

}  // namespace ppfl
