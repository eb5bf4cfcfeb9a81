#include "ppfl/simnet.hpp"

#include <chrono>
#include <stdexcept>

#include "ppfl/dpnoise.hpp"
#include "ppfl/keyexchange.hpp"

namespace ppfl {

LatencyGraph::LatencyGraph(const LatencyProfile& profile, int n_clients, Rng rng) {
    base_.resize(static_cast<std::size_t>(n_clients));
    min_base_ = ~0ull;
    for (auto& b : base_) {
        b = profile.base_min_ns +
            rng.below(profile.base_max_ns - profile.base_min_ns + 1);
        min_base_ = std::min(min_base_, b);
    }
    jitter_max_ = profile.jitter_max_ns;
}

std::uint64_t LatencyGraph::delay(std::uint32_t client, Rng& jitter_rng) const {
    const std::uint64_t jitter = jitter_max_ ? jitter_rng.below(jitter_max_ + 1) : 0;
    return base_[client] + jitter;
}

LatencyGraph build_graph(const LatencyProfile& profile, const std::string& name, int n_clients,
                         std::uint64_t seed) {
    if (profile.base_min_ns == 0 || profile.base_max_ns < profile.base_min_ns)
        throw std::invalid_argument("latency profile: base range invalid (min must be > 0)");
    LatencyGraph g(profile, n_clients, Rng(seed));
    g.profile_name = name;
    return g;
}

std::string category_name(Category c) {
    switch (c) {
        case Category::DhSetup: return "DH_SETUP";
        case Category::Encryption: return "ENCRYPTION";
        case Category::Training: return "TRAINING";
        case Category::ServerAgg: return "SERVER_AGG";
    }
    return "?";
}

OpCounts& OpCounts::operator+=(const OpCounts& o) {
    dh_keygen += o.dh_keygen;
    dh_shared += o.dh_shared;
    mask_derive += o.mask_derive;
    noise_pair += o.noise_pair;
    laplace_share += o.laplace_share;
    train_example_iter += o.train_example_iter;
    server_add += o.server_add;
    server_forward_pair += o.server_forward_pair;
    server_relay += o.server_relay;
    return *this;
}

std::uint64_t CostTable::category_ns(const OpCounts& ops, Category cat) const {
    switch (cat) {
        case Category::DhSetup:
            return ops.dh_keygen * c.dh_keygen_ns + ops.dh_shared * c.dh_shared_ns;
        case Category::Encryption:
            return ops.mask_derive * c.mask_derive_ns + ops.noise_pair * c.noise_pair_ns +
                   ops.laplace_share * c.laplace_share_ns;
        case Category::Training:
            return ops.train_example_iter * c.train_example_iter_ns;
        case Category::ServerAgg:
            return ops.server_add * c.server_add_ns +
                   ops.server_forward_pair * c.server_forward_pair_ns +
                   ops.server_relay * c.server_relay_ns;
    }
    return 0;
}

std::uint64_t CostTable::total_ns(const OpCounts& ops) const {
    std::uint64_t t = 0;
    for (int i = 0; i < kCategoryCount; ++i) t += category_ns(ops, static_cast<Category>(i));
    return t;
}

namespace {

template <class F>
std::uint64_t measure_ns(std::size_t reps, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < reps; ++i) f(i);
    const auto t1 = std::chrono::steady_clock::now();
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    return static_cast<std::uint64_t>(ns / static_cast<long long>(reps)) + 1;
}

}  // namespace

CostModelConfig calibrate_cost_model(const FixedPointParams& fp, const std::string& dh_group) {
    CostModelConfig out;
    out.kind = "calibrated";
    const DhParams dh = DhParams::named(dh_group);
    Rng rng(0xca11b7a7e);

    DhKeyPair kp = dh_keygen(dh, rng);
    out.dh_keygen_ns = measure_ns(4, [&](std::size_t) { (void)dh_keygen(dh, rng); });
    out.dh_shared_ns = measure_ns(4, [&](std::size_t) { (void)dh_shared(kp.priv, kp.pub, dh); });

    SharedKey sk;
    sk.key = sha256(std::string("calibration"));
    std::uint64_t sink = 0;
    out.mask_derive_ns = measure_ns(20000, [&](std::size_t i) {
        sink += derive_mask(sk, MaskLabel::pairwise_r(static_cast<std::uint32_t>(i), 0, 0, 1)).v;
    });

    const std::uint32_t receivers[1] = {1};
    out.noise_pair_ns = measure_ns(5000, [&](std::size_t i) {
        sink += make_noise_pairs(0, receivers, 1.0, 100, sk.key, rng,
                                 static_cast<std::uint32_t>(i), 0, fp)[0]
                    .eta0.v;
    });
    out.laplace_share_ns = measure_ns(20000, [&](std::size_t) {
        sink += static_cast<std::uint64_t>(local_laplace_share(1.0, 100, rng));
    });

    // one example-iteration of gradient work at the default width
    std::vector<double> w(105, 0.1), x(105, 0.05);
    out.train_example_iter_ns = measure_ns(20000, [&](std::size_t) {
        double z = 0;
        for (std::size_t c = 0; c < w.size(); ++c) z += w[c] * x[c];
        const double g = -1.0 / (1.0 + std::exp(z));
        for (std::size_t c = 0; c < w.size(); ++c) w[c] -= 1e-9 * g * x[c];
    });

    out.server_add_ns = measure_ns(100000, [&](std::size_t i) { sink += i; });
    out.server_forward_pair_ns = out.server_add_ns * 4;
    out.server_relay_ns = out.server_add_ns * 4;
    // keep the measured work observable
    if ((sink ^ static_cast<std::uint64_t>(w[0] * 1e9)) == 0xdeadbeef) out.server_add_ns += 1;
    return out;
}

void TimingReport::add(std::uint32_t entity, std::uint32_t round, Category cat,
                       std::uint64_t ns) {
    if (ns == 0) return;
    cells[{entity, round, cat}] += ns;
}

std::uint64_t TimingReport::total() const {
    std::uint64_t t = 0;
    for (const auto& [k, v] : cells) t += v;
    return t;
}

std::uint64_t TimingReport::total(Category cat) const {
    std::uint64_t t = 0;
    for (const auto& [k, v] : cells)
        if (std::get<2>(k) == cat) t += v;
    return t;
}

std::uint64_t TimingReport::total_entity(std::uint32_t entity) const {
    std::uint64_t t = 0;
    for (const auto& [k, v] : cells)
        if (std::get<0>(k) == entity) t += v;
    return t;
}

std::vector<BreakdownRow> timing_breakdown(const TimingReport& report, int rounds) {
    std::vector<BreakdownRow> rows;
    rows.reserve(report.cells.size());
    for (const auto& [key, ns] : report.cells) {
        const auto [entity, round, cat] = key;
        BreakdownRow r;
        r.category = category_name(cat);
        r.entity = entity == kServerId ? "server" : "client" + std::to_string(entity);
        r.round = round;
        r.ns = ns;
        r.per_iteration_ns = rounds > 0 ? static_cast<double>(ns) / rounds : 0.0;
        rows.push_back(std::move(r));
    }
    return rows;
}

SimEngine::SimEngine(int n_clients, LatencyGraph graph, CostTable costs, Rng network_rng,
                     Transcript* transcript)
    : n_(n_clients),
      graph_(std::move(graph)),
      costs_(costs),
      net_rng_(network_rng),
      transcript_(transcript) {}

void SimEngine::register_party(std::uint32_t id, Handler h) { handlers_[id] = std::move(h); }

void SimEngine::post(std::uint64_t at_ns, Message m) {
    queue_.push(Ev{at_ns, seq_++, m.recipient, std::move(m)});
}

void SimEngine::send(std::uint32_t from, std::uint64_t when, Message m) {
    // star topology: every hop is client<->server
    const std::uint32_t client = m.recipient == kServerId ? from : m.recipient;
    std::uint64_t deliver = when + graph_.delay(client, net_rng_);
    auto& last = chan_last_[{from, m.recipient}];
    if (deliver <= last) deliver = last + 1;  // per-channel FIFO
    last = deliver;
    queue_.push(Ev{deliver, seq_++, m.recipient, std::move(m)});
}

void SimEngine::run() {
    while (!queue_.empty()) {
        Ev ev = std::move(const_cast<Ev&>(queue_.top()));
        queue_.pop();
        now_ = ev.at;
        ++stats_.events_processed;
        if (transcript_) transcript_->observe(ev.msg, ev.at);
        auto it = handlers_.find(ev.recipient);
        if (it == handlers_.end()) throw std::runtime_error("simnet: message to unknown party");

        std::uint64_t& ready = ready_at_[ev.recipient];
        const std::uint64_t start = std::max(ev.at, ready);
        Actions acts = it->second(ev.msg);
        std::uint64_t cost = 0;
        for (int c = 0; c < kCategoryCount; ++c) {
            const Category cat = static_cast<Category>(c);
            const std::uint64_t ns = costs_.category_ns(acts.ops, cat);
            timing_.add(ev.recipient, acts.round, cat, ns);
            cost += ns;
        }
        ready = start + cost;
        for (Message& out : acts.out) send(ev.recipient, ready, std::move(out));
        stats_.final_time_ns = std::max(stats_.final_time_ns, ready);
    }
    if (complete && !complete()) {
        std::string detail = incomplete_report ? incomplete_report() : std::string("unknown");
        throw std::runtime_error("simnet: deadlock, protocol incomplete: " + detail);
    }
}

}  // namespace ppfl
