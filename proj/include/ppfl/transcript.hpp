#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppfl/config.hpp"
#include "ppfl/crypto.hpp"
#include "ppfl/wire.hpp"

namespace ppfl {

// One captured wire record (Full capture only; big runs use the hash stream).
struct WireRecord {
    std::uint64_t time_ns = 0;
    MsgKind kind{};
    std::uint32_t sender = 0;
    std::uint32_t recipient = 0;
    std::uint32_t round = 0;
    std::uint32_t weight = 0;
    RingElem value0{};
    RingElem value1{};
    double real = 0.0;
};

// Per-round private view captured for the attack harness (one tracked weight).
struct AttackRoundView {
    std::vector<double> local_weights;          // w_i for every client, tracked weight
    double global = 0.0;                        // broadcast W, tracked weight
    std::vector<double> pair_d0;                // cleartext gamma-diffs sent TO the honest
    std::vector<double> pair_d1;                //   party, indexed by sender (honest slot 0)
    std::vector<double> nonobl_shares;          // per-client local Laplace shares
    std::vector<std::uint8_t> honest_bits;      // honest receiver's noise choices
};

// Everything observed/recorded during a run: streaming hash of all wire
// records, logical message counters, optional full log, per-party private
// logs, and replay data. Replaying a captured round reproduces W bit-exactly.
class Transcript {
public:
    explicit Transcript(CaptureMode mode = CaptureMode::Off) : mode_(mode) {}

    CaptureMode mode() const { return mode_; }
    bool capture_attack() const {
        return mode_ == CaptureMode::Attack || mode_ == CaptureMode::Full;
    }
    bool capture_full() const { return mode_ == CaptureMode::Full; }
    bool hashing() const { return mode_ != CaptureMode::Off; }

    void observe(const Message& m, std::uint64_t deliver_ns);
    void count_only(const Message& m);

    std::string wire_hash() const;
    const std::map<MsgKind, std::uint64_t>& counts() const { return counts_; }
    std::uint64_t count(MsgKind k) const {
        auto it = counts_.find(k);
        return it == counts_.end() ? 0 : it->second;
    }

    std::vector<WireRecord> full_log;            // Full capture
    std::vector<AttackRoundView> rounds;         // Attack/Full capture
    std::uint32_t honest = 0;
    std::uint32_t tracked_weight = 0;
    std::uint32_t n_weights_hint = 0;  // lets batched records expand to per-weight rows
    Mode run_mode = Mode::Oblivious;
    int n_clients = 0;
    double noise_scale = 0.0;

    AttackRoundView& round_view(std::uint32_t round);

private:
    CaptureMode mode_;
    std::map<MsgKind, std::uint64_t> counts_;
    std::vector<std::uint8_t> hash_buf_;
    bool hash_started_ = false;
    Digest32 running_{};
};

}  // namespace ppfl
