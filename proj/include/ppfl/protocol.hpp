#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppfl/config.hpp"
#include "ppfl/dataset.hpp"
#include "ppfl/dpnoise.hpp"
#include "ppfl/keyexchange.hpp"
#include "ppfl/regression.hpp"
#include "ppfl/rng.hpp"
#include "ppfl/simnet.hpp"
#include "ppfl/transcript.hpp"
#include "ppfl/wire.hpp"

namespace ppfl {

// Child tag of the data-seed root under which round r's per-client sampling
// streams live: Rng(data_seed).child(kTagSample, r).child(client_id).
constexpr std::uint64_t kTagSample = 2;

struct ProtocolConfig {
    int n = 2;
    std::uint32_t n_weights = 1;
    Mode mode = Mode::Plain;
    FixedPointParams fp;
    double noise_scale = 1.0;
    int rounds = 1;
    bool zero_noise = false;
    DhParams dh;
    TrainConfig train;
    int local_size = 1;
};

// In-place order randomization of the pairs destined to one receiver for one
// weight: each (eta0, eta1) is swapped with probability 1/2, then the list is
// uniformly shuffled. Contents are never modified additively -- that would
// break the exact cancellation the aggregate relies on.
void maybe_swap(RingPair& p, bool bit);
void server_forward_noise(std::span<RingPair> block, Rng& rng);

// One client of the star protocol. Single-owner state machine: the engine
// delivers one message at a time; heavy per-receiver / per-weight work inside
// a delivery fans out through parallel_for with per-unit child RNG streams,
// so results are bit-identical at any thread count.
class Client {
public:
    struct Init {
        std::uint32_t id = 0;
        const ProtocolConfig* pc = nullptr;
        Rng proto_base;  // child(protocol_seed, id)
        Rng data_root;   // Rng(data_seed)
        const Dataset* data = nullptr;
        std::span<const std::uint32_t> train_idx;
        Transcript* transcript = nullptr;
        const Weights* fixed_weights = nullptr;  // harness: skip training
    };

    explicit Client(Init init);

    Actions handle(const Message& m);

    // semi-honest introspection (tests, transcripts)
    std::uint32_t id() const { return id_; }
    const std::map<std::uint32_t, SharedKey>& shared_keys() const { return keys_; }
    const Digest32& mask_key() const { return mask_key_; }
    const mpz_class& dh_public() const { return dh_.pub; }
    const Weights& local_weights() const { return w_local_; }
    const Weights& global_weights() const { return w_start_; }
    bool finished() const { return finished_; }
    std::uint32_t current_round() const { return round_; }
    std::string phase() const;

private:
    void begin_round(std::uint32_t r, Actions& acts);
    void try_emit_round1(std::uint32_t r, Actions& acts);
    RingElem round1_value(std::uint32_t r, std::uint32_t w) const;

    std::uint32_t id_;
    const ProtocolConfig& pc_;
    Rng base_;
    Rng data_root_;
    const Dataset* data_;
    std::span<const std::uint32_t> train_idx_;
    Transcript* tr_;
    const Weights* fixed_weights_;

    DhKeyPair dh_;
    Digest32 mask_key_{};  // source of the s_{i,j} masks, local to this party
    std::map<std::uint32_t, SharedKey> keys_;

    Weights w_start_;  // global model the round's training starts from
    Weights w_local_;  // locally trained weights of the current round

    std::uint32_t round_ = 0;
    bool trained_ = false;
    bool noise_ready_ = false;
    bool emitted_ = false;
    bool finished_ = false;
    std::vector<RingElem> noise_add_;  // sum of chosen received noises, per weight
    std::vector<RingElem> s_sub_;      // sum of own s masks, per weight
    std::vector<RingElem> nonobl_;     // encoded local Laplace share, per weight
};

// The aggregation server: relays setup keys, stages and permutes noise pairs,
// and runs Round 2 per weight once all masked values are present.
class Server {
public:
    Server(const ProtocolConfig& pc, Rng proto_base, Transcript* transcript);

    Actions handle(const Message& m);

    const std::vector<std::vector<double>>& global_history() const { return w_history_; }
    std::string phase() const;

private:
    const ProtocolConfig& pc_;
    Rng base_;
    Transcript* tr_;

    int pubs_seen_ = 0;
    struct RoundStage {
        std::vector<std::vector<RingPair>> staged;  // per sender, receiver-major x weight
        int noise_seen = 0;
        std::vector<RingElem> y_sum;
        int y_seen = 0;
    };
    std::map<std::uint32_t, RoundStage> rounds_;
    std::vector<std::vector<double>> w_history_;
};

}  // namespace ppfl
