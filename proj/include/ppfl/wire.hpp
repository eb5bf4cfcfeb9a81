#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ppfl/ring.hpp"

namespace ppfl {

constexpr std::uint32_t kServerId = 0xffffffffu;

enum class MsgKind : std::uint8_t {
    DhPubkey = 1,
    NoisePairs = 2,
    MaskedWeight = 3,
    GlobalWeight = 4,
};

struct RingPair {
    RingElem e0{};
    RingElem e1{};
};

// Event payloads. Logical NOISE_PAIRS / MASKED_WEIGHT / GLOBAL_WEIGHT records
// are batched per round into one delivery; logical message counts are kept by
// the engine (one NOISE_PAIRS record per pair, one MASKED_WEIGHT per weight).
struct EvBoot {};  // self-event: client starts Setup

struct EvDhPubkey {
    std::vector<std::uint8_t> pub;
};

// client -> server, one round: pairs for every (receiver, weight),
// receiver-major (ascending receiver id excluding sender), weight-minor.
struct EvNoiseToServer {
    std::vector<RingPair> pairs;
};

// server -> client, one round: shuffled pairs, weight-major; within a weight
// the (n-1) pairs are order-randomized and possibly swapped, anonymized.
struct EvNoiseForward {
    std::vector<RingPair> pairs;
};

// client -> server: all Round-1 masked weights of one round.
struct EvMaskedWeights {
    std::vector<RingElem> y;
};

// server -> client: all Round-2 averages of one round, as decoded reals.
struct EvGlobalWeights {
    std::vector<double> w;
};

using EventBody = std::variant<EvBoot, EvDhPubkey, EvNoiseToServer, EvNoiseForward,
                               EvMaskedWeights, EvGlobalWeights>;

struct Message {
    std::uint32_t sender = 0;
    std::uint32_t recipient = 0;
    std::uint32_t round = 0;
    EventBody body;

    MsgKind kind() const;
    // logical wire-record count represented by this delivery
    std::uint64_t logical_count() const;
};

// Length-prefixed little-endian serialization of the logical records in a
// message (ring elements as 64-bit LE, ids/indices 32-bit LE). Used for
// transcript hashing and the byte-identical replay checks.
void serialize_message(const Message& m, std::vector<std::uint8_t>& out);

}  // namespace ppfl
