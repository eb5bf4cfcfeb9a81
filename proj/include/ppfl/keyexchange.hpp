#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "ppfl/crypto.hpp"
#include "ppfl/ring.hpp"
#include "ppfl/rng.hpp"

namespace ppfl {

// Diffie-Hellman group. Named groups:
//   "modp2048" — the 2048-bit safe-prime MODP group (generator 2), default.
//   "toy23"    — (p=23, g=5), test-only; tiny and insecure by construction.
struct DhParams {
    mpz_class prime;
    mpz_class generator;
    mpz_class subgroup_order;  // order of <generator>
    int private_bits = 256;
    std::string name;

    static DhParams named(const std::string& name);
    void validate() const;
};

struct DhKeyPair {
    mpz_class priv;
    mpz_class pub;
};

struct SharedKey {
    Digest32 key{};
    friend bool operator==(const SharedKey&, const SharedKey&) = default;
};

// public = g^priv mod p, priv uniform in [2, min(2^private_bits, order) - 2]
// (degenerate exponents 0 and 1 are resampled).
DhKeyPair dh_keygen(const DhParams& params, Rng& rng);

// hash of the fixed-width encoding of peer_pub^priv mod p; symmetric in the
// pair. Rejects peer values in {0, 1, p-1} and out-of-range inputs.
SharedKey dh_shared(const mpz_class& priv, const mpz_class& peer_pub, const DhParams& params);

// Fixed-width big-endian encoding, sized to the group prime.
std::vector<std::uint8_t> dh_serialize(const mpz_class& element, const DhParams& params);
mpz_class dh_deserialize(const std::vector<std::uint8_t>& bytes);

enum class MaskKind : std::uint8_t {
    PairwiseR = 1,  // pairwise cancelling masks, unordered pair
    NoiseS = 2,     // sender-local masks embedded in noise pairs, ordered pair
};

// (kind, round, weight_index, pair) uniquely identifies one ring mask.
struct MaskLabel {
    MaskKind kind;
    std::uint32_t round = 0;
    std::uint32_t weight = 0;
    std::uint32_t first = 0;
    std::uint32_t second = 0;

    static MaskLabel pairwise_r(std::uint32_t round, std::uint32_t weight, std::uint32_t i,
                                std::uint32_t j) {
        if (i > j) std::swap(i, j);  // canonical: smaller id first
        return {MaskKind::PairwiseR, round, weight, i, j};
    }
    static MaskLabel noise_s(std::uint32_t round, std::uint32_t weight, std::uint32_t sender,
                             std::uint32_t receiver) {
        return {MaskKind::NoiseS, round, weight, sender, receiver};
    }
};

// Deterministic label-indexed PRF of the key; uniform on the ring.
RingElem derive_mask(const SharedKey& key, const MaskLabel& label);
RingElem derive_mask(const Digest32& key, const MaskLabel& label);

}  // namespace ppfl
