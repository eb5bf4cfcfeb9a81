#include "ppfl/keyexchange.hpp"

#include <cstring>
#include <stdexcept>

namespace ppfl {

namespace {

// RFC 3526 group 14 (2048-bit MODP, generator 2).
const char* kModp2048Hex =
    "FFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD1"
    "29024E088A67CC74020BBEA63B139B22514A08798E3404DD"
    "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245"
    "E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7ED"
    "EE386BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3D"
    "C2007CB8A163BF0598DA48361C55D39A69163FA8FD24CF5F"
    "83655D23DCA3AD961C62F356208552BB9ED529077096966D"
    "670C354E4ABC9804F1746C08CA18217C32905E462E36CE3B"
    "E39E772C180E86039B2783A2EC07A28FB5C55DF06F4C52C9"
    "DE2BCBF6955817183995497CEA956AE515D2261898FA0510"
    "15728E5A8AACAA68FFFFFFFFFFFFFFFF";

mpz_class sample_bits(int bits, Rng& rng) {
    mpz_class x = 0;
    const int words = (bits + 63) / 64;
    for (int w = 0; w < words; ++w) {
        mpz_class limb = 0;
        const std::uint64_t r = rng.next_u64();
        mpz_import(limb.get_mpz_t(), 1, 1, sizeof(r), 0, 0, &r);
        x = (x << 64) | limb;
    }
    // trim to exactly `bits`
    mpz_class mask = (mpz_class(1) << bits) - 1;
    return x & mask;
}

}  // namespace

DhParams DhParams::named(const std::string& name) {
    DhParams p;
    p.name = name;
    if (name == "modp2048") {
        p.prime = mpz_class(kModp2048Hex, 16);
        p.generator = 2;
        p.subgroup_order = (p.prime - 1) / 2;  // safe prime; 2 generates the order-q subgroup
        p.private_bits = 256;
    } else if (name == "toy23") {
        p.prime = 23;
        p.generator = 5;  // primitive root mod 23
        p.subgroup_order = 22;
        p.private_bits = 5;
    } else {
        throw std::invalid_argument("unknown DH group: " + name);
    }
    return p;
}

void DhParams::validate() const {
    if (prime < 5 || mpz_odd_p(prime.get_mpz_t()) == 0)
        throw std::invalid_argument("DH: prime must be an odd number >= 5");
    if (generator <= 1 || generator >= prime - 1)
        throw std::invalid_argument("DH: generator not in (1, p-1)");
    if (subgroup_order < 2) throw std::invalid_argument("DH: bad subgroup order");
    if (private_bits < 2) throw std::invalid_argument("DH: private_bits too small");
}

DhKeyPair dh_keygen(const DhParams& params, Rng& rng) {
    params.validate();
    mpz_class bound = mpz_class(1) << params.private_bits;
    if (bound > params.subgroup_order) bound = params.subgroup_order;
    // uniform in [2, bound - 2]; degenerate draws resampled
    mpz_class priv;
    do {
        priv = sample_bits(params.private_bits, rng);
    } while (priv < 2 || priv > bound - 2);
    DhKeyPair kp;
    kp.priv = priv;
    mpz_powm(kp.pub.get_mpz_t(), params.generator.get_mpz_t(), priv.get_mpz_t(),
             params.prime.get_mpz_t());
    return kp;
}

SharedKey dh_shared(const mpz_class& priv, const mpz_class& peer_pub, const DhParams& params) {
    if (peer_pub <= 1 || peer_pub >= params.prime - 1)
        throw std::invalid_argument("DH: peer public element outside [2, p-2]");
    mpz_class shared;
    mpz_powm(shared.get_mpz_t(), peer_pub.get_mpz_t(), priv.get_mpz_t(),
             params.prime.get_mpz_t());
    const std::vector<std::uint8_t> bytes = dh_serialize(shared, params);
    SharedKey out;
    out.key = sha256(std::span<const std::uint8_t>(bytes));
    return out;
}

std::vector<std::uint8_t> dh_serialize(const mpz_class& element, const DhParams& params) {
    const std::size_t width = (mpz_sizeinbase(params.prime.get_mpz_t(), 2) + 7) / 8;
    std::vector<std::uint8_t> out(width, 0);
    std::size_t count = 0;
    std::vector<std::uint8_t> scratch(width, 0);
    mpz_export(scratch.data(), &count, 1, 1, 1, 0, element.get_mpz_t());
    if (count > width) throw std::invalid_argument("DH: element wider than group prime");
    std::memcpy(out.data() + (width - count), scratch.data(), count);
    return out;
}

mpz_class dh_deserialize(const std::vector<std::uint8_t>& bytes) {
    mpz_class x;
    mpz_import(x.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    return x;
}

namespace {

std::array<std::uint8_t, 17> label_bytes(const MaskLabel& label) {
    std::array<std::uint8_t, 17> b{};
    b[0] = static_cast<std::uint8_t>(label.kind);
    auto put32 = [&](std::size_t off, std::uint32_t v) {
        b[off] = static_cast<std::uint8_t>(v);
        b[off + 1] = static_cast<std::uint8_t>(v >> 8);
        b[off + 2] = static_cast<std::uint8_t>(v >> 16);
        b[off + 3] = static_cast<std::uint8_t>(v >> 24);
    };
    put32(1, label.round);
    put32(5, label.weight);
    put32(9, label.first);
    put32(13, label.second);
    return b;
}

}  // namespace

RingElem derive_mask(const Digest32& key, const MaskLabel& label) {
    const auto lb = label_bytes(label);
    return RingElem{prf_u64(key, std::span<const std::uint8_t>(lb))};
}

RingElem derive_mask(const SharedKey& key, const MaskLabel& label) {
    return derive_mask(key.key, label);
}

}  // namespace ppfl
