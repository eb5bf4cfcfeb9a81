#include <doctest.h>

#include <set>
#include <vector>

#include "ppfl/keyexchange.hpp"
#include "test_util.hpp"

using namespace ppfl;

TEST_SUITE("keyexchange") {

TEST_CASE("toy group modular exponentiation") {
    // 5^6 mod 23 = 8 and 5^15 mod 23 = 19, by brute force
    const DhParams toy = DhParams::named("toy23");
    mpz_class pub;
    mpz_class e6 = 6, e15 = 15;
    mpz_powm(pub.get_mpz_t(), toy.generator.get_mpz_t(), e6.get_mpz_t(), toy.prime.get_mpz_t());
    CHECK(pub == 8);
    mpz_powm(pub.get_mpz_t(), toy.generator.get_mpz_t(), e15.get_mpz_t(), toy.prime.get_mpz_t());
    CHECK(pub == 19);
}

TEST_CASE("toy group shared secret agrees on both sides") {
    const DhParams toy = DhParams::named("toy23");
    // private 6 against public 19, private 15 against public 8: raw element 2
    const SharedKey a = dh_shared(6, 19, toy);
    const SharedKey b = dh_shared(15, 8, toy);
    CHECK(a == b);
    const auto two = dh_serialize(2, toy);
    SharedKey expect;
    expect.key = sha256(std::span<const std::uint8_t>(two));
    CHECK(a == expect);
}

TEST_CASE("keygen resamples degenerate exponents and stays in range") {
    const DhParams toy = DhParams::named("toy23");
    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        const DhKeyPair kp = dh_keygen(toy, rng);
        CHECK(kp.priv >= 2);
        CHECK(kp.priv <= toy.subgroup_order - 2);
    }
}

TEST_CASE("default group key agreement matches bit-exactly") {
    const DhParams dh = DhParams::named("modp2048");
    Rng ra(1), rb(2);
    const DhKeyPair a = dh_keygen(dh, ra);
    const DhKeyPair b = dh_keygen(dh, rb);
    CHECK(dh_shared(a.priv, b.pub, dh) == dh_shared(b.priv, a.pub, dh));
}

TEST_CASE("small-subgroup guards") {
    const DhParams dh = DhParams::named("modp2048");
    CHECK_THROWS_AS(dh_shared(5, 0, dh), std::invalid_argument);
    CHECK_THROWS_AS(dh_shared(5, 1, dh), std::invalid_argument);
    CHECK_THROWS_AS(dh_shared(5, dh.prime - 1, dh), std::invalid_argument);
    CHECK_THROWS_AS(dh_shared(5, dh.prime + 3, dh), std::invalid_argument);
}

TEST_CASE("parameter sanity checks") {
    DhParams p = DhParams::named("toy23");
    p.generator = 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = DhParams::named("toy23");
    p.generator = p.prime - 1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    CHECK_THROWS_AS(DhParams::named("nope"), std::invalid_argument);
}

TEST_CASE("serialization round-trips fixed width") {
    const DhParams dh = DhParams::named("modp2048");
    Rng rng(3);
    const DhKeyPair kp = dh_keygen(dh, rng);
    const auto bytes = dh_serialize(kp.pub, dh);
    CHECK(bytes.size() == 256);
    CHECK(dh_deserialize(bytes) == kp.pub);
}

TEST_CASE("derive_mask is deterministic and label-separated") {
    SharedKey k;
    k.key = sha256(std::string("key"));
    const MaskLabel l0 = MaskLabel::pairwise_r(0, 7, 3, 9);
    CHECK(derive_mask(k, l0) == derive_mask(k, l0));
    const MaskLabel l1 = MaskLabel::pairwise_r(1, 7, 3, 9);
    CHECK(derive_mask(k, l0).v != derive_mask(k, l1).v);
    const MaskLabel l2 = MaskLabel::pairwise_r(0, 8, 3, 9);
    CHECK(derive_mask(k, l0).v != derive_mask(k, l2).v);
    // unordered pair canonicalization: both endpoints derive the same mask
    CHECK(derive_mask(k, MaskLabel::pairwise_r(0, 7, 9, 3)) == derive_mask(k, l0));
    // ordered pair for s masks: direction matters
    CHECK(derive_mask(k, MaskLabel::noise_s(0, 7, 3, 9)).v !=
          derive_mask(k, MaskLabel::noise_s(0, 7, 9, 3)).v);
}

TEST_CASE("mask stream passes byte uniformity at 1e5 draws") {
    SharedKey k;
    k.key = sha256(std::string("uniformity"));
    std::vector<std::uint64_t> vals;
    vals.reserve(100000);
    for (std::uint32_t i = 0; i < 100000; ++i)
        vals.push_back(derive_mask(k, MaskLabel::pairwise_r(i, i % 105, 0, 1)).v);
    CHECK(test::byte_chi2(vals) < test::kChi2Df255P999);
}

TEST_CASE("no mask repeats across rounds and weights") {
    SharedKey k;
    k.key = sha256(std::string("fresh"));
    std::set<std::uint64_t> seen;
    for (std::uint32_t r = 0; r < 20; ++r)
        for (std::uint32_t w = 0; w < 105; ++w)
            CHECK(seen.insert(derive_mask(k, MaskLabel::pairwise_r(r, w, 1, 2)).v).second);
}

}  // TEST_SUITE
