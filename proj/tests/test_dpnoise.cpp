#include <doctest.h>

#include <cmath>
#include <vector>

#include "ppfl/analysis.hpp"
#include "ppfl/dpnoise.hpp"
#include "test_util.hpp"

using namespace ppfl;

TEST_SUITE("dpnoise") {

TEST_CASE("laplace scale formula") {
    DpParams p;
    p.n_parties = 100;
    p.k_min = 200;
    p.reg_alpha = 0.01;
    p.epsilon = 5e-4;
    CHECK(laplace_scale(p) == doctest::Approx(20.0).epsilon(1e-12));

    DpParams unit;
    unit.n_parties = 1;
    unit.k_min = 1;
    unit.reg_alpha = 2;
    unit.epsilon = 1;
    CHECK(laplace_scale(unit) == doctest::Approx(1.0).epsilon(1e-12));

    DpParams half = p;
    half.epsilon = 2 * p.epsilon;
    CHECK(laplace_scale(half) == doctest::Approx(10.0).epsilon(1e-12));

    DpParams bad = p;
    bad.epsilon = 0;
    CHECK_THROWS_AS(laplace_scale(bad), std::domain_error);
}

TEST_CASE("gamma moments at shape 0.01 scale 20") {
    Rng rng(2024);
    const int n = 1000000;
    std::vector<double> xs(n);
    for (auto& x : xs) x = sample_gamma(0.01, 20.0, rng);
    // mean = shape*scale = 0.2, sd of the mean = sqrt(shape)*scale/sqrt(n)
    const double m = test::mean(xs);
    CHECK(std::abs(m - 0.2) < 3.0 * 0.1 * 20.0 / std::sqrt(static_cast<double>(n)));
    // var = shape*scale^2 = 4; heavy kurtosis (6/shape) widens the estimate
    const double v = test::sample_variance(xs);
    CHECK(std::abs(v - 4.0) < 0.4);
}

TEST_CASE("gamma rejects bad parameters") {
    Rng rng(1);
    CHECK_THROWS_AS(sample_gamma(0.0, 1.0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_gamma(1.0, -2.0, rng), std::domain_error);
}

TEST_CASE("sum of gamma differences matches the Laplace CDF") {
    // n parties' shares reconstruct Laplace(scale)
    Rng rng(5);
    const int n = 50;
    const double scale = 3.0;
    const int trials = 100000;
    std::vector<double> sums(trials);
    for (auto& s : sums) {
        double acc = 0;
        for (int i = 0; i < n; ++i) acc += local_laplace_share(scale, n, rng);
        s = acc;
    }
    const double d =
        ks_distance(sums, [scale](double x) { return laplace_cdf(x, scale); });
    CHECK(d < 0.02);
}

TEST_CASE("local share moments") {
    Rng rng(6);
    const int n = 100;
    const double scale = 5.0;
    const int trials = 1000000;
    std::vector<double> xs(trials);
    for (auto& x : xs) x = local_laplace_share(scale, n, rng);
    CHECK(std::abs(test::mean(xs)) < 0.01);
    // var = 2 * (1/n) * scale^2
    const double expect = 2.0 * scale * scale / n;
    CHECK(test::sample_variance(xs) == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("noise pairs: empty receivers") {
    Rng rng(7);
    Digest32 key = sha256(std::string("k"));
    FixedPointParams fp;
    CHECK(make_noise_pairs(0, {}, 1.0, 10, key, rng, 0, 0, fp).empty());
}

TEST_CASE("noise pairs: zero-noise hook degenerates to the mask") {
    Rng rng(8);
    Digest32 key = sha256(std::string("k"));
    FixedPointParams fp;
    const std::uint32_t recv[2] = {1, 2};
    const auto pairs =
        make_noise_pairs(0, recv, 1.0, 10, key, rng, 3, 4, fp, nullptr, /*zero_noise=*/true);
    REQUIRE(pairs.size() == 2);
    for (const NoisePair& p : pairs) {
        const RingElem s = derive_mask(key, MaskLabel::noise_s(3, 4, 0, p.receiver));
        CHECK(p.eta0 == s);
        CHECK(p.eta1 == s);
    }
}

TEST_CASE("noise pairs: ring difference reveals only the gamma difference") {
    Rng rng(9);
    Digest32 key = sha256(std::string("k2"));
    FixedPointParams fp;
    const std::uint32_t recv[3] = {1, 2, 5};
    std::vector<NoiseCleartext> log;
    const auto pairs = make_noise_pairs(0, recv, 2.0, 10, key, rng, 0, 0, fp, &log);
    REQUIRE(log.size() == 3);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const RingElem diff = pairs[i].eta0 - pairs[i].eta1;
        const RingElem expect = encode(log[i].d0, fp) - encode(log[i].d1, fp);
        CHECK(diff == expect);  // independent of s, exactly
    }
}

TEST_CASE("noise pairs reject sender in receiver set") {
    Rng rng(10);
    Digest32 key = sha256(std::string("k3"));
    FixedPointParams fp;
    const std::uint32_t recv[1] = {4};
    CHECK_THROWS_AS(make_noise_pairs(4, recv, 1.0, 10, key, rng, 0, 0, fp),
                    std::invalid_argument);
}

TEST_CASE("masked pair marginal is uniform on the ring") {
    // over random s (fresh labels), eta0 alone shows no structure
    Rng rng(11);
    Digest32 key = sha256(std::string("k4"));
    FixedPointParams fp;
    const std::uint32_t recv[1] = {1};
    std::vector<std::uint64_t> vals;
    vals.reserve(100000);
    for (std::uint32_t i = 0; i < 100000; ++i)
        vals.push_back(
            make_noise_pairs(0, recv, 2.0, 10, key, rng, i, 0, fp)[0].eta0.v);
    CHECK(test::byte_chi2(vals) < test::kChi2Df255P999);
}

}  // TEST_SUITE
