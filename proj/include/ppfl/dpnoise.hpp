#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ppfl/keyexchange.hpp"
#include "ppfl/ring.hpp"
#include "ppfl/rng.hpp"

namespace ppfl {

struct DpParams {
    double epsilon = 5e-4;   // privacy loss
    double reg_alpha = 1.0;  // L2 regularization constant of the trained loss
    int n_parties = 2;
    int k_min = 1;  // size of the smallest local dataset

    void validate() const;
};

// 2 / (n * k * alpha * epsilon), the Laplace scale for the 1-Lipschitz
// regularized-regression sensitivity bound.
double laplace_scale(const DpParams& params);

// One draw from Gamma(shape, scale). Marsaglia-Tsang for shape >= 1; for
// shape < 1 the usual boost Gamma(shape+1) * U^(1/shape) is exact.
double sample_gamma(double shape, double scale, Rng& rng);

// Gamma(1/n, scale) - Gamma(1/n, scale): one additive share of Laplace(scale).
// Summing n independent shares gives exactly Laplace(scale).
double local_laplace_share(double scale, int n, Rng& rng);

// Laplace(scale) CDF, for distribution tests.
double laplace_cdf(double x, double scale);

// Masked noise pair bound for one (sender, receiver, weight) triple:
//   eta_b = s + encode(gamma_b - gamma_bar_b),  b in {0, 1}
// with s a sender-local ring mask. The ring difference eta0 - eta1 reveals
// only the difference of the two cleartext gamma-differences, never s.
struct NoisePair {
    RingElem eta0{};
    RingElem eta1{};
    std::uint32_t sender = 0;
    std::uint32_t receiver = 0;
};

// Cleartext view of one pair, captured only in transcripts/tests.
struct NoiseCleartext {
    std::uint32_t receiver = 0;
    double d0 = 0.0;  // gamma0 - gamma_bar0
    double d1 = 0.0;  // gamma1 - gamma_bar1
    RingElem s{};
};

// Per-receiver bit choices; sampled fresh per weight per round, never sent.
struct NoiseChoice {
    std::vector<bool> bits;
};

// For each receiver draws four Gamma(1/n, scale) variates, derives the s mask
// from `mask_key` under the (NoiseS, round, weight, sender->receiver) label,
// and returns both masked noises. `zero_noise` is the degenerate test hook
// (gammas forced to 0). Cleartext values are appended to `log` when given.
std::vector<NoisePair> make_noise_pairs(std::uint32_t sender,
                                        std::span<const std::uint32_t> receivers, double scale,
                                        int n_parties, const Digest32& mask_key, Rng& rng,
                                        std::uint32_t round, std::uint32_t weight,
                                        const FixedPointParams& fp,
                                        std::vector<NoiseCleartext>* log = nullptr,
                                        bool zero_noise = false);

}  // namespace ppfl
