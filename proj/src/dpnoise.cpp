#include "ppfl/dpnoise.hpp"

#include <cmath>
#include <stdexcept>

namespace ppfl {

void DpParams::validate() const {
    if (epsilon <= 0) throw std::domain_error("dp: epsilon must be > 0");
    if (reg_alpha <= 0) throw std::domain_error("dp: reg_alpha must be > 0");
    // n_parties >= 2 is a protocol-level requirement; the scale formula and
    // share sampling are well defined from n = 1 up.
    if (n_parties < 1) throw std::domain_error("dp: n_parties must be >= 1");
    if (k_min < 1) throw std::domain_error("dp: k_min must be >= 1");
}

double laplace_scale(const DpParams& p) {
    p.validate();
    return 2.0 / (static_cast<double>(p.n_parties) * static_cast<double>(p.k_min) *
                  p.reg_alpha * p.epsilon);
}

namespace {

// Marsaglia-Tsang squeeze for shape >= 1, unit scale.
double gamma_ge1(double shape, Rng& rng) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.unit();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

}  // namespace

double sample_gamma(double shape, double scale, Rng& rng) {
    if (shape <= 0 || scale <= 0) throw std::domain_error("gamma: shape and scale must be > 0");
    if (shape >= 1.0) return scale * gamma_ge1(shape, rng);
    // shape < 1: Gamma(a) = Gamma(a+1) * U^(1/a)
    const double g = gamma_ge1(shape + 1.0, rng);
    const double u = rng.unit();
    return scale * g * std::pow(u, 1.0 / shape);
}

double local_laplace_share(double scale, int n, Rng& rng) {
    if (scale <= 0 || n < 1) throw std::domain_error("laplace share: bad parameters");
    const double shape = 1.0 / static_cast<double>(n);
    return sample_gamma(shape, scale, rng) - sample_gamma(shape, scale, rng);
}

double laplace_cdf(double x, double scale) {
    if (x < 0) return 0.5 * std::exp(x / scale);
    return 1.0 - 0.5 * std::exp(-x / scale);
}

std::vector<NoisePair> make_noise_pairs(std::uint32_t sender,
                                        std::span<const std::uint32_t> receivers, double scale,
                                        int n_parties, const Digest32& mask_key, Rng& rng,
                                        std::uint32_t round, std::uint32_t weight,
                                        const FixedPointParams& fp,
                                        std::vector<NoiseCleartext>* log, bool zero_noise) {
    if (scale <= 0) throw std::domain_error("noise pairs: scale must be > 0");
    const double shape = 1.0 / static_cast<double>(n_parties);
    std::vector<NoisePair> out;
    out.reserve(receivers.size());
    for (const std::uint32_t recv : receivers) {
        if (recv == sender) throw std::invalid_argument("noise pairs: sender in receiver set");
        double d0 = 0.0, d1 = 0.0;
        if (!zero_noise) {
            d0 = sample_gamma(shape, scale, rng) - sample_gamma(shape, scale, rng);
            d1 = sample_gamma(shape, scale, rng) - sample_gamma(shape, scale, rng);
        }
        const RingElem s = derive_mask(mask_key, MaskLabel::noise_s(round, weight, sender, recv));
        NoisePair p;
        p.sender = sender;
        p.receiver = recv;
        p.eta0 = s + encode(d0, fp);
        p.eta1 = s + encode(d1, fp);
        out.push_back(p);
        if (log) log->push_back(NoiseCleartext{recv, d0, d1, s});
    }
    return out;
}

}  // namespace ppfl
