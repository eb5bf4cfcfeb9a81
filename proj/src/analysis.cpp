#include "ppfl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ppfl/rng.hpp"

namespace ppfl {

double mcc(std::span<const std::int8_t> predictions, std::span<const std::int8_t> labels) {
    if (predictions.size() != labels.size())
        throw std::invalid_argument("mcc: length mismatch");
    double tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool p = predictions[i] > 0;
        const bool a = labels[i] > 0;
        if (p && a)
            ++tp;
        else if (!p && !a)
            ++tn;
        else if (p && !a)
            ++fp;
        else
            ++fn;
    }
    const double denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom <= 0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(denom);
}

double brier_mse(const Weights& w, const Dataset& ds, std::span<const std::uint32_t> rows) {
    double acc = 0;
    for (const std::uint32_t r : rows) {
        const double z = dot_row(w, ds, r);
        const double p = 1.0 / (1.0 + std::exp(-z));
        const double y = ds.labels[r] > 0 ? 1.0 : 0.0;
        acc += (p - y) * (p - y);
    }
    return rows.empty() ? 0.0 : acc / static_cast<double>(rows.size());
}

ErrorStats error_function(double true_value, std::span<const double> perturbed) {
    if (perturbed.size() < 2) throw std::invalid_argument("error_function: need >= 2 samples");
    ErrorStats st;
    st.deltas.reserve(perturbed.size());
    const double denom = std::abs(true_value) + 1.0;
    double sum = 0;
    for (const double f_hat : perturbed) {
        const double d = std::abs(true_value - f_hat) / denom;
        st.deltas.push_back(d);
        sum += d;
    }
    st.mu = sum / static_cast<double>(st.deltas.size());
    double var = 0;
    for (const double d : st.deltas) var += (d - st.mu) * (d - st.mu);
    st.sigma = std::sqrt(var / static_cast<double>(st.deltas.size() - 1));
    return st;
}

R2 attack_r2(std::span<const double> estimates, std::span<const double> actuals) {
    R2 out;
    if (estimates.size() != actuals.size())
        throw std::invalid_argument("attack_r2: length mismatch");
    const std::size_t n = estimates.size();
    if (n < 3) return out;
    double me = 0, ma = 0;
    for (std::size_t i = 0; i < n; ++i) {
        me += estimates[i];
        ma += actuals[i];
    }
    me /= static_cast<double>(n);
    ma /= static_cast<double>(n);
    double see = 0, saa = 0, sea = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double de = estimates[i] - me;
        const double da = actuals[i] - ma;
        see += de * de;
        saa += da * da;
        sea += de * da;
    }
    if (see <= 0 || saa <= 0) return out;  // zero variance: undefined
    out.value = (sea * sea) / (see * saa);
    out.defined = true;
    return out;
}

std::string scenario_name(AttackScenario s) {
    switch (s) {
        case AttackScenario::NonOblivious: return "non_oblivious";
        case AttackScenario::Naive: return "naive";
        case AttackScenario::Random: return "random";
        case AttackScenario::Diff: return "diff";
        case AttackScenario::Mean: return "mean";
    }
    return "?";
}

AttackScenario scenario_from_name(const std::string& s) {
    if (s == "non_oblivious") return AttackScenario::NonOblivious;
    if (s == "naive") return AttackScenario::Naive;
    if (s == "random") return AttackScenario::Random;
    if (s == "diff") return AttackScenario::Diff;
    if (s == "mean") return AttackScenario::Mean;
    throw std::invalid_argument("unknown attack scenario: " + s);
}

namespace {

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] * (1 - frac) + v[hi] * frac;
}

}  // namespace

AttackResult collusion_attack(const Transcript& transcript, std::uint32_t honest,
                              AttackScenario scenario, std::uint64_t attacker_seed) {
    const bool want_nonobl = scenario == AttackScenario::NonOblivious;
    if (want_nonobl && transcript.run_mode != Mode::NonOblivious)
        throw std::invalid_argument("non-oblivious attack needs a non-oblivious transcript");
    if (!want_nonobl && transcript.run_mode != Mode::Oblivious)
        throw std::invalid_argument(scenario_name(scenario) +
                                    " attack needs an oblivious transcript");
    if (transcript.rounds.empty())
        throw std::invalid_argument("collusion_attack: transcript has no captured rounds");
    if (honest != transcript.honest)
        throw std::invalid_argument("collusion_attack: transcript captured a different honest party");

    const int n = transcript.n_clients;
    Rng guess(attacker_seed);
    AttackResult out;
    out.scenario = scenario;
    out.estimates.reserve(transcript.rounds.size());
    out.actuals.reserve(transcript.rounds.size());
    for (const AttackRoundView& v : transcript.rounds) {
        if (v.local_weights.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("collusion_attack: private logs missing from transcript");
        double w_coalition = 0;
        for (std::size_t c = 0; c < v.local_weights.size(); ++c)
            if (c != honest) w_coalition += v.local_weights[c];
        double correction = 0;
        for (std::size_t c = 0; c < v.local_weights.size(); ++c) {
            if (c == honest) continue;
            switch (scenario) {
                case AttackScenario::NonOblivious: correction += v.nonobl_shares[c]; break;
                case AttackScenario::Naive: break;
                case AttackScenario::Random:
                    correction += guess.coin() ? v.pair_d1[c] : v.pair_d0[c];
                    break;
                case AttackScenario::Diff: correction += v.pair_d0[c] - v.pair_d1[c]; break;
                case AttackScenario::Mean: correction += 0.5 * (v.pair_d0[c] + v.pair_d1[c]); break;
            }
        }
        const double estimate = static_cast<double>(n) * v.global - w_coalition - correction;
        out.estimates.push_back(estimate);
        out.actuals.push_back(v.local_weights[honest]);
    }

    const R2 r2 = attack_r2(out.estimates, out.actuals);
    out.r_squared = r2.value;
    out.r2_defined = r2.defined;

    std::vector<double> resid(out.estimates.size());
    double mean = 0;
    for (std::size_t i = 0; i < resid.size(); ++i) {
        resid[i] = out.estimates[i] - out.actuals[i];
        mean += resid[i];
    }
    mean /= static_cast<double>(resid.size());
    double var = 0;
    for (const double r : resid) var += (r - mean) * (r - mean);
    out.residual_mean = mean;
    out.residual_std =
        resid.size() > 1 ? std::sqrt(var / static_cast<double>(resid.size() - 1)) : 0.0;
    out.residual_q05 = quantile(resid, 0.05);
    out.residual_q50 = quantile(resid, 0.50);
    out.residual_q95 = quantile(resid, 0.95);
    return out;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks: no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

std::vector<DensityBin> density_histogram(std::span<const double> actuals,
                                          std::span<const double> estimates, int bins) {
    if (actuals.size() != estimates.size() || actuals.empty() || bins < 1)
        throw std::invalid_argument("density_histogram: bad input");
    auto [axmin, axmax] = std::minmax_element(actuals.begin(), actuals.end());
    auto [eymin, eymax] = std::minmax_element(estimates.begin(), estimates.end());
    const double x0 = *axmin, x1 = *axmax, y0 = *eymin, y1 = *eymax;
    const double dx = (x1 - x0) > 0 ? (x1 - x0) / bins : 1.0;
    const double dy = (y1 - y0) > 0 ? (y1 - y0) / bins : 1.0;
    std::vector<std::uint64_t> grid(static_cast<std::size_t>(bins) * bins, 0);
    for (std::size_t i = 0; i < actuals.size(); ++i) {
        int bx = static_cast<int>((actuals[i] - x0) / dx);
        int by = static_cast<int>((estimates[i] - y0) / dy);
        bx = std::clamp(bx, 0, bins - 1);
        by = std::clamp(by, 0, bins - 1);
        ++grid[static_cast<std::size_t>(by) * bins + bx];
    }
    std::vector<DensityBin> out;
    for (int by = 0; by < bins; ++by)
        for (int bx = 0; bx < bins; ++bx) {
            const std::uint64_t c = grid[static_cast<std::size_t>(by) * bins + bx];
            if (c == 0) continue;
            out.push_back(DensityBin{x0 + bx * dx, x0 + (bx + 1) * dx, y0 + by * dy,
                                     y0 + (by + 1) * dy, c});
        }
    return out;
}

}  // namespace ppfl
