#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ppfl/dataset.hpp"
#include "ppfl/regression.hpp"
#include "ppfl/transcript.hpp"

namespace ppfl {

// Matthews correlation coefficient over {-1,+1} vectors. Degenerate marginals
// (any factor of the denominator zero) yield 0.
double mcc(std::span<const std::int8_t> predictions, std::span<const std::int8_t> labels);

// Out-of-sample mean squared error of the probability output against {0,1}.
double brier_mse(const Weights& w, const Dataset& ds, std::span<const std::uint32_t> rows);

// delta = |f - f_hat| / (|f| + 1); mu and sigma are the sample mean and
// standard deviation of delta.
struct ErrorStats {
    std::vector<double> deltas;
    double mu = 0;
    double sigma = 0;
};
ErrorStats error_function(double true_value, std::span<const double> perturbed);

// Squared Pearson correlation. Undefined (zero variance or < 3 samples) is
// reported as 0 with the flag cleared.
struct R2 {
    double value = 0;
    bool defined = false;
};
R2 attack_r2(std::span<const double> estimates, std::span<const double> actuals);

enum class AttackScenario { NonOblivious, Naive, Random, Diff, Mean };
std::string scenario_name(AttackScenario s);
AttackScenario scenario_from_name(const std::string& s);

struct AttackResult {
    AttackScenario scenario{};
    std::vector<double> estimates;
    std::vector<double> actuals;
    double r_squared = 0;
    bool r2_defined = false;
    // residual (estimate - actual) summary
    double residual_mean = 0;
    double residual_std = 0;
    double residual_q05 = 0, residual_q50 = 0, residual_q95 = 0;
};

// The n-1 collusion attack: every party except `honest` pools its private
// randomness with the public transcript. Per iteration the coalition computes
//   estimate = n*W - sum of its own weights - scenario noise correction
// and the result is scored against the honest party's actual weight.
AttackResult collusion_attack(const Transcript& transcript, std::uint32_t honest,
                              AttackScenario scenario, std::uint64_t attacker_seed = 0xa77ac);

// Kolmogorov-Smirnov distance between samples and an analytic CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

struct DensityBin {
    double x_lo, x_hi, y_lo, y_hi;
    std::uint64_t count;
};
std::vector<DensityBin> density_histogram(std::span<const double> actuals,
                                          std::span<const double> estimates, int bins);

}  // namespace ppfl
