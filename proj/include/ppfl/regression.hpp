#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ppfl/dataset.hpp"

namespace ppfl {

using Weights = std::vector<double>;

struct TrainConfig {
    double learning_rate = 0.01;
    int iterations = 50;
    double reg_alpha = 1.0;  // L2 coefficient; also feeds the DP scale

    void validate() const;
};

// Regularized logistic loss and gradient over the selected rows:
//   loss = (1/t) sum log(1 + exp(-y w.x)) + (reg/2) |w|^2
// softplus/log1p formulation, stable for |w.x| up to ~1e3.
std::pair<double, Weights> loss_and_gradient(const Weights& w, const Dataset& ds,
                                             std::span<const std::uint32_t> rows,
                                             double reg_alpha);

// Exactly cfg.iterations full-batch gradient steps from w0. Throws on
// non-finite weights (divergence).
Weights local_train(const Dataset& ds, std::span<const std::uint32_t> rows, const Weights& w0,
                    const TrainConfig& cfg);

double dot_row(const Weights& w, const Dataset& ds, std::size_t row);

// sign(w.x) with sign(0) -> +1.
std::vector<std::int8_t> predict(const Weights& w, const Dataset& ds,
                                 std::span<const std::uint32_t> rows);

}  // namespace ppfl
