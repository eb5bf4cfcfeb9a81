#include "ppfl/regression.hpp"

#include <cmath>
#include <stdexcept>

namespace ppfl {

void TrainConfig::validate() const {
    if (learning_rate <= 0) throw std::invalid_argument("train: learning_rate must be > 0");
    if (iterations < 1) throw std::invalid_argument("train: iterations must be >= 1");
    if (reg_alpha < 0) throw std::invalid_argument("train: reg_alpha must be >= 0");
}

namespace {

inline double softplus(double t) {
    return t > 0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

// sigma(-z) = 1 / (1 + e^z)
inline double sigmoid_neg(double z) {
    if (z > 0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

}  // namespace

double dot_row(const Weights& w, const Dataset& ds, std::size_t row) {
    const double* x = ds.row(row);
    double acc = 0;
    for (std::size_t c = 0; c < ds.cols; ++c) acc += w[c] * x[c];
    return acc;
}

std::pair<double, Weights> loss_and_gradient(const Weights& w, const Dataset& ds,
                                             std::span<const std::uint32_t> rows,
                                             double reg_alpha) {
    if (w.size() != ds.cols) throw std::invalid_argument("loss: weight/feature dimension mismatch");
    const double t = static_cast<double>(rows.size());
    double loss = 0;
    Weights grad(w.size(), 0.0);
    for (const std::uint32_t r : rows) {
        const double* x = ds.row(r);
        const double y = static_cast<double>(ds.labels[r]);
        double z = 0;
        for (std::size_t c = 0; c < ds.cols; ++c) z += w[c] * x[c];
        z *= y;
        loss += softplus(-z);
        const double coef = -y * sigmoid_neg(z);
        for (std::size_t c = 0; c < ds.cols; ++c) grad[c] += coef * x[c];
    }
    loss /= t;
    double norm2 = 0;
    for (std::size_t c = 0; c < w.size(); ++c) {
        grad[c] = grad[c] / t + reg_alpha * w[c];
        norm2 += w[c] * w[c];
    }
    loss += 0.5 * reg_alpha * norm2;
    return {loss, std::move(grad)};
}

Weights local_train(const Dataset& ds, std::span<const std::uint32_t> rows, const Weights& w0,
                    const TrainConfig& cfg) {
    cfg.validate();
    if (w0.size() != ds.cols)
        throw std::invalid_argument("train: weight/feature dimension mismatch");
    Weights w = w0;
    for (int it = 0; it < cfg.iterations; ++it) {
        const auto [loss, grad] = loss_and_gradient(w, ds, rows, cfg.reg_alpha);
        (void)loss;
        for (std::size_t c = 0; c < w.size(); ++c) {
            w[c] -= cfg.learning_rate * grad[c];
            if (!std::isfinite(w[c])) throw std::runtime_error("train: weights diverged");
        }
    }
    return w;
}

std::vector<std::int8_t> predict(const Weights& w, const Dataset& ds,
                                 std::span<const std::uint32_t> rows) {
    if (w.size() != ds.cols)
        throw std::invalid_argument("predict: weight/feature dimension mismatch");
    std::vector<std::int8_t> out;
    out.reserve(rows.size());
    for (const std::uint32_t r : rows) out.push_back(dot_row(w, ds, r) >= 0 ? 1 : -1);
    return out;
}

}  // namespace ppfl
