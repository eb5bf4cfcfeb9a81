#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppfl/rng.hpp"

namespace ppfl {

// Row-major feature matrix with {-1,+1} labels. Feature rows are L2-normalized
// before the constant intercept column (always the last column) is appended.
struct Dataset {
    std::size_t rows = 0;
    std::size_t cols = 0;  // including intercept
    std::vector<double> features;
    std::vector<std::int8_t> labels;
    std::vector<std::string> feature_names;

    const double* row(std::size_t r) const { return features.data() + r * cols; }
    std::size_t positives() const;
};

// Adult census pipeline: drop rows with missing values, one-hot encode the 8
// categorical attributes (categories observed in the cleaned data, sorted),
// min-max scale the 6 continuous attributes to [0,1], L2-normalize every row,
// then append the intercept column. Accepts raw UCI formatting quirks
// (leading spaces, trailing '.' on test labels, '|' comment lines).
Dataset preprocess_adult(const std::vector<std::string>& csv_paths);
Dataset preprocess_adult(const std::string& csv_path);

// Binary snapshot of a preprocessed dataset. Returns the content hash (hex);
// the hash is embedded and re-verified on load.
std::string snapshot_save(const Dataset& ds, const std::string& path);
Dataset snapshot_load(const std::string& path);
std::string snapshot_hash(const Dataset& ds);

// Linearly-separable-ish synthetic binary task with unit-norm rows and an
// intercept column; stands in for real data in protocol-level tests.
Dataset make_synthetic(std::size_t rows, std::size_t features, std::uint64_t seed,
                       double label_noise = 0.05);

struct TrainTestSplit {
    std::vector<std::uint32_t> train_idx;
    std::vector<std::uint32_t> test_idx;
};

// Deterministic shuffle split; test size = round(rows * test_fraction).
TrainTestSplit split_dataset(const Dataset& ds, double test_fraction, Rng& rng);

// One round of local sampling: every client draws `local_size` distinct train
// rows (without replacement within a client, independently across clients).
// Client c's sample is sample_one(train_idx, local_size, rng.child(c)).
std::vector<std::vector<std::uint32_t>> sample_local(std::span<const std::uint32_t> train_idx,
                                                     int local_size, int n_clients, Rng& rng);
std::vector<std::uint32_t> sample_one(std::span<const std::uint32_t> train_idx, int local_size,
                                      Rng rng);

}  // namespace ppfl
