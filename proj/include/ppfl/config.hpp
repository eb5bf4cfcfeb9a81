#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppfl/ring.hpp"

namespace ppfl {

enum class Mode { Plain, NonOblivious, Oblivious };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);

enum class CaptureMode { Off, Hash, Attack, Full };

struct SeedConfig {
    std::uint64_t data = 1;
    std::uint64_t protocol = 2;
    std::uint64_t network = 3;
};

struct DatasetConfig {
    std::string kind = "synthetic";  // synthetic | adult | snapshot
    std::string path;                // csv (adult) or snapshot file
    std::uint64_t synthetic_rows = 4000;
    std::uint64_t synthetic_features = 20;
    double label_noise = 0.05;
};

struct LatencyProfile {
    std::uint64_t base_min_ns = 200'000;
    std::uint64_t base_max_ns = 5'000'000;
    std::uint64_t jitter_max_ns = 500'000;
};

struct CostModelConfig {
    std::string kind = "synthetic";  // synthetic | calibrated
    // per-operation charges, nanoseconds
    std::uint64_t dh_keygen_ns = 400'000;
    std::uint64_t dh_shared_ns = 400'000;
    std::uint64_t mask_derive_ns = 500;
    std::uint64_t noise_pair_ns = 1'500;
    std::uint64_t laplace_share_ns = 300;
    std::uint64_t train_example_iter_ns = 800;
    std::uint64_t server_add_ns = 20;
    std::uint64_t server_forward_pair_ns = 100;
    std::uint64_t server_relay_ns = 200;
};

struct AttackConfig {
    int iterations = 3000;
    std::uint32_t honest = 0;           // attacked party
    std::uint32_t tracked_weight = 0;   // weight index under attack
    std::vector<std::string> scenarios = {"non_oblivious", "naive", "random", "diff", "mean"};
};

struct SweepConfig {
    std::vector<double> epsilons = {5e-4, 5e-5, 1e-5, 5e-6, 5e-7};
    std::vector<int> client_counts = {50, 100, 200, 500};
};

struct ExperimentConfig {
    int n_clients = 10;
    int rounds = 20;
    int local_iterations = 50;
    double epsilon = 5e-4;
    double reg_alpha = 1.0;
    double learning_rate = 0.05;
    int local_size = 200;
    double test_fraction = 0.25;
    Mode mode = Mode::Oblivious;
    std::string latency_profile = "metro";  // metro | transatlantic | global
    SeedConfig seeds;
    FixedPointParams fixed_point;
    std::string dh_group = "modp2048";
    std::string output_dir = "out";
    DatasetConfig dataset;
    CostModelConfig cost_model;
    AttackConfig attack;
    SweepConfig sweep;
    std::map<std::string, LatencyProfile> latency_profiles = default_latency_profiles();
    int threads = 0;          // 0 = OpenMP default, 1 = serial reference
    std::string capture = "off";  // off | hash | attack | full
    bool zero_noise = false;      // test hook: degenerate noise

    static std::map<std::string, LatencyProfile> default_latency_profiles();
    void validate() const;
};

// JSON round-trip. parse() starts from defaults and overlays present keys;
// serialize() emits the complete canonical form (sorted keys).
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_load(const std::string& path);
std::string config_serialize(const ExperimentConfig& cfg);
// sha256 over the canonical serialization; stamped into every output CSV.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace ppfl
