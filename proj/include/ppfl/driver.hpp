#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ppfl/analysis.hpp"
#include "ppfl/config.hpp"
#include "ppfl/dataset.hpp"
#include "ppfl/protocol.hpp"
#include "ppfl/simnet.hpp"

namespace ppfl {

struct RunResult {
    std::vector<std::vector<double>> global_history;  // broadcast W per round
    Weights final_weights;
    std::vector<double> mcc_per_round;
    std::vector<double> mse_per_round;
    TimingReport timing;
    SimStats stats;
    std::unique_ptr<Transcript> transcript;
    std::string config_digest;
    std::uint64_t final_time_ns = 0;
};

Dataset load_dataset(const ExperimentConfig& cfg);

// Executes the full federated run (Setup once, then per-round local training
// and one WeightedAverage instance per weight) inside the deterministic
// event simulator. `fixed_client_weights`, when given, replaces training with
// constant injected weights (measurement harness; no dataset needed).
RunResult run_simulation(const ExperimentConfig& cfg, const Dataset* dataset = nullptr,
                         const std::vector<Weights>* fixed_client_weights = nullptr);

// Convenience: load the configured dataset, then run_simulation.
RunResult run_federated(const ExperimentConfig& cfg);

struct AttackRun {
    std::map<std::string, AttackResult> results;  // by scenario name
    std::unique_ptr<Transcript> oblivious_transcript;
    std::unique_ptr<Transcript> non_oblivious_transcript;
};

// Runs the transcript-captured federated executions the configured scenarios
// need (one non-oblivious run, one oblivious run) and applies the n-1
// collusion attack per scenario.
AttackRun run_attack(const ExperimentConfig& cfg, const Dataset* dataset = nullptr);

}  // namespace ppfl
