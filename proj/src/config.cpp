#include "ppfl/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ppfl/crypto.hpp"

namespace ppfl {

using nlohmann::json;

std::string mode_name(Mode m) {
    switch (m) {
        case Mode::Plain: return "plain";
        case Mode::NonOblivious: return "non_oblivious";
        case Mode::Oblivious: return "oblivious";
    }
    return "?";
}

Mode mode_from_name(const std::string& s) {
    if (s == "plain") return Mode::Plain;
    if (s == "non_oblivious") return Mode::NonOblivious;
    if (s == "oblivious") return Mode::Oblivious;
    throw std::invalid_argument("unknown mode: " + s);
}

std::map<std::string, LatencyProfile> ExperimentConfig::default_latency_profiles() {
    return {
        {"metro", {200'000, 5'000'000, 500'000}},
        {"transatlantic", {35'000'000, 45'000'000, 5'000'000}},
        {"global", {20'000'000, 150'000'000, 20'000'000}},
    };
}

void ExperimentConfig::validate() const {
    if (n_clients < 2) throw std::invalid_argument("config: n_clients must be >= 2");
    if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
    if (local_iterations < 1) throw std::invalid_argument("config: local_iterations must be >= 1");
    if (epsilon <= 0) throw std::invalid_argument("config: epsilon must be > 0");
    if (reg_alpha <= 0) throw std::invalid_argument("config: reg_alpha must be > 0");
    if (learning_rate <= 0) throw std::invalid_argument("config: learning_rate must be > 0");
    if (local_size < 1) throw std::invalid_argument("config: local_size must be >= 1");
    if (test_fraction < 0 || test_fraction >= 1)
        throw std::invalid_argument("config: test_fraction must be in [0, 1)");
    fixed_point.validate();
    if (!latency_profiles.count(latency_profile))
        throw std::invalid_argument("config: unknown latency profile " + latency_profile);
    if (capture != "off" && capture != "hash" && capture != "attack" && capture != "full")
        throw std::invalid_argument("config: bad capture mode " + capture);
    (void)mode_name(mode);
}

namespace {

template <class T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void from_json_overlay(const json& j, ExperimentConfig& c) {
    get_if(j, "n_clients", c.n_clients);
    get_if(j, "rounds", c.rounds);
    get_if(j, "local_iterations", c.local_iterations);
    get_if(j, "epsilon", c.epsilon);
    get_if(j, "reg_alpha", c.reg_alpha);
    get_if(j, "learning_rate", c.learning_rate);
    get_if(j, "local_size", c.local_size);
    get_if(j, "test_fraction", c.test_fraction);
    if (j.contains("mode")) c.mode = mode_from_name(j.at("mode").get<std::string>());
    get_if(j, "latency_profile", c.latency_profile);
    get_if(j, "dh_group", c.dh_group);
    get_if(j, "output_dir", c.output_dir);
    get_if(j, "threads", c.threads);
    get_if(j, "capture", c.capture);
    get_if(j, "zero_noise", c.zero_noise);
    if (j.contains("seeds")) {
        const json& s = j.at("seeds");
        get_if(s, "data", c.seeds.data);
        get_if(s, "protocol", c.seeds.protocol);
        get_if(s, "network", c.seeds.network);
    }
    if (j.contains("fixed_point")) {
        const json& s = j.at("fixed_point");
        get_if(s, "frac_bits", c.fixed_point.frac_bits);
        get_if(s, "int_bits", c.fixed_point.int_bits);
    }
    if (j.contains("dataset")) {
        const json& s = j.at("dataset");
        get_if(s, "kind", c.dataset.kind);
        get_if(s, "path", c.dataset.path);
        get_if(s, "synthetic_rows", c.dataset.synthetic_rows);
        get_if(s, "synthetic_features", c.dataset.synthetic_features);
        get_if(s, "label_noise", c.dataset.label_noise);
    }
    if (j.contains("cost_model")) {
        const json& s = j.at("cost_model");
        get_if(s, "kind", c.cost_model.kind);
        get_if(s, "dh_keygen_ns", c.cost_model.dh_keygen_ns);
        get_if(s, "dh_shared_ns", c.cost_model.dh_shared_ns);
        get_if(s, "mask_derive_ns", c.cost_model.mask_derive_ns);
        get_if(s, "noise_pair_ns", c.cost_model.noise_pair_ns);
        get_if(s, "laplace_share_ns", c.cost_model.laplace_share_ns);
        get_if(s, "train_example_iter_ns", c.cost_model.train_example_iter_ns);
        get_if(s, "server_add_ns", c.cost_model.server_add_ns);
        get_if(s, "server_forward_pair_ns", c.cost_model.server_forward_pair_ns);
        get_if(s, "server_relay_ns", c.cost_model.server_relay_ns);
    }
    if (j.contains("attack")) {
        const json& s = j.at("attack");
        get_if(s, "iterations", c.attack.iterations);
        get_if(s, "honest", c.attack.honest);
        get_if(s, "tracked_weight", c.attack.tracked_weight);
        get_if(s, "scenarios", c.attack.scenarios);
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        get_if(s, "epsilons", c.sweep.epsilons);
        get_if(s, "client_counts", c.sweep.client_counts);
    }
    if (j.contains("latency_profiles")) {
        for (const auto& [name, p] : j.at("latency_profiles").items()) {
            LatencyProfile lp;
            get_if(p, "base_min_ns", lp.base_min_ns);
            get_if(p, "base_max_ns", lp.base_max_ns);
            get_if(p, "jitter_max_ns", lp.jitter_max_ns);
            c.latency_profiles[name] = lp;
        }
    }
}

json to_json_full(const ExperimentConfig& c) {
    json j;
    j["n_clients"] = c.n_clients;
    j["rounds"] = c.rounds;
    j["local_iterations"] = c.local_iterations;
    j["epsilon"] = c.epsilon;
    j["reg_alpha"] = c.reg_alpha;
    j["learning_rate"] = c.learning_rate;
    j["local_size"] = c.local_size;
    j["test_fraction"] = c.test_fraction;
    j["mode"] = mode_name(c.mode);
    j["latency_profile"] = c.latency_profile;
    j["dh_group"] = c.dh_group;
    j["output_dir"] = c.output_dir;
    j["threads"] = c.threads;
    j["capture"] = c.capture;
    j["zero_noise"] = c.zero_noise;
    j["seeds"] = {{"data", c.seeds.data}, {"protocol", c.seeds.protocol}, {"network", c.seeds.network}};
    j["fixed_point"] = {{"frac_bits", c.fixed_point.frac_bits}, {"int_bits", c.fixed_point.int_bits}};
    j["dataset"] = {{"kind", c.dataset.kind},
                    {"path", c.dataset.path},
                    {"synthetic_rows", c.dataset.synthetic_rows},
                    {"synthetic_features", c.dataset.synthetic_features},
                    {"label_noise", c.dataset.label_noise}};
    j["cost_model"] = {{"kind", c.cost_model.kind},
                       {"dh_keygen_ns", c.cost_model.dh_keygen_ns},
                       {"dh_shared_ns", c.cost_model.dh_shared_ns},
                       {"mask_derive_ns", c.cost_model.mask_derive_ns},
                       {"noise_pair_ns", c.cost_model.noise_pair_ns},
                       {"laplace_share_ns", c.cost_model.laplace_share_ns},
                       {"train_example_iter_ns", c.cost_model.train_example_iter_ns},
                       {"server_add_ns", c.cost_model.server_add_ns},
                       {"server_forward_pair_ns", c.cost_model.server_forward_pair_ns},
                       {"server_relay_ns", c.cost_model.server_relay_ns}};
    j["attack"] = {{"iterations", c.attack.iterations},
                   {"honest", c.attack.honest},
                   {"tracked_weight", c.attack.tracked_weight},
                   {"scenarios", c.attack.scenarios}};
    j["sweep"] = {{"epsilons", c.sweep.epsilons}, {"client_counts", c.sweep.client_counts}};
    json profiles;
    for (const auto& [name, p] : c.latency_profiles)
        profiles[name] = {{"base_min_ns", p.base_min_ns},
                          {"base_max_ns", p.base_max_ns},
                          {"jitter_max_ns", p.jitter_max_ns}};
    j["latency_profiles"] = profiles;
    return j;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    ExperimentConfig c;
    from_json_overlay(j, c);
    c.validate();
    return c;
}

ExperimentConfig config_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string config_serialize(const ExperimentConfig& cfg) { return to_json_full(cfg).dump(2); }

std::string config_hash(const ExperimentConfig& cfg) {
    const Digest32 d = sha256(config_serialize(cfg));
    return hex(d).substr(0, 16);
}

}  // namespace ppfl
