#include "ppfl/driver.hpp"

#include <stdexcept>

#include "ppfl/parallel.hpp"

namespace ppfl {

Dataset load_dataset(const ExperimentConfig& cfg) {
    const DatasetConfig& d = cfg.dataset;
    if (d.kind == "adult") {
        if (d.path.empty()) throw std::invalid_argument("dataset: adult needs a csv path");
        return preprocess_adult(d.path);
    }
    if (d.kind == "snapshot") {
        if (d.path.empty()) throw std::invalid_argument("dataset: snapshot needs a path");
        return snapshot_load(d.path);
    }
    if (d.kind == "synthetic") {
        return make_synthetic(d.synthetic_rows, d.synthetic_features,
                              Rng::mix(cfg.seeds.data, 0xda7a), d.label_noise);
    }
    throw std::invalid_argument("dataset: unknown kind " + d.kind);
}

namespace {

CaptureMode capture_from_string(const std::string& s) {
    if (s == "off") return CaptureMode::Off;
    if (s == "hash") return CaptureMode::Hash;
    if (s == "attack") return CaptureMode::Attack;
    if (s == "full") return CaptureMode::Full;
    throw std::invalid_argument("bad capture mode: " + s);
}

}  // namespace

RunResult run_simulation(const ExperimentConfig& cfg, const Dataset* dataset,
                         const std::vector<Weights>* fixed_client_weights) {
    cfg.validate();
    par::set_threads(cfg.threads);

    const int n = cfg.n_clients;
    std::uint32_t n_weights;
    if (fixed_client_weights) {
        if (fixed_client_weights->size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("fixed weights: need one vector per client");
        n_weights = static_cast<std::uint32_t>(fixed_client_weights->front().size());
    } else {
        if (!dataset) throw std::invalid_argument("run_simulation: no dataset");
        n_weights = static_cast<std::uint32_t>(dataset->cols);
    }

    DpParams dp;
    dp.epsilon = cfg.epsilon;
    dp.reg_alpha = cfg.reg_alpha;
    dp.n_parties = n;
    dp.k_min = cfg.local_size;

    ProtocolConfig pc;
    pc.n = n;
    pc.n_weights = n_weights;
    pc.mode = cfg.mode;
    pc.fp = cfg.fixed_point;
    pc.noise_scale = laplace_scale(dp);
    pc.rounds = cfg.rounds;
    pc.zero_noise = cfg.zero_noise;
    pc.dh = DhParams::named(cfg.dh_group);
    pc.train.learning_rate = cfg.learning_rate;
    pc.train.iterations = cfg.local_iterations;
    pc.train.reg_alpha = cfg.reg_alpha;
    pc.local_size = cfg.local_size;

    auto transcript = std::make_unique<Transcript>(capture_from_string(cfg.capture));
    transcript->honest = cfg.attack.honest;
    transcript->tracked_weight = cfg.attack.tracked_weight;
    transcript->n_weights_hint = n_weights;
    transcript->run_mode = cfg.mode;
    transcript->n_clients = n;
    transcript->noise_scale = pc.noise_scale;

    TrainTestSplit split;
    if (dataset && !fixed_client_weights) {
        Rng split_rng = Rng(cfg.seeds.data).child(1);
        split = split_dataset(*dataset, cfg.test_fraction, split_rng);
        if (static_cast<std::size_t>(cfg.local_size) > split.train_idx.size())
            throw std::invalid_argument("local_size exceeds the training partition");
    }

    CostTable costs;
    costs.c = cfg.cost_model.kind == "calibrated"
                  ? calibrate_cost_model(cfg.fixed_point, cfg.dh_group)
                  : cfg.cost_model;

    LatencyGraph graph = build_graph(cfg.latency_profiles.at(cfg.latency_profile),
                                     cfg.latency_profile, n, Rng::mix(cfg.seeds.network, 1));
    SimEngine engine(n, std::move(graph), costs, Rng(cfg.seeds.network).child(2),
                     transcript.get());

    Rng proto_root(cfg.seeds.protocol);
    Server server(pc, proto_root.child(kServerId), transcript.get());
    std::vector<Client> clients;
    clients.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Client::Init init;
        init.id = static_cast<std::uint32_t>(i);
        init.pc = &pc;
        init.proto_base = proto_root.child(static_cast<std::uint64_t>(i));
        init.data_root = Rng(cfg.seeds.data);
        init.data = dataset;
        init.train_idx = split.train_idx;
        init.transcript = transcript.get();
        init.fixed_weights =
            fixed_client_weights ? &(*fixed_client_weights)[static_cast<std::size_t>(i)] : nullptr;
        clients.emplace_back(std::move(init));
    }

    engine.register_party(kServerId, [&server](const Message& m) { return server.handle(m); });
    for (int i = 0; i < n; ++i) {
        Client* c = &clients[static_cast<std::size_t>(i)];
        engine.register_party(static_cast<std::uint32_t>(i),
                              [c](const Message& m) { return c->handle(m); });
    }
    engine.complete = [&clients] {
        for (const Client& c : clients)
            if (!c.finished()) return false;
        return true;
    };
    engine.incomplete_report = [&clients, &server] {
        std::string s = server.phase();
        for (const Client& c : clients)
            if (!c.finished()) {
                s += "; " + c.phase();
                break;
            }
        return s;
    };

    for (int i = 0; i < n; ++i) {
        Message boot;
        boot.sender = static_cast<std::uint32_t>(i);
        boot.recipient = static_cast<std::uint32_t>(i);
        boot.round = 0;
        boot.body = EvBoot{};
        engine.post(0, std::move(boot));
    }
    engine.run();

    RunResult out;
    out.global_history = server.global_history();
    if (out.global_history.size() != static_cast<std::size_t>(cfg.rounds))
        throw std::runtime_error("run_simulation: protocol did not complete every round");
    out.final_weights = out.global_history.back();
    out.timing = engine.timing();
    out.stats = engine.stats();
    out.final_time_ns = engine.stats().final_time_ns;
    out.config_digest = config_hash(cfg);

    if (dataset && !fixed_client_weights) {
        out.mcc_per_round.resize(static_cast<std::size_t>(cfg.rounds));
        out.mse_per_round.resize(static_cast<std::size_t>(cfg.rounds));
        std::vector<std::int8_t> test_labels;
        test_labels.reserve(split.test_idx.size());
        for (const std::uint32_t r : split.test_idx) test_labels.push_back(dataset->labels[r]);
        par::parallel_for(static_cast<std::size_t>(cfg.rounds), [&](std::size_t r) {
            const Weights& w = out.global_history[r];
            const auto preds = predict(w, *dataset, split.test_idx);
            out.mcc_per_round[r] = mcc(preds, test_labels);
            out.mse_per_round[r] = brier_mse(w, *dataset, split.test_idx);
        });
    }
    out.transcript = std::move(transcript);
    return out;
}

RunResult run_federated(const ExperimentConfig& cfg) {
    const Dataset ds = load_dataset(cfg);
    return run_simulation(cfg, &ds);
}

AttackRun run_attack(const ExperimentConfig& cfg, const Dataset* dataset) {
    AttackRun out;
    bool need_nonobl = false, need_obl = false;
    for (const std::string& s : cfg.attack.scenarios) {
        if (scenario_from_name(s) == AttackScenario::NonOblivious)
            need_nonobl = true;
        else
            need_obl = true;
    }
    Dataset local;
    if (!dataset) {
        local = load_dataset(cfg);
        dataset = &local;
    }
    ExperimentConfig base = cfg;
    base.rounds = cfg.attack.iterations;
    base.capture = "attack";

    if (need_nonobl) {
        ExperimentConfig c = base;
        c.mode = Mode::NonOblivious;
        RunResult r = run_simulation(c, dataset);
        out.non_oblivious_transcript = std::move(r.transcript);
    }
    if (need_obl) {
        ExperimentConfig c = base;
        c.mode = Mode::Oblivious;
        RunResult r = run_simulation(c, dataset);
        out.oblivious_transcript = std::move(r.transcript);
    }
    for (const std::string& s : cfg.attack.scenarios) {
        const AttackScenario sc = scenario_from_name(s);
        const Transcript* tr = sc == AttackScenario::NonOblivious
                                   ? out.non_oblivious_transcript.get()
                                   : out.oblivious_transcript.get();
        out.results[s] = collusion_attack(*tr, cfg.attack.honest, sc,
                                          Rng::mix(cfg.seeds.protocol, 0xa77ac));
    }
    return out;
}

}  // namespace ppfl
