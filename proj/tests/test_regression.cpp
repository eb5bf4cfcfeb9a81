#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "ppfl/regression.hpp"
#include "ppfl/rng.hpp"

using namespace ppfl;

#ifndef PPFL_DATA_DIR
#define PPFL_DATA_DIR "data"
#endif

namespace {

const Dataset& adult() {
    static Dataset ds = preprocess_adult(std::string(PPFL_DATA_DIR) + "/adult.csv");
    return ds;
}

std::vector<std::uint32_t> all_rows(const Dataset& ds) {
    std::vector<std::uint32_t> idx(ds.rows);
    for (std::size_t i = 0; i < ds.rows; ++i) idx[i] = static_cast<std::uint32_t>(i);
    return idx;
}

// 4-point linearly separable toy task in 2D (plus intercept)
Dataset toy_separable() {
    Dataset ds;
    ds.rows = 4;
    ds.cols = 3;
    ds.features = {1, 0, 1, 0.6, 0.8, 1, -1, 0, 1, -0.6, -0.8, 1};
    ds.labels = {1, 1, -1, -1};
    return ds;
}

}  // namespace

TEST_SUITE("regression") {

TEST_CASE("adult preprocessing reproduces the published counts") {
    const Dataset& ds = adult();
    CHECK(ds.rows == 45222);
    CHECK(ds.cols == 105);  // 104 features + intercept
    CHECK(ds.positives() == 11208);
    CHECK(ds.feature_names.size() == 105);
    CHECK(ds.feature_names.back() == "intercept");
}

TEST_CASE("adult rows are unit norm before the intercept") {
    const Dataset& ds = adult();
    for (std::size_t r = 0; r < ds.rows; r += 997) {
        const double* x = ds.row(r);
        double norm2 = 0;
        for (std::size_t c = 0; c + 1 < ds.cols; ++c) norm2 += x[c] * x[c];
        CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-9);
        CHECK(x[ds.cols - 1] == 1.0);
    }
}

TEST_CASE("preprocess rejects malformed input naming the line") {
    const char* path = "bad_adult.csv";
    {
        std::ofstream f(path);
        f << "39,State-gov,77516,Bachelors,13,Never-married,Adm-clerical,Not-in-family,White,"
             "Male,2174,0,40,United-States,<=50K\n";
        f << "25,Private,1234\n";
    }
    try {
        preprocess_adult(std::string(path));
        CHECK(false);
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":2") != std::string::npos);
    }
    std::remove(path);
}

TEST_CASE("preprocess rejects its own snapshot output (runs exactly once)") {
    Dataset tiny = make_synthetic(10, 3, 1);
    const char* path = "tiny.snapshot";
    snapshot_save(tiny, path);
    CHECK_THROWS(preprocess_adult(std::string(path)));
    std::remove(path);
}

TEST_CASE("snapshot round-trip preserves content and hash") {
    Dataset ds = make_synthetic(100, 5, 42);
    const char* path = "roundtrip.snapshot";
    const std::string h1 = snapshot_save(ds, path);
    const Dataset back = snapshot_load(path);
    CHECK(back.rows == ds.rows);
    CHECK(back.cols == ds.cols);
    CHECK(back.features == ds.features);
    CHECK(back.labels == ds.labels);
    CHECK(snapshot_hash(back) == h1);
    std::remove(path);
}

TEST_CASE("split sizes and determinism") {
    const Dataset& ds = adult();
    Rng r1(123), r2(123);
    const TrainTestSplit a = split_dataset(ds, 0.25, r1);
    const TrainTestSplit b = split_dataset(ds, 0.25, r2);
    CHECK(a.test_idx.size() == 11306);  // round(45222 * 0.25) = 11305.5 -> 11306
    CHECK(a.train_idx.size() + a.test_idx.size() == ds.rows);
    CHECK(a.train_idx == b.train_idx);
    CHECK(a.test_idx == b.test_idx);
}

TEST_CASE("local sampling: 200 distinct rows per client, deterministic") {
    const Dataset& ds = adult();
    Rng r(55);
    const TrainTestSplit split = split_dataset(ds, 0.25, r);
    Rng s1(9), s2(9);
    const auto a = sample_local(split.train_idx, 200, 7, s1);
    const auto b = sample_local(split.train_idx, 200, 7, s2);
    REQUIRE(a.size() == 7);
    for (const auto& rows : a) {
        CHECK(rows.size() == 200);
        std::set<std::uint32_t> uniq(rows.begin(), rows.end());
        CHECK(uniq.size() == 200);
    }
    CHECK(a == b);
    Rng s3(10);
    CHECK_THROWS_AS(sample_local(split.train_idx, 1 + static_cast<int>(split.train_idx.size()),
                                 2, s3),
                    std::invalid_argument);
}

TEST_CASE("gradient at zero weights") {
    Dataset one;
    one.rows = 1;
    one.cols = 3;
    one.features = {0.5, -0.25, 1.0};
    one.labels = {1};
    const std::vector<std::uint32_t> rows{0};
    Weights w(3, 0.0);
    const auto [loss, grad] = loss_and_gradient(w, one, rows, 0.0);
    CHECK(loss == doctest::Approx(std::log(2.0)));
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(grad[c] == doctest::Approx(-one.features[c] / 2.0));
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(77);
    const Dataset ds = make_synthetic(40, 6, 3);
    const auto rows = all_rows(ds);
    const double h = 1e-5;
    for (int trial = 0; trial < 100; ++trial) {
        Weights w(ds.cols);
        for (auto& x : w) x = rng.uniform(-2, 2);
        const double reg = trial % 2 ? 0.1 : 0.0;
        const auto [loss, grad] = loss_and_gradient(w, ds, rows, reg);
        (void)loss;
        double max_rel = 0;
        for (std::size_t c = 0; c < ds.cols; ++c) {
            Weights wp = w, wm = w;
            wp[c] += h;
            wm[c] -= h;
            const double fp = loss_and_gradient(wp, ds, rows, reg).first;
            const double fm = loss_and_gradient(wm, ds, rows, reg).first;
            const double fd = (fp - fm) / (2 * h);
            const double rel = std::abs(fd - grad[c]) / std::max(1e-8, std::abs(grad[c]));
            max_rel = std::max(max_rel, rel);
        }
        CHECK(max_rel < 1e-5);
    }
}

TEST_CASE("one gradient step from zero") {
    const Dataset ds = toy_separable();
    const std::vector<std::uint32_t> rows{0, 1, 2, 3};
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.iterations = 1;
    cfg.reg_alpha = 0.0;
    Weights w0(3, 0.0);
    const Weights w = local_train(ds, rows, w0, cfg);
    const auto grad0 = loss_and_gradient(w0, ds, rows, 0.0).second;
    for (std::size_t c = 0; c < 3; ++c)
        CHECK(w[c] == doctest::Approx(-cfg.learning_rate * grad0[c]));
    TrainConfig bad = cfg;
    bad.iterations = 0;
    CHECK_THROWS_AS(local_train(ds, rows, w0, bad), std::invalid_argument);
}

TEST_CASE("loss strictly decreases on the separable toy set") {
    const Dataset ds = toy_separable();
    const std::vector<std::uint32_t> rows{0, 1, 2, 3};
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.iterations = 1;
    cfg.reg_alpha = 0.0;
    Weights w(3, 0.0);
    double prev = loss_and_gradient(w, ds, rows, 0.0).first;
    for (int it = 0; it < 50; ++it) {
        w = local_train(ds, rows, w, cfg);
        const double cur = loss_and_gradient(w, ds, rows, 0.0).first;
        CHECK(cur < prev);
        prev = cur;
    }
    // trained classifier separates the toy set
    const auto preds = predict(w, ds, rows);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(preds[i] == ds.labels[i]);
}

TEST_CASE("loss is non-increasing under the Lipschitz step bound") {
    Rng rng(13);
    const Dataset ds = make_synthetic(80, 8, 21);
    const auto rows = all_rows(ds);
    const double reg = 0.05;
    TrainConfig cfg;
    cfg.learning_rate = 1.0 / (0.25 + reg);
    cfg.iterations = 1;
    cfg.reg_alpha = reg;
    Weights w(ds.cols);
    for (auto& x : w) x = rng.uniform(-1, 1);
    double prev = loss_and_gradient(w, ds, rows, reg).first;
    for (int it = 0; it < 30; ++it) {
        w = local_train(ds, rows, w, cfg);
        const double cur = loss_and_gradient(w, ds, rows, reg).first;
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("training on an adult sample stays finite and encodable") {
    const Dataset& ds = adult();
    Rng r(55);
    const TrainTestSplit split = split_dataset(ds, 0.25, r);
    Rng s(77);
    const auto rows = sample_one(split.train_idx, 200, s);
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.iterations = 50;
    cfg.reg_alpha = 1.0;
    Weights w0(ds.cols, 0.0);
    const Weights w = local_train(ds, rows, w0, cfg);
    for (const double x : w) {
        CHECK(std::isfinite(x));
        CHECK(std::abs(x) < std::ldexp(1.0, 20));
    }
}

TEST_CASE("training is deterministic bit for bit") {
    const Dataset ds = make_synthetic(60, 5, 8);
    const auto rows = all_rows(ds);
    TrainConfig cfg;
    cfg.learning_rate = 0.1;
    cfg.iterations = 25;
    cfg.reg_alpha = 0.01;
    Weights w0(ds.cols, 0.0);
    const Weights a = local_train(ds, rows, w0, cfg);
    const Weights b = local_train(ds, rows, w0, cfg);
    CHECK(a == b);
}

TEST_CASE("predict tie-break and basics") {
    Dataset ds;
    ds.rows = 2;
    ds.cols = 2;
    ds.features = {1.0, 0.0, -1.0, 0.0};
    ds.labels = {1, -1};
    const std::vector<std::uint32_t> rows{0, 1};
    Weights zero(2, 0.0);
    const auto p0 = predict(zero, ds, rows);
    CHECK(p0[0] == 1);  // sign(0) -> +1
    CHECK(p0[1] == 1);
    Weights e0{1.0, 0.0};
    const auto p1 = predict(e0, ds, rows);
    CHECK(p1[0] == 1);
    CHECK(p1[1] == -1);
    Weights wrong(3, 0.0);
    CHECK_THROWS_AS(predict(wrong, ds, rows), std::invalid_argument);
}

}  // TEST_SUITE
