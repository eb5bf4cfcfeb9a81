#include "ppfl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ppfl/crypto.hpp"
#include "ppfl/parallel.hpp"

namespace ppfl {

std::size_t Dataset::positives() const {
    std::size_t n = 0;
    for (const std::int8_t y : labels)
        if (y > 0) ++n;
    return n;
}

namespace {

constexpr int kAdultFields = 15;  // 14 attributes + income label
const bool kContinuous[14] = {true,  false, true,  false, true,  false, false,
                              false, false, false, true,  true,  true,  false};
const char* kAttrNames[14] = {"age",          "workclass",    "fnlwgt",
                              "education",    "education-num", "marital-status",
                              "occupation",   "relationship",  "race",
                              "sex",          "capital-gain",  "capital-loss",
                              "hours-per-week", "native-country"};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct RawRow {
    std::string fields[kAdultFields];
};

void parse_file(const std::string& path, std::vector<RawRow>& rows) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::string line;
    std::size_t lineno = 0;
    bool checked_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '|') continue;  // adult.test carries a '|' banner line
        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string tok;
        while (std::getline(ss, tok, ',')) fields.push_back(trim(tok));
        if (!checked_header) {
            checked_header = true;
            if (!fields.empty() && fields[0] == "age") continue;  // optional header row
            if (!fields.empty() && !fields[0].empty() &&
                !std::isdigit(static_cast<unsigned char>(fields[0][0]))) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": unknown column '" + fields[0] + "'");
            }
        }
        if (fields.size() != kAdultFields)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(kAdultFields) + " fields, got " +
                                     std::to_string(fields.size()));
        RawRow r;
        for (int i = 0; i < kAdultFields; ++i) r.fields[i] = fields[i];
        // test-file labels carry a trailing period
        std::string& lab = r.fields[kAdultFields - 1];
        if (!lab.empty() && lab.back() == '.') lab.pop_back();
        if (lab != ">50K" && lab != "<=50K")
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad label '" +
                                     lab + "'");
        for (int i = 0; i < 14; ++i) {
            if (kContinuous[i]) {
                try {
                    (void)std::stod(r.fields[i]);
                } catch (const std::exception&) {
                    if (r.fields[i] != "?")
                        throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                                 ": non-numeric value '" + r.fields[i] +
                                                 "' in column " + kAttrNames[i]);
                }
            }
        }
        rows.push_back(std::move(r));
    }
}

}  // namespace

Dataset preprocess_adult(const std::vector<std::string>& csv_paths) {
    std::vector<RawRow> raw;
    for (const auto& p : csv_paths) parse_file(p, raw);
    if (raw.empty()) throw std::runtime_error("adult preprocess: no data rows");

    // drop rows with any missing value
    std::vector<const RawRow*> clean;
    clean.reserve(raw.size());
    for (const RawRow& r : raw) {
        bool missing = false;
        for (int i = 0; i < kAdultFields && !missing; ++i) missing = (r.fields[i] == "?");
        if (!missing) clean.push_back(&r);
    }
    if (clean.empty()) throw std::runtime_error("adult preprocess: all rows had missing values");

    // categorical vocabularies from the cleaned data, sorted for determinism
    std::map<int, std::vector<std::string>> vocab;
    for (int c = 0; c < 14; ++c) {
        if (kContinuous[c]) continue;
        std::set<std::string> vals;
        for (const RawRow* r : clean) vals.insert(r->fields[c]);
        vocab[c] = std::vector<std::string>(vals.begin(), vals.end());
    }

    // continuous min/max over the cleaned data
    double mins[14], maxs[14];
    for (int c = 0; c < 14; ++c) {
        if (!kContinuous[c]) continue;
        mins[c] = 1e300;
        maxs[c] = -1e300;
        for (const RawRow* r : clean) {
            const double v = std::stod(r->fields[c]);
            mins[c] = std::min(mins[c], v);
            maxs[c] = std::max(maxs[c], v);
        }
    }

    Dataset ds;
    std::size_t width = 0;
    for (int c = 0; c < 14; ++c) {
        if (kContinuous[c]) {
            ds.feature_names.push_back(kAttrNames[c]);
            ++width;
        } else {
            for (const auto& v : vocab[c]) ds.feature_names.push_back(std::string(kAttrNames[c]) + "=" + v);
            width += vocab[c].size();
        }
    }
    ds.feature_names.push_back("intercept");
    ds.rows = clean.size();
    ds.cols = width + 1;
    ds.features.assign(ds.rows * ds.cols, 0.0);
    ds.labels.resize(ds.rows);

    for (std::size_t i = 0; i < clean.size(); ++i) {
        const RawRow& r = *clean[i];
        double* out = ds.features.data() + i * ds.cols;
        std::size_t at = 0;
        for (int c = 0; c < 14; ++c) {
            if (kContinuous[c]) {
                const double v = std::stod(r.fields[c]);
                const double span = maxs[c] - mins[c];
                out[at++] = span > 0 ? (v - mins[c]) / span : 0.0;
            } else {
                const auto& vs = vocab[c];
                const auto it = std::lower_bound(vs.begin(), vs.end(), r.fields[c]);
                out[at + static_cast<std::size_t>(it - vs.begin())] = 1.0;
                at += vs.size();
            }
        }
        // L2-normalize the feature part, then set the intercept
        double norm2 = 0;
        for (std::size_t c = 0; c < width; ++c) norm2 += out[c] * out[c];
        const double inv = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 0.0;
        for (std::size_t c = 0; c < width; ++c) out[c] *= inv;
        out[width] = 1.0;
        ds.labels[i] = r.fields[kAdultFields - 1] == ">50K" ? 1 : -1;
    }
    return ds;
}

Dataset preprocess_adult(const std::string& csv_path) {
    return preprocess_adult(std::vector<std::string>{csv_path});
}

namespace {
constexpr char kSnapshotMagic[8] = {'P', 'P', 'F', 'L', 'D', 'S', '0', '1'};
}

std::string snapshot_hash(const Dataset& ds) {
    std::vector<std::uint8_t> buf;
    buf.reserve(16 + ds.labels.size() + ds.features.size() * sizeof(double));
    auto put64 = [&](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    put64(ds.rows);
    put64(ds.cols);
    for (const std::int8_t y : ds.labels) buf.push_back(static_cast<std::uint8_t>(y));
    const auto* fb = reinterpret_cast<const std::uint8_t*>(ds.features.data());
    buf.insert(buf.end(), fb, fb + ds.features.size() * sizeof(double));
    const Digest32 d = sha256(std::span<const std::uint8_t>(buf));
    return hex(d);
}

std::string snapshot_save(const Dataset& ds, const std::string& path) {
    const std::string h = snapshot_hash(ds);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write snapshot: " + path);
    out.write(kSnapshotMagic, sizeof(kSnapshotMagic));
    const std::uint64_t rows = ds.rows, cols = ds.cols;
    out.write(reinterpret_cast<const char*>(&rows), 8);
    out.write(reinterpret_cast<const char*>(&cols), 8);
    out.write(h.data(), 64);
    out.write(reinterpret_cast<const char*>(ds.labels.data()),
              static_cast<std::streamsize>(ds.labels.size()));
    out.write(reinterpret_cast<const char*>(ds.features.data()),
              static_cast<std::streamsize>(ds.features.size() * sizeof(double)));
    std::uint32_t nn = static_cast<std::uint32_t>(ds.feature_names.size());
    out.write(reinterpret_cast<const char*>(&nn), 4);
    for (const auto& name : ds.feature_names) {
        const std::uint32_t len = static_cast<std::uint32_t>(name.size());
        out.write(reinterpret_cast<const char*>(&len), 4);
        out.write(name.data(), len);
    }
    if (!out) throw std::runtime_error("snapshot write failed: " + path);
    return h;
}

Dataset snapshot_load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open snapshot: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kSnapshotMagic, 8) != 0)
        throw std::runtime_error("not a dataset snapshot: " + path);
    std::uint64_t rows = 0, cols = 0;
    in.read(reinterpret_cast<char*>(&rows), 8);
    in.read(reinterpret_cast<char*>(&cols), 8);
    std::string h(64, '\0');
    in.read(h.data(), 64);
    Dataset ds;
    ds.rows = rows;
    ds.cols = cols;
    ds.labels.resize(rows);
    ds.features.resize(rows * cols);
    in.read(reinterpret_cast<char*>(ds.labels.data()), static_cast<std::streamsize>(rows));
    in.read(reinterpret_cast<char*>(ds.features.data()),
            static_cast<std::streamsize>(ds.features.size() * sizeof(double)));
    std::uint32_t nn = 0;
    in.read(reinterpret_cast<char*>(&nn), 4);
    for (std::uint32_t i = 0; i < nn && in; ++i) {
        std::uint32_t len = 0;
        in.read(reinterpret_cast<char*>(&len), 4);
        std::string name(len, '\0');
        in.read(name.data(), len);
        ds.feature_names.push_back(name);
    }
    if (!in) throw std::runtime_error("truncated snapshot: " + path);
    if (snapshot_hash(ds) != h) throw std::runtime_error("snapshot hash mismatch: " + path);
    return ds;
}

Dataset make_synthetic(std::size_t rows, std::size_t features, std::uint64_t seed,
                       double label_noise) {
    Rng rng(seed);
    Dataset ds;
    ds.rows = rows;
    ds.cols = features + 1;
    ds.features.assign(ds.rows * ds.cols, 0.0);
    ds.labels.resize(rows);
    std::vector<double> w(features);
    for (auto& x : w) x = rng.normal();
    for (std::size_t f = 0; f < features; ++f) ds.feature_names.push_back("f" + std::to_string(f));
    ds.feature_names.push_back("intercept");
    for (std::size_t i = 0; i < rows; ++i) {
        double* out = ds.features.data() + i * ds.cols;
        double norm2 = 0;
        for (std::size_t f = 0; f < features; ++f) {
            out[f] = rng.normal();
            norm2 += out[f] * out[f];
        }
        const double inv = norm2 > 0 ? 1.0 / std::sqrt(norm2) : 0.0;
        double score = 0;
        for (std::size_t f = 0; f < features; ++f) {
            out[f] *= inv;
            score += out[f] * w[f];
        }
        out[features] = 1.0;
        const bool flip = rng.unit() < label_noise;
        ds.labels[i] = static_cast<std::int8_t>(((score >= 0) != flip) ? 1 : -1);
    }
    return ds;
}

TrainTestSplit split_dataset(const Dataset& ds, double test_fraction, Rng& rng) {
    if (test_fraction < 0 || test_fraction >= 1)
        throw std::invalid_argument("split: test_fraction must be in [0, 1)");
    std::vector<std::uint32_t> idx(ds.rows);
    for (std::size_t i = 0; i < ds.rows; ++i) idx[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = ds.rows; i > 1; --i) {  // Fisher-Yates
        const std::size_t j = rng.below(i);
        std::swap(idx[i - 1], idx[j]);
    }
    const std::size_t test_n =
        static_cast<std::size_t>(std::llround(static_cast<double>(ds.rows) * test_fraction));
    TrainTestSplit split;
    split.test_idx.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(test_n));
    split.train_idx.assign(idx.begin() + static_cast<std::ptrdiff_t>(test_n), idx.end());
    return split;
}

std::vector<std::uint32_t> sample_one(std::span<const std::uint32_t> train_idx, int local_size,
                                      Rng rng) {
    if (local_size <= 0 || static_cast<std::size_t>(local_size) > train_idx.size())
        throw std::invalid_argument("sample_local: local_size exceeds training partition");
    const std::size_t n = train_idx.size();
    const std::size_t k = static_cast<std::size_t>(local_size);
    // Floyd's sampling without replacement
    std::set<std::uint32_t> chosen;
    for (std::size_t i = n - k; i < n; ++i) {
        const std::uint32_t j = static_cast<std::uint32_t>(rng.below(i + 1));
        if (!chosen.insert(j).second) chosen.insert(static_cast<std::uint32_t>(i));
    }
    std::vector<std::uint32_t> out;
    out.reserve(k);
    for (const std::uint32_t pos : chosen) out.push_back(train_idx[pos]);
    return out;
}

std::vector<std::vector<std::uint32_t>> sample_local(std::span<const std::uint32_t> train_idx,
                                                     int local_size, int n_clients, Rng& rng) {
    if (local_size <= 0 || static_cast<std::size_t>(local_size) > train_idx.size())
        throw std::invalid_argument("sample_local: local_size exceeds training partition");
    std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(n_clients));
    std::vector<Rng> client_rngs;
    client_rngs.reserve(static_cast<std::size_t>(n_clients));
    for (int c = 0; c < n_clients; ++c)
        client_rngs.push_back(rng.child(static_cast<std::uint64_t>(c)));
    par::parallel_for(static_cast<std::size_t>(n_clients), [&](std::size_t c) {
        out[c] = sample_one(train_idx, local_size, client_rngs[c]);
    });
    return out;
}

}  // namespace ppfl
