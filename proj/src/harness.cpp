#include "tde/harness.hpp"

#include "tde/error.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

namespace tde {

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view s) {
    if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::Format, "bad number '" + std::string(s) + "' in results CSV");
    }
    return v;
}

std::uint64_t parse_uint(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::Format, "bad integer '" + std::string(s) + "' in results CSV");
    }
    return v;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

struct Cell {
    std::size_t dataset = 0;
    std::size_t classifier = 0;
    std::uint64_t resample = 0;
};

ExperimentResult run_cell(const DatasetSplit& split, const ClassifierSpec& spec, std::uint64_t resample,
                          const ExperimentOptions& options) {
    ExperimentResult res;
    res.row.dataset = split.train.name;
    res.row.classifier = spec.name;
    res.row.resample = resample;
    res.row.seed = options.base_seed + resample;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    try {
        auto [train, test] = stratified_resample(split.train, split.test, resample, res.row.seed);
        harmonise_classes(train, test);
        res.truth = test.labels;

        const auto t0 = std::chrono::steady_clock::now();
        if (spec.kind == ClassifierSpec::Kind::EuclideanNN) {
            const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            res.row.train_seconds = options.record_times ? secs : 0.0;
            for (const auto& s : test.series) {
                std::vector<double> dist(train.num_classes(), 0.0);
                dist[static_cast<std::size_t>(euclidean_1nn(train, s))] = 1.0;
                res.distributions.push_back(std::move(dist));
            }
        } else {
            EnsembleConfig config = spec.config;
            config.seed = res.row.seed;
            const Ensemble model = build_ensemble(train, config);
            const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            res.row.train_seconds = options.record_times ? secs : 0.0;
            for (const auto& s : test.series) res.distributions.push_back(model.predict(s).distribution);
        }
        const Metrics m = compute_metrics(res.truth, res.distributions);
        res.row.accuracy = m.accuracy;
        res.row.balanced_accuracy = m.balanced_accuracy;
        res.row.f1 = m.f1;
        res.row.auroc = m.auroc;
    } catch (const std::exception& e) {
        res.error = e.what();
        res.row.accuracy = res.row.balanced_accuracy = res.row.f1 = res.row.auroc = nan;
    }
    return res;
}

} // namespace

ClassifierSpec ClassifierSpec::ensemble(std::string name, EnsembleConfig config) {
    return ClassifierSpec{std::move(name), Kind::Ensemble, std::move(config)};
}

ClassifierSpec ClassifierSpec::euclidean_1nn() { return ClassifierSpec{"1NN-ED", Kind::EuclideanNN, {}}; }

ClassId euclidean_1nn(const Dataset& train, std::span<const double> series) {
    if (series.size() != train.length()) throw Error(ErrorCode::SeriesLengthMismatch, "query length differs");
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        double d = 0.0;
        const auto& s = train.series[i];
        for (std::size_t t = 0; t < s.size() && d < best; ++t) d += (s[t] - series[t]) * (s[t] - series[t]);
        if (d < best) {
            best = d;
            best_idx = i;
        }
    }
    return train.labels[best_idx];
}

DatasetSplit load_split(const std::filesystem::path& dir, const std::string& name) {
    DatasetSplit split{load_ts(dir / (name + "_TRAIN.ts")), load_ts(dir / (name + "_TEST.ts"))};
    split.train.name = name;
    split.test.name = name;
    harmonise_classes(split.train, split.test);
    return split;
}

bool ResultRow::failed() const noexcept { return std::isnan(accuracy); }

bool ResultRow::same_as(const ResultRow& o) const noexcept {
    return dataset == o.dataset && classifier == o.classifier && resample == o.resample && seed == o.seed &&
           same_double(train_seconds, o.train_seconds) && same_double(accuracy, o.accuracy) &&
           same_double(balanced_accuracy, o.balanced_accuracy) && same_double(f1, o.f1) &&
           same_double(auroc, o.auroc);
}

std::vector<ExperimentResult> run_experiment(const std::vector<DatasetSplit>& datasets,
                                             const std::vector<ClassifierSpec>& classifiers,
                                             const ExperimentOptions& options) {
    std::vector<Cell> cells;
    for (std::size_t d = 0; d < datasets.size(); ++d) {
        for (std::size_t c = 0; c < classifiers.size(); ++c) {
            for (std::uint64_t r = 0; r < options.resamples; ++r) cells.push_back({d, c, r});
        }
    }
    std::vector<ExperimentResult> results(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            const Cell& cell = cells[i];
            results[i] = run_cell(datasets[cell.dataset], classifiers[cell.classifier], cell.resample, options);
        }
    };
    const std::size_t threads = std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(1, cells.size()));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    std::stable_sort(results.begin(), results.end(), [](const ExperimentResult& a, const ExperimentResult& b) {
        return std::tie(a.row.dataset, a.row.classifier, a.row.resample) <
               std::tie(b.row.dataset, b.row.classifier, b.row.resample);
    });
    return results;
}

std::string write_results_csv(std::span<const ResultRow> rows) {
    std::string out(kResultsHeader);
    out += '\n';
    for (const auto& r : rows) {
        if (r.dataset.find_first_of(",\n") != std::string::npos ||
            r.classifier.find_first_of(",\n") != std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "dataset and classifier names may not contain commas");
        }
        out += r.dataset + ',' + r.classifier + ',' + std::to_string(r.resample) + ',' + std::to_string(r.seed) + ',' +
               format_double(r.train_seconds) + ',' + format_double(r.accuracy) + ',' +
               format_double(r.balanced_accuracy) + ',' + format_double(r.f1) + ',' + format_double(r.auroc) + '\n';
    }
    return out;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
    std::vector<ResultRow> rows;
    bool header_seen = false;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kResultsHeader) throw Error(ErrorCode::Format, "unexpected results CSV header");
            header_seen = true;
            continue;
        }
        std::vector<std::string_view> f;
        std::size_t start = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (f.size() != 9) {
            throw Error(ErrorCode::Format, "results CSV line " + std::to_string(line_no) + " has " +
                                               std::to_string(f.size()) + " fields");
        }
        rows.push_back({std::string(f[0]), std::string(f[1]), parse_uint(f[2]), parse_uint(f[3]), parse_double(f[4]),
                        parse_double(f[5]), parse_double(f[6]), parse_double(f[7]), parse_double(f[8])});
    }
    if (!header_seen) throw Error(ErrorCode::Format, "empty results CSV");
    return rows;
}

Metric parse_metric(std::string_view name) {
    if (name == "accuracy") return Metric::Accuracy;
    if (name == "balanced_accuracy") return Metric::BalancedAccuracy;
    if (name == "f1") return Metric::F1;
    if (name == "auroc") return Metric::Auroc;
    throw Error(ErrorCode::InvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::string_view to_string(Metric m) noexcept {
    switch (m) {
        case Metric::Accuracy: return "accuracy";
        case Metric::BalancedAccuracy: return "balanced_accuracy";
        case Metric::F1: return "f1";
        case Metric::Auroc: return "auroc";
    }
    return "?";
}

ScoreMatrix build_score_matrix(std::span<const ResultRow> rows, Metric metric) {
    ScoreMatrix sm;
    std::map<std::pair<std::string, std::string>, std::pair<double, std::size_t>> sums;
    for (const auto& r : rows) {
        if (std::find(sm.datasets.begin(), sm.datasets.end(), r.dataset) == sm.datasets.end()) {
            sm.datasets.push_back(r.dataset);
        }
        if (std::find(sm.classifiers.begin(), sm.classifiers.end(), r.classifier) == sm.classifiers.end()) {
            sm.classifiers.push_back(r.classifier);
        }
        if (r.failed()) continue;
        double v = 0.0;
        switch (metric) {
            case Metric::Accuracy: v = r.accuracy; break;
            case Metric::BalancedAccuracy: v = r.balanced_accuracy; break;
            case Metric::F1: v = r.f1; break;
            case Metric::Auroc: v = r.auroc; break;
        }
        auto& cell = sums[{r.dataset, r.classifier}];
        cell.first += v;
        ++cell.second;
    }
    std::sort(sm.datasets.begin(), sm.datasets.end());
    std::sort(sm.classifiers.begin(), sm.classifiers.end());
    for (const auto& d : sm.datasets) {
        std::vector<double> row;
        for (const auto& c : sm.classifiers) {
            auto it = sums.find({d, c});
            if (it == sums.end() || it->second.second == 0) {
                row.push_back(std::numeric_limits<double>::quiet_NaN());
                sm.missing.push_back(d + "/" + c);
            } else {
                row.push_back(it->second.first / static_cast<double>(it->second.second));
            }
        }
        sm.scores.push_back(std::move(row));
    }
    return sm;
}

} // namespace tde
