// Command-line front end: fit, predict, benchmark, compare.

#include "CLI11.hpp"

#include "tde/dataset.hpp"
#include "tde/ensemble.hpp"
#include "tde/error.hpp"
#include "tde/harness.hpp"
#include "tde/stats.hpp"

#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace tde;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;
constexpr int kExitIncomplete = 3;

/// "90", "90s", "500ms", "5m", "1h".
Seconds parse_duration(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || value < 0) throw Error(ErrorCode::InvalidArgument, "bad duration '" + text + "'");
    const std::string_view unit(ptr, static_cast<std::size_t>(last - ptr));
    if (unit.empty() || unit == "s") return Seconds(value);
    if (unit == "ms") return Seconds(value / 1000.0);
    if (unit == "m") return Seconds(value * 60.0);
    if (unit == "h") return Seconds(value * 3600.0);
    throw Error(ErrorCode::InvalidArgument, "bad duration unit in '" + text + "'");
}

void require_file(const fs::path& p) {
    if (!fs::is_regular_file(p)) throw Error(ErrorCode::InvalidArgument, "file not found: " + p.string());
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + p.string());
}

std::string fixed(double v, int digits = 4) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << v;
    return s.str();
}

struct BuildFlags {
    std::string variant = "tde";
    std::size_t k = 250;
    std::size_t s = 50;
    std::string contract;
    std::uint64_t seed = 0;
    std::vector<int> word_lengths;
    int max_height = 3;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--k", k, "parameter sets to evaluate (ignored under --contract)")->capture_default_str();
        cmd.add_option("--s", s, "maximum ensemble size")->capture_default_str();
        cmd.add_option("--contract", contract, "train time limit, e.g. 60s, 5m, 1h");
        cmd.add_option("--seed", seed, "random seed")->capture_default_str();
        cmd.add_option("--word-lengths", word_lengths, "candidate word lengths")->delimiter(',');
        cmd.add_option("--max-height", max_height, "maximum spatial pyramid height")->capture_default_str();
    }

    EnsembleConfig config(Variant v) const {
        EnsembleConfig c;
        c.variant = v;
        c.k = k;
        c.s = s;
        c.seed = seed;
        if (!contract.empty()) c.time_contract = parse_duration(contract);
        if (!word_lengths.empty()) c.word_lengths = word_lengths;
        c.max_levels = max_height;
        return c;
    }
};

int cmd_fit(const BuildFlags& flags, const fs::path& train_path, const fs::path& out_path) {
    require_file(train_path);
    const Dataset train = load_ts(train_path);
    const Variant v = parse_variant(flags.variant);
    const auto t0 = std::chrono::steady_clock::now();
    const Ensemble model = build_ensemble(train, flags.config(v));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    save_model(model, out_path);
    std::cout << "fit variant=" << to_string(v) << " seed=" << flags.seed << " dataset=" << train.name
              << " cases=" << train.size() << " length=" << train.length() << " members=" << model.members().size()
              << " candidates=" << model.log().candidates.size()
              << " train_accuracy_estimate=" << fixed(model.train_accuracy_estimate())
              << " build_seconds=" << fixed(secs, 3) << " model=" << out_path.string() << "\n";
    return 0;
}

int cmd_predict(const fs::path& model_path, const fs::path& test_path, const std::string& out_path) {
    require_file(model_path);
    require_file(test_path);
    const Ensemble model = load_model(model_path);
    const Dataset test = load_ts(test_path);
    if (test.length() != model.series_length()) {
        throw Error(ErrorCode::SeriesLengthMismatch, "model expects length " + std::to_string(model.series_length()) +
                                                         ", " + test_path.string() + " has " +
                                                         std::to_string(test.length()));
    }
    std::map<std::string, ClassId> known;
    for (std::size_t c = 0; c < model.class_names().size(); ++c) known[model.class_names()[c]] = static_cast<ClassId>(c);
    std::vector<ClassId> truth;
    for (ClassId l : test.labels) {
        const auto& name = test.class_names[static_cast<std::size_t>(l)];
        auto it = known.find(name);
        if (it == known.end()) throw Error(ErrorCode::Format, "class '" + name + "' is unknown to the model");
        truth.push_back(it->second);
    }

    std::ostringstream csv;
    csv << "index,predicted";
    for (const auto& c : model.class_names()) csv << ",p_" << c;
    csv << "\n";
    csv.precision(17);
    std::vector<std::vector<double>> dists;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const Prediction p = model.predict(test.series[i]);
        csv << i << "," << model.class_names()[static_cast<std::size_t>(p.label)];
        for (double d : p.distribution) csv << "," << d;
        csv << "\n";
        dists.push_back(p.distribution);
    }
    const Metrics m = compute_metrics(truth, dists);
    for (const auto& w : m.warnings) std::cerr << "warning: " << w << "\n";

    std::ostringstream summary;
    summary << "predict variant=" << to_string(model.config().variant) << " seed=" << model.config().seed
            << " cases=" << test.size() << " accuracy=" << fixed(m.accuracy)
            << " balanced_accuracy=" << fixed(m.balanced_accuracy) << " f1=" << fixed(m.f1)
            << " auroc=" << fixed(m.auroc) << "\n";
    if (out_path.empty()) {
        std::cout << csv.str();
        std::cerr << summary.str();
    } else {
        write_text(out_path, csv.str());
        std::cout << summary.str();
    }
    return 0;
}

ClassifierSpec classifier_for(const std::string& name, const BuildFlags& flags) {
    std::string key;
    for (char ch : name) {
        if (ch != '-' && ch != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    if (key == "1nned" || key == "ed" || key == "1nn") return ClassifierSpec::euclidean_1nn();
    const Variant v = parse_variant(name);
    return ClassifierSpec::ensemble(std::string(to_string(v)), flags.config(v));
}

fs::path output_dir(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("TDE_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
    return "results";
}

int cmd_benchmark(const BuildFlags& flags, const fs::path& data_dir, const std::vector<std::string>& datasets,
                  const std::vector<std::string>& variants, const ExperimentOptions& options, const std::string& out) {
    std::vector<DatasetSplit> splits;
    for (const auto& name : datasets) {
        require_file(data_dir / (name + "_TRAIN.ts"));
        require_file(data_dir / (name + "_TEST.ts"));
        splits.push_back(load_split(data_dir, name));
    }
    std::vector<ClassifierSpec> specs;
    for (const auto& v : variants) specs.push_back(classifier_for(v, flags));

    const auto results = run_experiment(splits, specs, options);
    std::vector<ResultRow> rows;
    std::size_t failed = 0;
    for (const auto& r : results) {
        rows.push_back(r.row);
        if (!r.error.empty()) {
            ++failed;
            std::cerr << "failed: " << r.row.dataset << "/" << r.row.classifier << "/" << r.row.resample << ": "
                      << r.error << "\n";
        }
    }
    const fs::path path = output_dir(out) / "results.csv";
    write_text(path, write_results_csv(rows));
    std::cout << "benchmark seed=" << options.base_seed << " datasets=" << splits.size()
              << " classifiers=" << specs.size() << " resamples=" << options.resamples << " rows=" << rows.size()
              << " failed=" << failed << " results=" << path.string() << "\n";
    for (const auto& r : rows) {
        std::cout << "  " << r.dataset << " " << r.classifier << " resample=" << r.resample
                  << " accuracy=" << fixed(r.accuracy) << "\n";
    }
    return failed == 0 ? 0 : kExitFailure;
}

int cmd_compare(const std::vector<std::string>& inputs, const std::string& metric_name, double alpha,
                const std::string& out) {
    const Metric metric = parse_metric(metric_name);
    std::vector<ResultRow> rows;
    for (const auto& in : inputs) {
        // NAME=PATH relabels the classifier of a single-classifier file as
        // NAME, or prefixes "NAME:" when the file holds several.
        std::string name;
        fs::path path = in;
        if (auto eq = in.find('='); eq != std::string::npos && !fs::exists(in)) {
            name = in.substr(0, eq);
            path = in.substr(eq + 1);
        }
        require_file(path);
        std::ifstream f(path, std::ios::binary);
        std::stringstream buf;
        buf << f.rdbuf();
        auto file_rows = parse_results_csv(buf.str());
        bool single = true;
        for (const auto& r : file_rows) single = single && r.classifier == file_rows.front().classifier;
        for (auto& r : file_rows) {
            if (!name.empty()) r.classifier = single ? name : name + ":" + r.classifier;
            rows.push_back(std::move(r));
        }
    }
    const ScoreMatrix sm = build_score_matrix(rows, metric);
    if (!sm.missing.empty()) {
        std::cerr << "incomplete score matrix; missing cells:\n";
        for (const auto& m : sm.missing) std::cerr << "  " << m << "\n";
        return kExitIncomplete;
    }
    const RankReport report = mean_ranks_and_cliques(sm.scores, sm.classifiers, alpha);
    std::string text = format_rank_report(report, std::string(to_string(metric)));
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
        std::cout << "compare datasets=" << sm.datasets.size() << " classifiers=" << sm.classifiers.size()
                  << " report=" << out << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dictionary-based time series classification"};
    app.require_subcommand(1);
    app.allow_extras(false);

    BuildFlags flags;
    std::string train_path;
    std::string test_path;
    std::string model_path;
    std::string out;

    auto* fit = app.add_subcommand("fit", "train an ensemble and write a model file");
    fit->add_option("--variant", flags.variant, "boss, cboss, sboss, csboss or tde")->capture_default_str();
    fit->add_option("--train", train_path, "training .ts file")->required();
    fit->add_option("--out", out, "model output path")->required();
    flags.add_to(*fit);

    auto* predict = app.add_subcommand("predict", "classify a .ts file with a saved model");
    predict->add_option("--model", model_path, "model file")->required();
    predict->add_option("--test", test_path, ".ts file to classify")->required();
    predict->add_option("--out", out, "predictions CSV (default: standard output)");

    std::string data_dir = "data";
    std::vector<std::string> datasets;
    std::vector<std::string> variants{"tde"};
    ExperimentOptions options;
    auto* bench = app.add_subcommand("benchmark", "resampled train/test experiments");
    bench->add_option("--data-dir", data_dir, "directory holding NAME_TRAIN.ts / NAME_TEST.ts")->capture_default_str();
    bench->add_option("--datasets", datasets, "dataset names")->delimiter(',')->required();
    bench->add_option("--variants", variants, "classifiers (ensemble variants or 1nn-ed)")->delimiter(',');
    bench->add_option("--resamples", options.resamples, "resamples per dataset")->capture_default_str();
    bench->add_option("--threads", options.threads, "worker threads")->capture_default_str();
    bench->add_flag("--record-times", options.record_times, "write wall-clock train times into the CSV");
    bench->add_option("--out-dir", out, "output directory (default $TDE_OUTPUT_DIR or ./results)");
    flags.add_to(*bench);

    std::vector<std::string> inputs;
    std::string metric = "accuracy";
    double alpha = 0.05;
    auto* compare = app.add_subcommand("compare", "mean ranks and cliques from result CSVs");
    compare->add_option("inputs", inputs, "result CSVs, optionally NAME=PATH")->required();
    compare->add_option("--metric", metric, "accuracy, balanced_accuracy, f1 or auroc")->capture_default_str();
    compare->add_option("--alpha", alpha, "significance level")->capture_default_str();
    compare->add_option("--out", out, "report path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*fit) return cmd_fit(flags, train_path, out);
        if (*predict) return cmd_predict(model_path, test_path, out);
        if (*bench) {
            options.base_seed = flags.seed;
            return cmd_benchmark(flags, data_dir, datasets, variants, options, out);
        }
        if (*compare) return cmd_compare(inputs, metric, alpha, out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::IncompleteMatrix ? kExitIncomplete : kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
