#pragma once

#include "tde/dataset.hpp"
#include "tde/ensemble.hpp"
#include "tde/stats.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tde {

/// Either one of the dictionary ensembles or the 1-NN Euclidean baseline.
struct ClassifierSpec {
    enum class Kind { Ensemble, EuclideanNN };

    std::string name;
    Kind kind = Kind::Ensemble;
    EnsembleConfig config;

    static ClassifierSpec ensemble(std::string name, EnsembleConfig config);
    static ClassifierSpec euclidean_1nn();
};

/// Nearest neighbour by squared Euclidean distance, ties to the lowest index.
ClassId euclidean_1nn(const Dataset& train, std::span<const double> series);

struct DatasetSplit {
    Dataset train;
    Dataset test;
};

/// Loads `<dir>/<name>_TRAIN.ts` and `<dir>/<name>_TEST.ts`.
DatasetSplit load_split(const std::filesystem::path& dir, const std::string& name);

/// One row of the results CSV. Failed cells carry NaN metrics.
struct ResultRow {
    std::string dataset;
    std::string classifier;
    std::uint64_t resample = 0;
    std::uint64_t seed = 0;
    double train_seconds = 0.0;
    double accuracy = 0.0;
    double balanced_accuracy = 0.0;
    double f1 = 0.0;
    double auroc = 0.0;

    [[nodiscard]] bool failed() const noexcept;
    /// Field-wise equality treating NaN as equal to NaN.
    [[nodiscard]] bool same_as(const ResultRow& other) const noexcept;
};

struct ExperimentResult {
    ResultRow row;
    std::vector<ClassId> truth;
    std::vector<std::vector<double>> distributions;
    std::string error; ///< non-empty for a failed cell
};

struct ExperimentOptions {
    std::size_t resamples = 1;
    std::uint64_t base_seed = 0;
    std::size_t threads = 1;
    /// Wall-clock train time goes into the CSV only when set; otherwise the
    /// column is 0 so repeated runs produce identical files.
    bool record_times = false;
};

/// Every (dataset, classifier, resample) cell; resample r is drawn and the
/// classifier seeded with base_seed + r. Rows come back sorted by key.
std::vector<ExperimentResult> run_experiment(const std::vector<DatasetSplit>& datasets,
                                             const std::vector<ClassifierSpec>& classifiers,
                                             const ExperimentOptions& options);

inline constexpr std::string_view kResultsHeader =
    "dataset,classifier,resample,seed,train_seconds,accuracy,balanced_accuracy,f1,auroc";

std::string write_results_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_results_csv(std::string_view text);

enum class Metric { Accuracy, BalancedAccuracy, F1, Auroc };
Metric parse_metric(std::string_view name);
std::string_view to_string(Metric m) noexcept;

/// Datasets x classifiers matrix of a metric averaged over resamples.
/// Cells without a successful row are NaN and listed in `missing`.
struct ScoreMatrix {
    std::vector<std::string> datasets;
    std::vector<std::string> classifiers;
    std::vector<std::vector<double>> scores;
    std::vector<std::string> missing; ///< "dataset/classifier"
};

ScoreMatrix build_score_matrix(std::span<const ResultRow> rows, Metric metric);

} // namespace tde
