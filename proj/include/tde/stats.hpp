#pragma once

#include "tde/dataset.hpp"

#include <span>
#include <string>
#include <vector>

namespace tde {

struct Metrics {
    double accuracy = 0.0;
    double balanced_accuracy = 0.0; ///< mean recall over classes present in the truth
    double f1 = 0.0;                ///< macro F1 over classes present in the truth
    double auroc = 0.0;             ///< mean one-vs-rest trapezoidal AUC
    std::vector<std::string> warnings;
};

/// Predicted class is the argmax of each distribution (lowest id on ties).
Metrics compute_metrics(std::span<const ClassId> truth, const std::vector<std::vector<double>>& distributions);

/// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
/// differences are dropped and tied ranks averaged; the exact null
/// distribution is used for up to 20 non-zero pairs, a tie-corrected normal
/// approximation with continuity correction beyond.
double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Holm step-down adjusted p-values, in the input order.
std::vector<double> holm_adjust(std::span<const double> pvalues);

/// Ranks within one row: 1 for the highest score, ties share the average.
std::vector<double> rank_scores(std::span<const double> scores);

struct RankReport {
    std::vector<std::string> classifiers;
    std::vector<double> mean_ranks;
    std::vector<std::vector<double>> pvalues;  ///< raw pairwise Wilcoxon p-values
    std::vector<std::vector<double>> adjusted; ///< Holm-adjusted over all pairs
    /// Maximal groups (indices into `classifiers`, by mean rank) with no
    /// significant pairwise difference.
    std::vector<std::vector<std::size_t>> cliques;
    double alpha = 0.05;
};

/// `scores` is datasets x classifiers; throws IncompleteMatrix on NaN cells
/// or ragged rows.
RankReport mean_ranks_and_cliques(const std::vector<std::vector<double>>& scores,
                                  std::vector<std::string> classifiers, double alpha = 0.05);

/// Tab-separated text: `rank`, `pvalue` and `clique` lines.
std::string format_rank_report(const RankReport& report, const std::string& metric);

} // namespace tde
