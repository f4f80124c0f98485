#include "tde/stats.hpp"

#include "tde/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace tde {

namespace {

std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

// Area under the ROC curve of `scores` for the positive mask, sweeping
// thresholds from high to low with tied scores taken together.
double trapezoid_auc(std::span<const double> scores, const std::vector<bool>& positive) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double pos_total = 0.0;
    double neg_total = 0.0;
    for (bool p : positive) (p ? pos_total : neg_total) += 1.0;

    double tp = 0.0;
    double fp = 0.0;
    double area = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double prev_tp = tp;
        const double prev_fp = fp;
        const double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (positive[order[i]] ? tp : fp) += 1.0;
            ++i;
        }
        area += (fp - prev_fp) * (tp + prev_tp) / 2.0;
    }
    return area / (pos_total * neg_total);
}

// Normal upper tail.
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace

Metrics compute_metrics(std::span<const ClassId> truth, const std::vector<std::vector<double>>& distributions) {
    if (truth.size() != distributions.size()) {
        throw Error(ErrorCode::InvalidArgument, "truth and distributions differ in length");
    }
    if (truth.empty()) throw Error(ErrorCode::InvalidArgument, "no cases to score");
    std::size_t classes = 0;
    for (const auto& d : distributions) classes = std::max(classes, d.size());
    for (ClassId t : truth) classes = std::max(classes, static_cast<std::size_t>(t) + 1);

    const std::size_t n = truth.size();
    std::vector<ClassId> predicted(n);
    for (std::size_t i = 0; i < n; ++i) predicted[i] = static_cast<ClassId>(argmax(distributions[i]));

    std::vector<double> tp(classes, 0.0);
    std::vector<double> actual(classes, 0.0);
    std::vector<double> called(classes, 0.0);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = static_cast<std::size_t>(truth[i]);
        const auto p = static_cast<std::size_t>(predicted[i]);
        actual[t] += 1.0;
        called[p] += 1.0;
        if (t == p) {
            tp[t] += 1.0;
            ++correct;
        }
    }

    Metrics m;
    m.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    double recall_sum = 0.0;
    double f1_sum = 0.0;
    double auc_sum = 0.0;
    std::size_t present = 0;
    std::size_t auc_terms = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        if (actual[c] == 0.0) {
            m.warnings.push_back("class " + std::to_string(c) + " absent from truth; skipped");
            continue;
        }
        ++present;
        const double recall = tp[c] / actual[c];
        const double precision = called[c] > 0.0 ? tp[c] / called[c] : 0.0;
        recall_sum += recall;
        f1_sum += (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;

        if (actual[c] == static_cast<double>(n)) continue; // no negatives
        std::vector<double> scores(n);
        std::vector<bool> positive(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = c < distributions[i].size() ? distributions[i][c] : 0.0;
            positive[i] = static_cast<std::size_t>(truth[i]) == c;
        }
        auc_sum += trapezoid_auc(scores, positive);
        ++auc_terms;
    }
    m.balanced_accuracy = recall_sum / static_cast<double>(present);
    m.f1 = f1_sum / static_cast<double>(present);
    if (auc_terms > 0) {
        m.auroc = auc_sum / static_cast<double>(auc_terms);
    } else {
        m.auroc = 0.5;
        m.warnings.emplace_back("single-class truth; AUROC undefined, reported as 0.5");
    }
    return m;
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "paired samples differ in length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    if (n == 0) return 1.0;

    // Average ranks of |d|, doubled so ties stay integral.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return std::abs(diffs[x]) < std::abs(diffs[y]); });
    std::vector<long> rank2(n);
    double tie_term = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
        const long doubled = static_cast<long>(i + 1 + j + 1); // (lowest + highest) rank
        for (std::size_t k = i; k <= j; ++k) rank2[order[k]] = doubled;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
    }
    long w_plus2 = 0;
    long total2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        total2 += rank2[i];
        if (diffs[i] > 0) w_plus2 += rank2[i];
    }

    if (n <= 20) {
        // counts[t] = number of sign assignments with doubled positive rank sum t
        std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
        counts[0] = 1.0;
        long reach = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (long t = reach; t >= 0; --t) {
                if (counts[static_cast<std::size_t>(t)] != 0.0) {
                    counts[static_cast<std::size_t>(t + rank2[i])] += counts[static_cast<std::size_t>(t)];
                }
            }
            reach += rank2[i];
        }
        const double all = std::ldexp(1.0, static_cast<int>(n));
        double lower = 0.0;
        double upper = 0.0;
        for (long t = 0; t <= total2; ++t) {
            if (t <= w_plus2) lower += counts[static_cast<std::size_t>(t)];
            if (t >= w_plus2) upper += counts[static_cast<std::size_t>(t)];
        }
        return std::min(1.0, 2.0 * std::min(lower, upper) / all);
    }

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) return 1.0;
    const double w = static_cast<double>(w_plus2) / 2.0;
    const double z = std::max(0.0, std::abs(w - mean) - 0.5) / std::sqrt(var);
    return std::min(1.0, 2.0 * normal_sf(z));
}

std::vector<double> holm_adjust(std::span<const double> pvalues) {
    const std::size_t m = pvalues.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
    std::vector<double> out(m);
    double running = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double adj = std::min(1.0, static_cast<double>(m - i) * pvalues[order[i]]);
        running = std::max(running, adj);
        out[order[i]] = running;
    }
    return out;
}

std::vector<double> rank_scores(std::span<const double> scores) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

RankReport mean_ranks_and_cliques(const std::vector<std::vector<double>>& scores,
                                  std::vector<std::string> classifiers, double alpha) {
    const std::size_t k = classifiers.size();
    if (scores.empty() || k == 0) throw Error(ErrorCode::IncompleteMatrix, "empty score matrix");
    for (std::size_t d = 0; d < scores.size(); ++d) {
        if (scores[d].size() != k) throw Error(ErrorCode::IncompleteMatrix, "ragged score matrix");
        for (std::size_t c = 0; c < k; ++c) {
            if (std::isnan(scores[d][c])) {
                throw Error(ErrorCode::IncompleteMatrix,
                            "missing score for dataset " + std::to_string(d) + ", classifier " + classifiers[c]);
            }
        }
    }

    RankReport r;
    r.classifiers = std::move(classifiers);
    r.alpha = alpha;
    r.mean_ranks.assign(k, 0.0);
    for (const auto& row : scores) {
        const auto ranks = rank_scores(row);
        for (std::size_t c = 0; c < k; ++c) r.mean_ranks[c] += ranks[c];
    }
    for (double& v : r.mean_ranks) v /= static_cast<double>(scores.size());

    r.pvalues.assign(k, std::vector<double>(k, 1.0));
    r.adjusted.assign(k, std::vector<double>(k, 1.0));
    std::vector<double> flat;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            std::vector<double> a;
            std::vector<double> b;
            for (const auto& row : scores) {
                a.push_back(row[i]);
                b.push_back(row[j]);
            }
            const double p = wilcoxon_signed_rank(a, b);
            r.pvalues[i][j] = r.pvalues[j][i] = p;
            flat.push_back(p);
            pairs.emplace_back(i, j);
        }
    }
    const auto adj = holm_adjust(flat);
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        r.adjusted[pairs[t].first][pairs[t].second] = r.adjusted[pairs[t].second][pairs[t].first] = adj[t];
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return r.mean_ranks[a] < r.mean_ranks[b]; });
    auto differs = [&](std::size_t a, std::size_t b) { return r.adjusted[a][b] < alpha; };

    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t end = i;
        while (end + 1 < k) {
            bool ok = true;
            for (std::size_t t = i; t <= end && ok; ++t) ok = !differs(order[t], order[end + 1]);
            if (!ok) break;
            ++end;
        }
        // A span starting later but ending no further is contained in this one.
        if (spans.empty() || end > spans.back().second) spans.emplace_back(i, end);
    }
    for (auto [lo, hi] : spans) {
        std::vector<std::size_t> clique;
        for (std::size_t t = lo; t <= hi; ++t) clique.push_back(order[t]);
        r.cliques.push_back(std::move(clique));
    }
    return r;
}

std::string format_rank_report(const RankReport& report, const std::string& metric) {
    std::ostringstream out;
    out.precision(10);
    out << "metric\t" << metric << "\n";
    out << "alpha\t" << report.alpha << "\n";
    std::vector<std::size_t> order(report.classifiers.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return report.mean_ranks[a] < report.mean_ranks[b]; });
    for (std::size_t c : order) out << "rank\t" << report.classifiers[c] << "\t" << report.mean_ranks[c] << "\n";
    for (std::size_t i = 0; i < report.classifiers.size(); ++i) {
        for (std::size_t j = i + 1; j < report.classifiers.size(); ++j) {
            out << "pvalue\t" << report.classifiers[i] << "\t" << report.classifiers[j] << "\t"
                << report.pvalues[i][j] << "\t" << report.adjusted[i][j] << "\n";
        }
    }
    for (const auto& clique : report.cliques) {
        out << "clique";
        for (std::size_t c : clique) out << "\t" << report.classifiers[c];
        out << "\n";
    }
    return out.str();
}

} // namespace tde
