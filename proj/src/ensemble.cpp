#include "tde/ensemble.hpp"

#include "tde/error.hpp"
#include "tde/random.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace tde {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

DistanceKind default_distance(Variant v) {
    return (v == Variant::BOSS || v == Variant::cBOSS) ? DistanceKind::Boss : DistanceKind::HistogramIntersection;
}

DistanceKind distance_for(const EnsembleConfig& c) { return c.distance.value_or(default_distance(c.variant)); }

bool bigrams_for(const EnsembleConfig& c) { return c.bigrams.value_or(c.variant == Variant::TDE); }

std::vector<Binning> binnings_for(const EnsembleConfig& c) {
    if (!c.binnings.empty()) return c.binnings;
    if (c.variant == Variant::TDE) return {Binning::MCB, Binning::IGB};
    return {Binning::MCB};
}

int max_levels_for(const EnsembleConfig& c) {
    return (c.variant == Variant::cSBOSS || c.variant == Variant::TDE || c.variant == Variant::SBOSS) ? c.max_levels
                                                                                                       : 1;
}

bool legal(const SfaParameters& p, std::size_t m) {
    return p.window_length >= p.required_window() && static_cast<std::size_t>(p.window_length) <= m;
}

// Contracted build shared by cBOSS, cS-BOSS and TDE: sample parameters,
// build each member on a fresh subsample, keep the s most accurate.
Ensemble build_contracted(const Dataset& train, const EnsembleConfig& config) {
    config.validate();
    train.validate();
    const auto start = Clock::now();
    const std::size_t m = train.length();
    std::vector<IndividualParams> remaining = parameter_space(config, m);
    if (remaining.empty()) throw Error(ErrorCode::NoLegalParameters, "no legal parameter combinations");

    ChooserSettings chooser;
    chooser.bounds = ParameterBounds::for_series_length(m);
    chooser.hyperparameters = config.gp;
    chooser.random_warmup = config.random_warmup;
    chooser.use_gp = config.variant == Variant::TDE && config.use_gp;
    chooser.tune = config.tune_gp;

    const DistanceKind distance = distance_for(config);
    Rng rng(mix_seed(config.seed, 0x5A3F1E));

    std::vector<IndividualBoss> members;
    std::vector<double> accuracies;
    std::vector<std::size_t> arrivals;
    std::vector<ParamRecord> history;
    BuildLog log;

    for (std::size_t i = 0; !remaining.empty(); ++i) {
        if (config.time_contract) {
            // At least one member is always built, so a tiny contract still yields a model.
            if (i > 0 && seconds_since(start) >= config.time_contract->count()) {
                log.contract_reached = true;
                break;
            }
        } else if (i >= config.k) {
            break;
        }
        const auto member_start = Clock::now();
        const std::size_t pick = choose_parameters(remaining, history, i, rng, chooser);
        const IndividualParams params = remaining[pick];
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

        const Dataset sub = subsample_train(train, config.subsample_proportion, mix_seed(config.seed, i));
        IndividualBoss cls = IndividualBoss::build(sub, params, distance);
        const double acc = cls.train_accuracy();

        if (members.size() < config.s) {
            members.push_back(std::move(cls));
            accuracies.push_back(acc);
            arrivals.push_back(i);
        } else {
            // Evict the least accurate member; among equals the latest
            // arrival goes, so earlier candidates win ties.
            std::size_t lowest = 0;
            for (std::size_t j = 1; j < members.size(); ++j) {
                if (accuracies[j] < accuracies[lowest] ||
                    (accuracies[j] == accuracies[lowest] && arrivals[j] > arrivals[lowest])) {
                    lowest = j;
                }
            }
            if (acc > accuracies[lowest]) {
                members[lowest] = std::move(cls);
                accuracies[lowest] = acc;
                arrivals[lowest] = i;
            }
        }
        history.push_back({params, acc});
        log.candidates.push_back({i, params, acc, seconds_since(member_start)});
    }

    std::vector<double> weights(accuracies.size());
    std::transform(accuracies.begin(), accuracies.end(), weights.begin(), [](double a) { return std::pow(a, 4); });
    Ensemble ens(config, train.class_names, m, std::move(members), std::move(weights), std::move(arrivals));
    log.total_seconds = seconds_since(start);
    ens.log() = std::move(log);
    return ens;
}

// Keeps candidates within `retention` of the best accuracy, uniform weights.
Ensemble retain_within_best(const Dataset& train, const EnsembleConfig& config, std::vector<IndividualBoss> cands,
                            const std::vector<std::size_t>& cand_arrivals, BuildLog log, Clock::time_point start) {
    double best = 0.0;
    for (const auto& c : cands) best = std::max(best, c.train_accuracy());
    std::vector<IndividualBoss> kept;
    std::vector<std::size_t> arrivals;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        if (cands[i].train_accuracy() >= config.retention * best) {
            kept.push_back(std::move(cands[i]));
            arrivals.push_back(cand_arrivals[i]);
        }
    }
    std::vector<double> weights(kept.size(), 1.0);
    Ensemble ens(config, train.class_names, train.length(), std::move(kept), std::move(weights), std::move(arrivals));
    log.total_seconds = seconds_since(start);
    ens.log() = std::move(log);
    return ens;
}

} // namespace

std::string_view to_string(Variant v) noexcept {
    switch (v) {
        case Variant::BOSS: return "BOSS";
        case Variant::cBOSS: return "cBOSS";
        case Variant::SBOSS: return "S-BOSS";
        case Variant::cSBOSS: return "cS-BOSS";
        case Variant::TDE: return "TDE";
    }
    return "?";
}

Variant parse_variant(std::string_view name) {
    std::string key;
    for (char ch : name) {
        if (ch != '-' && ch != '_') key += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    if (key == "boss") return Variant::BOSS;
    if (key == "cboss") return Variant::cBOSS;
    if (key == "sboss") return Variant::SBOSS;
    if (key == "csboss") return Variant::cSBOSS;
    if (key == "tde") return Variant::TDE;
    throw Error(ErrorCode::InvalidArgument, "unknown classifier variant '" + std::string(name) + "'");
}

void EnsembleConfig::validate() const {
    if (s < 1) throw Error(ErrorCode::InvalidArgument, "ensemble size s must be at least 1");
    if (!time_contract && s > k) throw Error(ErrorCode::InvalidArgument, "ensemble size s must not exceed k");
    if (!(subsample_proportion > 0.0 && subsample_proportion <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "subsample proportion must lie in (0, 1]");
    }
    if (max_levels < 1 || max_levels > 3) throw Error(ErrorCode::InvalidArgument, "max pyramid height must be 1..3");
    if (word_lengths.empty()) throw Error(ErrorCode::InvalidArgument, "no word lengths given");
    for (int l : word_lengths) {
        if (l < 2 || l > 16 || l % 2 != 0) throw Error(ErrorCode::InvalidArgument, "word lengths must be even, 2..16");
    }
    if (time_contract && time_contract->count() < 0) throw Error(ErrorCode::InvalidArgument, "negative contract");
}

Ensemble::Ensemble(EnsembleConfig config, std::vector<std::string> class_names, std::size_t series_length,
                   std::vector<IndividualBoss> members, std::vector<double> weights, std::vector<std::size_t> arrivals)
    : config_(std::move(config)),
      class_names_(std::move(class_names)),
      series_length_(series_length),
      members_(std::move(members)),
      weights_(std::move(weights)),
      arrivals_(std::move(arrivals)) {
    if (weights_.size() != members_.size()) throw Error(ErrorCode::InvalidArgument, "one weight per member required");
    if (arrivals_.empty()) {
        for (std::size_t i = 0; i < members_.size(); ++i) arrivals_.push_back(i);
    }
}

Prediction Ensemble::predict(std::span<const double> series) const {
    if (members_.empty()) throw Error(ErrorCode::InvalidArgument, "empty ensemble");
    if (series.size() != series_length_) {
        throw Error(ErrorCode::SeriesLengthMismatch, "expected series of length " + std::to_string(series_length_) +
                                                         ", got " + std::to_string(series.size()));
    }
    std::vector<ClassId> votes(members_.size());
    for (std::size_t i = 0; i < members_.size(); ++i) votes[i] = members_[i].predict(series);

    Prediction out;
    out.distribution.assign(class_names_.size(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < votes.size(); ++i) {
        out.distribution[static_cast<std::size_t>(votes[i])] += weights_[i];
        total += weights_[i];
    }
    if (!(total > 0.0)) {
        std::fill(out.distribution.begin(), out.distribution.end(), 0.0);
        for (ClassId v : votes) out.distribution[static_cast<std::size_t>(v)] += 1.0;
        total = static_cast<double>(votes.size());
    }
    for (double& p : out.distribution) p /= total;
    out.label = static_cast<ClassId>(std::max_element(out.distribution.begin(), out.distribution.end()) -
                                     out.distribution.begin());
    return out;
}

double Ensemble::train_accuracy_estimate() const noexcept {
    if (members_.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& m : members_) sum += m.train_accuracy();
    return sum / static_cast<double>(members_.size());
}

std::vector<int> boss_window_grid(std::size_t m) {
    const int len = static_cast<int>(m);
    if (len < 10) return {len};
    const int count = len / 4;
    std::vector<int> grid;
    if (count <= 1) return {10};
    for (int i = 0; i < count; ++i) {
        // Round-half-up of 10 + i (m - 10) / (count - 1).
        const int w = 10 + (i * (len - 10) * 2 + (count - 1)) / (2 * (count - 1));
        if (grid.empty() || grid.back() != w) grid.push_back(w);
    }
    return grid;
}

std::vector<IndividualParams> parameter_space(const EnsembleConfig& config, std::size_t m) {
    const int len = static_cast<int>(m);
    const int min_window = std::min(10, len);
    const auto binnings = binnings_for(config);
    const int levels = max_levels_for(config);
    const bool bigrams = bigrams_for(config);
    std::vector<IndividualParams> out;
    for (int l : config.word_lengths) {
        for (int w = min_window; w <= len; ++w) {
            for (bool p : {true, false}) {
                for (int h = 1; h <= levels; ++h) {
                    for (Binning b : binnings) {
                        IndividualParams ip{{l, 4, w, p, b}, h, bigrams};
                        if (legal(ip.sfa, m)) out.push_back(ip);
                    }
                }
            }
        }
    }
    return out;
}

Ensemble build_ensemble(const Dataset& train, const EnsembleConfig& config) {
    switch (config.variant) {
        case Variant::BOSS: return build_boss_ensemble(train, config);
        case Variant::cBOSS: return build_cboss(train, config);
        case Variant::SBOSS: return build_sboss(train, config);
        case Variant::cSBOSS: return build_csboss(train, config);
        case Variant::TDE: return build_tde(train, config);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown variant");
}

Ensemble build_tde(const Dataset& train, const EnsembleConfig& config) {
    if (config.variant != Variant::TDE) throw Error(ErrorCode::InvalidArgument, "build_tde needs variant TDE");
    return build_contracted(train, config);
}

Ensemble build_cboss(const Dataset& train, const EnsembleConfig& config) {
    if (config.variant != Variant::cBOSS) throw Error(ErrorCode::InvalidArgument, "build_cboss needs variant cBOSS");
    return build_contracted(train, config);
}

Ensemble build_csboss(const Dataset& train, const EnsembleConfig& config) {
    if (config.variant != Variant::cSBOSS) {
        throw Error(ErrorCode::InvalidArgument, "build_csboss needs variant cS-BOSS");
    }
    return build_contracted(train, config);
}

Ensemble build_boss_ensemble(const Dataset& train, const EnsembleConfig& config) {
    train.validate();
    const auto start = Clock::now();
    const std::size_t m = train.length();
    const DistanceKind distance = config.distance.value_or(DistanceKind::Boss);
    std::vector<IndividualBoss> cands;
    std::vector<std::size_t> cand_arrivals;
    BuildLog log;
    double best = 0.0;
    std::size_t arrival = 0;
    for (int w : boss_window_grid(m)) {
        for (int l : config.word_lengths) {
            for (bool p : {true, false}) {
                IndividualParams ip{{l, 4, w, p, Binning::MCB}, 1, false};
                if (!legal(ip.sfa, m)) continue;
                const auto t0 = Clock::now();
                IndividualBoss cls = IndividualBoss::build(train, ip, distance);
                log.candidates.push_back({arrival, ip, cls.train_accuracy(), seconds_since(t0)});
                // Candidates already below the retention line can never come back.
                if (cls.train_accuracy() >= config.retention * best) {
                    best = std::max(best, cls.train_accuracy());
                    cands.push_back(std::move(cls));
                    cand_arrivals.push_back(arrival);
                }
                ++arrival;
            }
        }
    }
    if (cands.empty()) throw Error(ErrorCode::NoLegalParameters, "no legal parameter combinations");
    return retain_within_best(train, config, std::move(cands), cand_arrivals, std::move(log), start);
}

Ensemble build_sboss(const Dataset& train, const EnsembleConfig& config) {
    train.validate();
    const auto start = Clock::now();
    const std::size_t m = train.length();
    const DistanceKind distance = config.distance.value_or(DistanceKind::HistogramIntersection);
    const auto windows = boss_window_grid(m);
    std::vector<IndividualBoss> winners;
    std::vector<std::size_t> winner_arrivals;
    BuildLog log;
    std::size_t arrival = 0;

    for (int l : config.word_lengths) {
        std::optional<IndividualBoss> best;
        std::size_t best_arrival = 0;
        for (int w : windows) {
            for (bool p : {true, false}) {
                IndividualParams ip{{l, 4, w, p, Binning::MCB}, 1, false};
                if (!legal(ip.sfa, m)) continue;
                const auto t0 = Clock::now();
                IndividualBoss cls = IndividualBoss::build(train, ip, distance);
                log.candidates.push_back({arrival, ip, cls.train_accuracy(), seconds_since(t0)});
                if (!best || cls.train_accuracy() > best->train_accuracy()) {
                    best = std::move(cls);
                    best_arrival = arrival;
                }
                ++arrival;
            }
        }
        if (!best) continue;
        const IndividualBoss base = *best;
        for (int h = 2; h <= config.max_levels; ++h) {
            const auto t0 = Clock::now();
            IndividualBoss cls = base.with_levels(train, h);
            log.candidates.push_back({arrival, cls.params(), cls.train_accuracy(), seconds_since(t0)});
            if (cls.train_accuracy() > best->train_accuracy()) {
                best = std::move(cls);
                best_arrival = arrival;
            }
            ++arrival;
        }
        winners.push_back(std::move(*best));
        winner_arrivals.push_back(best_arrival);
    }
    if (winners.empty()) throw Error(ErrorCode::NoLegalParameters, "no legal parameter combinations");
    return retain_within_best(train, config, std::move(winners), winner_arrivals, std::move(log), start);
}

} // namespace tde
