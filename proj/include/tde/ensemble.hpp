#pragma once

#include "tde/dataset.hpp"
#include "tde/dictionary.hpp"
#include "tde/gp.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tde {

enum class Variant : std::uint8_t { BOSS, cBOSS, SBOSS, cSBOSS, TDE };

std::string_view to_string(Variant v) noexcept;
/// Case-insensitive; accepts "boss", "cboss", "sboss"/"s-boss", "csboss"/"cs-boss", "tde".
Variant parse_variant(std::string_view name);

using Seconds = std::chrono::duration<double>;

struct EnsembleConfig {
    Variant variant = Variant::TDE;
    std::size_t k = 250; ///< parameter samples; ignored when a time contract is set
    std::size_t s = 50;  ///< maximum ensemble size
    std::optional<Seconds> time_contract;
    std::uint64_t seed = 0;
    double subsample_proportion = 0.7;

    std::vector<int> word_lengths{16, 14, 12, 10, 8};
    int max_levels = 3;
    /// Empty means the variant default (MCB, plus IGB for TDE).
    std::vector<Binning> binnings;
    /// Unset means the variant default (on for TDE only).
    std::optional<bool> bigrams;
    /// Unset means the variant default.
    std::optional<DistanceKind> distance;

    bool use_gp = true;
    bool tune_gp = false;
    GpHyperparameters gp;
    std::size_t random_warmup = 50;

    double retention = 0.92; ///< grid ensembles keep members within this fraction of the best

    void validate() const;
};

/// One evaluated parameter set, in evaluation order.
struct CandidateRecord {
    std::size_t arrival = 0;
    IndividualParams params;
    double accuracy = 0.0;
    double seconds = 0.0; ///< parameter choice plus member build
};

struct BuildLog {
    std::vector<CandidateRecord> candidates;
    double total_seconds = 0.0;
    bool contract_reached = false;
};

struct Prediction {
    ClassId label = 0;
    std::vector<double> distribution;
};

class Ensemble {
public:
    Ensemble() = default;
    Ensemble(EnsembleConfig config, std::vector<std::string> class_names, std::size_t series_length,
             std::vector<IndividualBoss> members, std::vector<double> weights,
             std::vector<std::size_t> arrivals = {});

    /// Weighted vote: each member adds its weight to the class of its
    /// nearest neighbour; the distribution is normalised and the argmax
    /// (lowest class id on ties) returned. All-zero weights fall back to
    /// plain votes.
    [[nodiscard]] Prediction predict(std::span<const double> series) const;

    [[nodiscard]] const EnsembleConfig& config() const noexcept { return config_; }
    [[nodiscard]] const std::vector<std::string>& class_names() const noexcept { return class_names_; }
    [[nodiscard]] std::size_t series_length() const noexcept { return series_length_; }
    [[nodiscard]] const std::vector<IndividualBoss>& members() const noexcept { return members_; }
    [[nodiscard]] const std::vector<double>& weights() const noexcept { return weights_; }
    /// Candidate arrival index of each member (position in the build log).
    [[nodiscard]] const std::vector<std::size_t>& arrivals() const noexcept { return arrivals_; }
    [[nodiscard]] const BuildLog& log() const noexcept { return log_; }
    BuildLog& log() noexcept { return log_; }

    /// Mean leave-one-out accuracy of the retained members.
    [[nodiscard]] double train_accuracy_estimate() const noexcept;

private:
    EnsembleConfig config_;
    std::vector<std::string> class_names_;
    std::size_t series_length_ = 0;
    std::vector<IndividualBoss> members_;
    std::vector<double> weights_;
    std::vector<std::size_t> arrivals_;
    BuildLog log_;
};

/// Evenly spaced window lengths for the grid ensembles: floor(m/4) values
/// from 10 to m inclusive, deduplicated; just {m} when m < 10.
std::vector<int> boss_window_grid(std::size_t m);

/// Candidate set R for the randomised/GP ensembles, in a fixed enumeration
/// order (word length, window, normalise, height, binning).
std::vector<IndividualParams> parameter_space(const EnsembleConfig& config, std::size_t m);

Ensemble build_ensemble(const Dataset& train, const EnsembleConfig& config);
Ensemble build_tde(const Dataset& train, const EnsembleConfig& config);
Ensemble build_cboss(const Dataset& train, const EnsembleConfig& config);
Ensemble build_csboss(const Dataset& train, const EnsembleConfig& config);
Ensemble build_boss_ensemble(const Dataset& train, const EnsembleConfig& config = {.variant = Variant::BOSS});
Ensemble build_sboss(const Dataset& train, const EnsembleConfig& config = {.variant = Variant::SBOSS});

/// Self-describing CBOR container with config, members (parameters,
/// breakpoints, bags, labels) and weights.
std::vector<std::uint8_t> serialize(const Ensemble& ensemble);
Ensemble deserialize(std::span<const std::uint8_t> bytes);
void save_model(const Ensemble& ensemble, const std::filesystem::path& path);
Ensemble load_model(const std::filesystem::path& path);

} // namespace tde
