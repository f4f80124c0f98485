#pragma once

#include "tde/dictionary.hpp"
#include "tde/random.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tde {

inline constexpr std::size_t kEncodedDims = 6;
using EncodedParams = std::array<double, kEncodedDims>;

/// Candidate ranges used for unit scaling: word length 8..16, window
/// 10..m, pyramid height 1..3.
struct ParameterBounds {
    int min_word_length = 8;
    int max_word_length = 16;
    int min_window = 10;
    int max_window = 10;
    int min_levels = 1;
    int max_levels = 3;

    static ParameterBounds for_series_length(std::size_t m);
};

/// Min-max scales [l, alpha, w, p, h, b] into [0,1]^6. The alphabet size is
/// fixed, so its coordinate is always 0.
EncodedParams encode_params(const IndividualParams& params, const ParameterBounds& bounds);

struct ParamRecord {
    IndividualParams params;
    double accuracy = 0.0;
};

struct GpHyperparameters {
    double length_scale = 0.5;
    double signal_variance = 1.0;
    double noise_variance = 0.05;
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;     ///< clamped at zero
    double raw_variance = 0.0; ///< before clamping
};

double squared_exponential(std::span<const double> a, std::span<const double> b, const GpHyperparameters& hp);

/// GP regression with a squared-exponential kernel and constant prior mean
/// equal to the mean of the targets.
class GpModel {
public:
    static GpModel fit(const std::vector<std::vector<double>>& inputs, std::span<const double> targets,
                       const GpHyperparameters& hp = {});

    [[nodiscard]] GpPrediction predict(std::span<const double> x) const;
    [[nodiscard]] double predict_mean(std::span<const double> x) const;

    [[nodiscard]] const Eigen::MatrixXd& kernel_matrix() const noexcept { return kernel_; }
    [[nodiscard]] double prior_mean() const noexcept { return prior_mean_; }
    [[nodiscard]] const GpHyperparameters& hyperparameters() const noexcept { return hp_; }
    [[nodiscard]] std::size_t size() const noexcept { return inputs_.size(); }

    /// Log marginal likelihood of the centred targets.
    [[nodiscard]] double log_marginal_likelihood() const noexcept { return log_likelihood_; }

private:
    std::vector<std::vector<double>> inputs_;
    GpHyperparameters hp_;
    double prior_mean_ = 0.0;
    Eigen::MatrixXd kernel_;           // K, without the noise term
    Eigen::LLT<Eigen::MatrixXd> chol_; // of K + noise * I
    Eigen::VectorXd weights_;          // (K + noise I)^-1 (y - prior_mean)
    double log_likelihood_ = 0.0;
};

/// Grid search over length scale and noise maximising the marginal
/// likelihood; signal variance is fixed from the supplied defaults.
GpHyperparameters tune_hyperparameters(const std::vector<std::vector<double>>& inputs,
                                       std::span<const double> targets, const GpHyperparameters& base = {});

struct ChooserSettings {
    ParameterBounds bounds;
    GpHyperparameters hyperparameters;
    std::size_t random_warmup = 50;
    bool use_gp = true;
    bool tune = false;
};

/// Index into `remaining` of the next parameter set to evaluate: uniformly
/// random during warm-up (or with the GP disabled), afterwards the argmax
/// of the GP mean fitted on `history`. Means within 1e-10 of the maximum
/// are tied and resolved by the lexicographically smallest encoding.
std::size_t choose_parameters(std::span<const IndividualParams> remaining, std::span<const ParamRecord> history,
                              std::size_t iteration, Rng& rng, const ChooserSettings& settings);

inline constexpr double kMeanTieTolerance = 1e-10;

} // namespace tde
