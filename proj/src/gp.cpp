#include "tde/gp.hpp"

#include "tde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tde {

namespace {

double unit_scale(int value, int lo, int hi, const char* what) {
    if (value < lo || value > hi) {
        throw Error(ErrorCode::EncodingError, std::string(what) + " " + std::to_string(value) + " outside [" +
                                                  std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (hi == lo) return 0.0;
    return static_cast<double>(value - lo) / static_cast<double>(hi - lo);
}

} // namespace

ParameterBounds ParameterBounds::for_series_length(std::size_t m) {
    ParameterBounds b;
    const int len = static_cast<int>(m);
    b.max_window = len;
    b.min_window = std::min(10, len);
    return b;
}

EncodedParams encode_params(const IndividualParams& params, const ParameterBounds& bounds) {
    if (params.sfa.alphabet_size != 4) {
        throw Error(ErrorCode::EncodingError, "alphabet size is fixed at 4");
    }
    return {
        unit_scale(params.sfa.word_length, bounds.min_word_length, bounds.max_word_length, "word length"),
        0.0,
        unit_scale(params.sfa.window_length, bounds.min_window, bounds.max_window, "window length"),
        params.sfa.normalise ? 1.0 : 0.0,
        unit_scale(params.levels, bounds.min_levels, bounds.max_levels, "pyramid height"),
        params.sfa.binning == Binning::IGB ? 1.0 : 0.0,
    };
}

double squared_exponential(std::span<const double> a, std::span<const double> b, const GpHyperparameters& hp) {
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return hp.signal_variance * std::exp(-sq / (2.0 * hp.length_scale * hp.length_scale));
}

GpModel GpModel::fit(const std::vector<std::vector<double>>& inputs, std::span<const double> targets,
                     const GpHyperparameters& hp) {
    if (inputs.empty()) throw Error(ErrorCode::InvalidArgument, "GP needs at least one training point");
    if (inputs.size() != targets.size()) throw Error(ErrorCode::InvalidArgument, "one target per GP input required");
    const std::size_t dim = inputs.front().size();
    for (const auto& x : inputs) {
        if (x.size() != dim) throw Error(ErrorCode::InvalidArgument, "GP inputs differ in dimension");
    }
    if (!(hp.length_scale > 0.0) || hp.signal_variance < 0.0 || hp.noise_variance < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "invalid GP hyperparameters");
    }

    const auto n = static_cast<Eigen::Index>(inputs.size());
    if (hp.noise_variance == 0.0) {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            for (std::size_t j = i + 1; j < inputs.size(); ++j) {
                if (inputs[i] == inputs[j]) {
                    throw Error(ErrorCode::SingularKernel, "duplicate inputs with zero noise");
                }
            }
        }
    }

    GpModel model;
    model.inputs_ = inputs;
    model.hp_ = hp;
    double sum = 0.0;
    for (double t : targets) sum += t;
    model.prior_mean_ = sum / static_cast<double>(targets.size());

    model.kernel_.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double k = squared_exponential(inputs[static_cast<std::size_t>(i)],
                                                 inputs[static_cast<std::size_t>(j)], hp);
            model.kernel_(i, j) = k;
            model.kernel_(j, i) = k;
        }
    }

    Eigen::MatrixXd a = model.kernel_;
    a.diagonal().array() += hp.noise_variance;
    model.chol_.compute(a);
    if (model.chol_.info() != Eigen::Success) {
        a.diagonal().array() += 1e-10;
        model.chol_.compute(a);
        if (model.chol_.info() != Eigen::Success) {
            throw Error(ErrorCode::SingularKernel, "covariance matrix is not positive definite");
        }
    }

    Eigen::VectorXd centred(n);
    for (Eigen::Index i = 0; i < n; ++i) centred(i) = targets[static_cast<std::size_t>(i)] - model.prior_mean_;
    model.weights_ = model.chol_.solve(centred);

    const Eigen::MatrixXd l = model.chol_.matrixL();
    double log_det_half = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) log_det_half += std::log(l(i, i));
    model.log_likelihood_ = -0.5 * centred.dot(model.weights_) - log_det_half -
                            0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    return model;
}

double GpModel::predict_mean(std::span<const double> x) const {
    double mean = prior_mean_;
    for (std::size_t i = 0; i < inputs_.size(); ++i) {
        mean += squared_exponential(x, inputs_[i], hp_) * weights_(static_cast<Eigen::Index>(i));
    }
    return mean;
}

GpPrediction GpModel::predict(std::span<const double> x) const {
    if (x.size() != inputs_.front().size()) throw Error(ErrorCode::InvalidArgument, "query dimension mismatch");
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    Eigen::VectorXd k_star(n);
    for (Eigen::Index i = 0; i < n; ++i) k_star(i) = squared_exponential(x, inputs_[static_cast<std::size_t>(i)], hp_);

    GpPrediction out;
    out.mean = prior_mean_ + k_star.dot(weights_);
    const Eigen::VectorXd v = chol_.matrixL().solve(k_star);
    out.raw_variance = squared_exponential(x, x, hp_) - v.squaredNorm();
    out.variance = std::max(0.0, out.raw_variance);
    return out;
}

GpHyperparameters tune_hyperparameters(const std::vector<std::vector<double>>& inputs,
                                       std::span<const double> targets, const GpHyperparameters& base) {
    static constexpr std::array kLengthScales{0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 1.5, 2.0};
    static constexpr std::array kNoise{1e-4, 1e-3, 1e-2, 0.05, 0.1};
    GpHyperparameters best = base;
    double best_ll = -std::numeric_limits<double>::infinity();
    for (double ls : kLengthScales) {
        for (double noise : kNoise) {
            GpHyperparameters hp{ls, base.signal_variance, noise};
            try {
                const double ll = GpModel::fit(inputs, targets, hp).log_marginal_likelihood();
                if (ll > best_ll) {
                    best_ll = ll;
                    best = hp;
                }
            } catch (const Error&) {
                continue;
            }
        }
    }
    return best;
}

std::size_t choose_parameters(std::span<const IndividualParams> remaining, std::span<const ParamRecord> history,
                              std::size_t iteration, Rng& rng, const ChooserSettings& settings) {
    if (remaining.empty()) throw Error(ErrorCode::InvalidArgument, "no parameter sets left to choose from");
    if (!settings.use_gp || iteration < settings.random_warmup || history.empty()) {
        return uniform_index(rng, remaining.size());
    }

    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    inputs.reserve(history.size());
    for (const auto& rec : history) {
        auto e = encode_params(rec.params, settings.bounds);
        inputs.emplace_back(e.begin(), e.end());
        targets.push_back(rec.accuracy);
    }
    const GpHyperparameters hp =
        settings.tune ? tune_hyperparameters(inputs, targets, settings.hyperparameters) : settings.hyperparameters;
    const GpModel gp = GpModel::fit(inputs, targets, hp);

    std::vector<EncodedParams> encoded(remaining.size());
    std::vector<double> means(remaining.size());
    double best_mean = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        encoded[i] = encode_params(remaining[i], settings.bounds);
        means[i] = gp.predict_mean(encoded[i]);
        best_mean = std::max(best_mean, means[i]);
    }
    std::size_t chosen = remaining.size();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        if (means[i] < best_mean - kMeanTieTolerance) continue;
        if (chosen == remaining.size() || encoded[i] < encoded[chosen]) chosen = i;
    }
    return chosen;
}

} // namespace tde
