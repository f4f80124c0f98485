#pragma once

#include "tde/dataset.hpp"
#include "tde/sfa.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tde {

enum class DistanceKind : std::uint8_t { Boss = 0, HistogramIntersection = 1 };

std::string_view to_string(DistanceKind d) noexcept;

/// Transform parameters of one ensemble member.
struct IndividualParams {
    SfaParameters sfa;
    int levels = 1;       ///< spatial pyramid height, 1..3
    bool bigrams = false;

    auto operator<=>(const IndividualParams&) const = default;
};

/// Asymmetric BOSS distance: squared count differences over the words
/// present in `test` only.
double boss_distance(const Bag& test, const Bag& train);

/// Sum over words of the smaller count. A similarity: larger is closer.
std::int64_t histogram_intersection(const Bag& a, const Bag& b);

/// Spatial pyramid bag. Level l splits [0, m) into 2^(l-1) equal regions;
/// each window goes to the region holding its start index, numerosity
/// reduction runs within each region, and level-l counts are multiplied
/// by 2^(l-1). Level 1 is the plain bag.
Bag pyramid_bags(std::span<const WordAt> words, std::size_t series_length, int levels);

/// Pyramid bag plus (optionally) whole-series bigrams at level-1 weight.
Bag member_bag(std::span<const WordAt> words, std::size_t series_length, const IndividualParams& params);

/// One parameterised dictionary classifier: a fitted SFA transform, the
/// bags of its training cases and a 1-NN rule over them.
class IndividualBoss {
public:
    IndividualBoss() = default;

    /// Reassembles a classifier from stored parts (model loading).
    IndividualBoss(IndividualParams params, DistanceKind distance, SfaTransform transform, std::vector<Bag> train_bags,
                   std::vector<ClassId> train_labels, std::size_t series_length, double train_accuracy);

    /// Fits the transform on `train`, bags every case and sets the
    /// leave-one-out train accuracy.
    static IndividualBoss build(const Dataset& train, const IndividualParams& params, DistanceKind distance);

    /// Same transform and breakpoints, rebagged at a different pyramid height.
    [[nodiscard]] IndividualBoss with_levels(const Dataset& train, int levels) const;

    [[nodiscard]] Bag bag_of(std::span<const double> series) const;

    /// Index of the nearest training bag (ties to the lowest index), or
    /// nullopt when no candidate remains after excluding `exclude`.
    [[nodiscard]] std::optional<std::size_t> nearest(const Bag& query,
                                                     std::optional<std::size_t> exclude = std::nullopt) const;

    [[nodiscard]] ClassId predict(std::span<const double> series) const;

    [[nodiscard]] const IndividualParams& params() const noexcept { return params_; }
    [[nodiscard]] DistanceKind distance() const noexcept { return distance_; }
    [[nodiscard]] const SfaTransform& transform() const noexcept { return transform_; }
    [[nodiscard]] const std::vector<Bag>& train_bags() const noexcept { return train_bags_; }
    [[nodiscard]] const std::vector<ClassId>& train_labels() const noexcept { return train_labels_; }
    [[nodiscard]] std::size_t series_length() const noexcept { return series_length_; }
    [[nodiscard]] double train_accuracy() const noexcept { return train_accuracy_; }

private:
    IndividualParams params_;
    DistanceKind distance_ = DistanceKind::Boss;
    SfaTransform transform_;
    std::vector<Bag> train_bags_;
    std::vector<ClassId> train_labels_;
    std::size_t series_length_ = 0;
    double train_accuracy_ = 0.0;
};

/// Leave-one-out 1-NN accuracy over the classifier's own training bags.
/// A single training case has no neighbour and scores 0.
double loocv_accuracy(const IndividualBoss& cls);

} // namespace tde
