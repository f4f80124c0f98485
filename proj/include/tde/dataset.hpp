#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tde {

using Series = std::vector<double>;
using ClassId = int;

/// A labelled collection of equal-length univariate series.
///
/// Labels are stored as dense ids into `class_names`; the textual label of
/// case i is `class_names[labels[i]]`.
struct Dataset {
    std::string name;
    std::vector<Series> series;
    std::vector<ClassId> labels;
    std::vector<std::string> class_names;

    [[nodiscard]] std::size_t size() const noexcept { return series.size(); }
    [[nodiscard]] std::size_t length() const noexcept { return series.empty() ? 0 : series.front().size(); }
    [[nodiscard]] std::size_t num_classes() const noexcept { return class_names.size(); }

    /// Number of cases per class id.
    [[nodiscard]] std::vector<std::size_t> class_counts() const;

    /// Cases at `indices`, in that order, sharing this dataset's class table.
    [[nodiscard]] Dataset select(std::span<const std::size_t> indices) const;

    /// Throws if the structural invariants (n >= 1, equal lengths, labels in
    /// range) do not hold.
    void validate() const;

    bool operator==(const Dataset&) const = default;
};

Dataset parse_ts(std::string_view text, std::string name = {});
Dataset load_ts(const std::filesystem::path& path);

/// Serialises in the `.ts` layout accepted by parse_ts. Values are written
/// with enough digits to round-trip exactly.
std::string write_ts(const Dataset& data);
void save_ts(const Dataset& data, const std::filesystem::path& path);

/// Debug export: one case per row, label text in the final column.
std::string write_csv(const Dataset& data);

/// Rewrites both datasets onto one shared class table (the union, with
/// `a`'s classes first in their existing order).
void harmonise_classes(Dataset& a, Dataset& b);

/// Pools train and test and redraws a split with the original per-class
/// counts. Resample 0 is the original split.
std::pair<Dataset, Dataset> stratified_resample(const Dataset& train, const Dataset& test,
                                                std::uint64_t resample_id, std::uint64_t seed);

/// Indices of ceil(proportion * n) distinct cases drawn without replacement.
std::vector<std::size_t> subsample_indices(std::size_t n, double proportion, std::uint64_t seed);

Dataset subsample_train(const Dataset& train, double proportion, std::uint64_t seed);

} // namespace tde
