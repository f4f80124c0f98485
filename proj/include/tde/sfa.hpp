#pragma once

#include "tde/dataset.hpp"

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace tde {

enum class Binning : std::uint8_t { MCB = 0, IGB = 1 };

std::string_view to_string(Binning b) noexcept;

struct SfaParameters {
    int word_length = 8;
    int alphabet_size = 4;
    int window_length = 10;
    bool normalise = true;
    Binning binning = Binning::MCB;

    /// Number of complex DFT coefficients needed in a window, counting the
    /// dropped DC term when normalising.
    [[nodiscard]] int required_window() const noexcept { return word_length / 2 + (normalise ? 1 : 0); }

    /// Throws InvalidArgument / InsufficientWindow / SeriesTooShort.
    void validate(std::size_t series_length) const;

    auto operator<=>(const SfaParameters&) const = default;
};

/// Packed symbolic word. Letters use two bits each (alphabet size <= 4,
/// word length <= 16), first letter in the most significant position. A
/// bigram keeps the preceding word in the upper 32 bits. The tag records
/// the bigram flag and the pyramid region; level 1 (the whole series) has a
/// zero region tag so unpyramided bags and level-1 sub-bags coincide.
struct SfaWord {
    std::uint64_t letters = 0;
    std::uint32_t tag = 0;

    static constexpr std::uint32_t kBigramBit = 1u;

    [[nodiscard]] bool is_bigram() const noexcept { return (tag & kBigramBit) != 0; }
    /// 1-based pyramid level.
    [[nodiscard]] int level() const noexcept { return static_cast<int>((tag >> 1) & 0x3u) + 1; }
    [[nodiscard]] int region() const noexcept { return static_cast<int>((tag >> 3) & 0x7u); }

    [[nodiscard]] SfaWord with_region(int level, int region) const noexcept;
    static SfaWord bigram(std::uint32_t previous, std::uint32_t current) noexcept;

    auto operator<=>(const SfaWord&) const = default;
};

/// Unpacks the letters of a unigram word.
std::vector<int> unpack_letters(std::uint32_t packed, int word_length);

/// Per coefficient position, the alpha-1 interior thresholds in
/// non-decreasing order (the outer bounds are implicitly +-infinity).
struct BreakpointTable {
    int alphabet_size = 4;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t word_length() const noexcept { return rows.size(); }

    bool operator==(const BreakpointTable&) const = default;
};

struct BagEntry {
    SfaWord word;
    std::int32_t count = 0;

    bool operator==(const BagEntry&) const = default;
};

/// Sparse word histogram, kept sorted by word so distances are merge joins.
class Bag {
public:
    Bag() = default;

    /// Builds from arbitrary (possibly repeated, unsorted) entries; counts
    /// of equal words are summed and zero counts dropped.
    static Bag from_entries(std::vector<BagEntry> entries);

    [[nodiscard]] std::int32_t count(const SfaWord& word) const noexcept;
    [[nodiscard]] std::int64_t total() const noexcept;
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
    [[nodiscard]] std::span<const BagEntry> entries() const noexcept { return entries_; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    bool operator==(const Bag&) const = default;

private:
    std::vector<BagEntry> entries_;
};

/// Word produced by the window starting at `start`.
struct WordAt {
    std::size_t start = 0;
    std::uint32_t word = 0;

    bool operator==(const WordAt&) const = default;
};

/// Truncated DFT of one window, interleaved (re, im, re, im, ...). With
/// `normalise` the window is z-normalised first and the DC term skipped.
std::vector<double> window_dft(std::span<const double> window, int word_length, bool normalise);

/// window_dft for every window of `series`, computed incrementally
/// (momentary Fourier transform) with periodic direct resynchronisation.
std::vector<std::vector<double>> sliding_dft(std::span<const double> series, int window_length, int word_length,
                                             bool normalise);

/// Equal-frequency breakpoints per coefficient column.
BreakpointTable mcb_fit(const std::vector<std::vector<double>>& coefficients, int alphabet_size);

/// Supervised breakpoints by greedy information-gain splitting per column.
BreakpointTable igb_fit(const std::vector<std::vector<double>>& coefficients, std::span<const ClassId> labels,
                        int alphabet_size);

/// Letter i counts the breakpoints of row i strictly below coeffs[i].
std::uint32_t discretise(std::span<const double> coeffs, const BreakpointTable& breakpoints);

struct BagOptions {
    bool numerosity_reduction = true;
    bool bigrams = false;
};

/// Words of every sliding window, before numerosity reduction.
std::vector<WordAt> word_sequence(std::span<const double> series, const SfaParameters& params,
                                  const BreakpointTable& breakpoints);

/// Unigram bag (with numerosity reduction) plus, optionally, bigrams of
/// words from windows exactly one window length apart.
Bag bag_from_words(std::span<const WordAt> words, std::size_t window_length, BagOptions options = {});

Bag series_to_bag(std::span<const double> series, const SfaParameters& params, const BreakpointTable& breakpoints,
                  bool use_bigrams);

/// A fitted SFA transform: parameters plus breakpoints learnt from the
/// windows of a training set.
class SfaTransform {
public:
    SfaTransform() = default;
    SfaTransform(SfaParameters params, BreakpointTable breakpoints)
        : params_(params), breakpoints_(std::move(breakpoints)) {}

    /// Fits breakpoints on all windows of the training series. IGB uses the
    /// labels (each window inherits its series' class); MCB ignores them.
    static SfaTransform fit(std::span<const Series> series, std::span<const ClassId> labels,
                            const SfaParameters& params);

    /// Fit and return the training word sequences computed along the way.
    static SfaTransform fit(std::span<const Series> series, std::span<const ClassId> labels,
                            const SfaParameters& params, std::vector<std::vector<WordAt>>* train_words);

    [[nodiscard]] std::vector<WordAt> words(std::span<const double> series) const;

    [[nodiscard]] const SfaParameters& params() const noexcept { return params_; }
    [[nodiscard]] const BreakpointTable& breakpoints() const noexcept { return breakpoints_; }

private:
    SfaParameters params_;
    BreakpointTable breakpoints_;
};

} // namespace tde
