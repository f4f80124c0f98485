#include "tde/sfa.hpp"

#include "tde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace tde {

namespace {

constexpr std::size_t kResyncInterval = 64;

struct WindowStats {
    double mean = 0.0;
    double stdev = 0.0;
    bool constant = false;
};

// Two-pass mean/population standard deviation. Both DFT paths share this so
// they agree on which windows count as constant.
WindowStats window_stats(std::span<const double> window) {
    WindowStats st;
    const auto n = static_cast<double>(window.size());
    double sum = 0.0;
    for (double v : window) sum += v;
    st.mean = sum / n;
    double ss = 0.0;
    for (double v : window) ss += (v - st.mean) * (v - st.mean);
    st.stdev = std::sqrt(ss / n);
    st.constant = st.stdev <= 1e-10 * std::max(1.0, std::abs(st.mean));
    return st;
}

// Twiddle angle for bin k, sample n, reduced modulo w before scaling.
double twiddle(std::size_t k, std::size_t n, std::size_t w) {
    return 2.0 * std::numbers::pi * static_cast<double>((k * n) % w) / static_cast<double>(w);
}

void raw_dft(std::span<const double> window, std::size_t first_bin, std::size_t num_bins, double shift,
             double scale, std::span<double> out) {
    const std::size_t w = window.size();
    for (std::size_t b = 0; b < num_bins; ++b) {
        const std::size_t k = first_bin + b;
        double re = 0.0;
        double im = 0.0;
        for (std::size_t n = 0; n < w; ++n) {
            const double x = (window[n] - shift) * scale;
            const double a = twiddle(k, n, w);
            re += x * std::cos(a);
            im -= x * std::sin(a);
        }
        out[2 * b] = re;
        out[2 * b + 1] = im;
    }
}

void check_window(std::size_t w, int word_length, bool normalise) {
    if (word_length <= 0 || word_length % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument, "word length must be positive and even");
    }
    const auto needed = static_cast<std::size_t>(word_length / 2 + (normalise ? 1 : 0));
    if (w < needed) {
        throw Error(ErrorCode::InsufficientWindow, "window of length " + std::to_string(w) + " yields fewer than " +
                                                       std::to_string(needed) + " coefficients");
    }
}

double entropy(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0 || c == total) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

std::vector<double> equal_frequency(std::vector<double> values, int alphabet_size) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    std::vector<double> row;
    row.reserve(static_cast<std::size_t>(alphabet_size - 1));
    for (int b = 1; b < alphabet_size; ++b) {
        std::size_t idx = static_cast<std::size_t>(b) * n / static_cast<std::size_t>(alphabet_size);
        row.push_back(0.5 * (values[idx - 1] + values[idx]));
    }
    return row;
}

struct Split {
    double gain = 0.0;
    std::size_t position = 0; // first index of the right part
};

// Best information-gain split of sorted[begin, end) by prefix class counts.
Split best_split(const std::vector<std::pair<double, ClassId>>& sorted, std::size_t begin, std::size_t end,
                 std::size_t num_classes, std::size_t total) {
    Split best;
    const std::size_t size = end - begin;
    if (size < 2) return best;
    std::vector<std::size_t> all(num_classes, 0);
    for (std::size_t i = begin; i < end; ++i) ++all[static_cast<std::size_t>(sorted[i].second)];
    const double parent = entropy(all, size) * static_cast<double>(size);

    std::vector<std::size_t> left(num_classes, 0);
    std::vector<std::size_t> right = all;
    for (std::size_t i = begin + 1; i < end; ++i) {
        const auto c = static_cast<std::size_t>(sorted[i - 1].second);
        ++left[c];
        --right[c];
        if (!(sorted[i - 1].first < sorted[i].first)) continue;
        const std::size_t nl = i - begin;
        const std::size_t nr = end - i;
        const double children =
            entropy(left, nl) * static_cast<double>(nl) + entropy(right, nr) * static_cast<double>(nr);
        const double gain = (parent - children) / static_cast<double>(total);
        if (gain > best.gain + 1e-12) {
            best.gain = gain;
            best.position = i;
        }
    }
    return best;
}

std::vector<double> information_gain_row(const std::vector<double>& values, std::span<const ClassId> labels,
                                         int alphabet_size) {
    std::vector<std::pair<double, ClassId>> sorted(values.size());
    ClassId max_label = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sorted[i] = {values[i], labels[i]};
        max_label = std::max(max_label, labels[i]);
    }
    std::sort(sorted.begin(), sorted.end());
    const auto num_classes = static_cast<std::size_t>(max_label) + 1;
    const std::size_t n = sorted.size();

    std::vector<std::size_t> cuts; // split positions, ascending
    while (cuts.size() + 1 < static_cast<std::size_t>(alphabet_size)) {
        Split chosen;
        std::size_t begin = 0;
        for (std::size_t s = 0; s <= cuts.size(); ++s) {
            const std::size_t end = s < cuts.size() ? cuts[s] : n;
            Split candidate = best_split(sorted, begin, end, num_classes, n);
            // Segments are visited in value order, so ties keep the lowest split.
            if (candidate.gain > chosen.gain + 1e-12) chosen = candidate;
            begin = end;
        }
        if (chosen.gain <= 1e-12) break;
        cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), chosen.position), chosen.position);
    }

    if (cuts.empty()) return equal_frequency(values, alphabet_size);

    std::vector<double> row;
    for (std::size_t pos : cuts) row.push_back(0.5 * (sorted[pos - 1].first + sorted[pos].first));
    row.resize(static_cast<std::size_t>(alphabet_size - 1), std::numeric_limits<double>::infinity());
    return row;
}

void check_fit_input(const std::vector<std::vector<double>>& coefficients, int alphabet_size) {
    if (alphabet_size < 2) throw Error(ErrorCode::InvalidArgument, "alphabet size must be at least 2");
    if (coefficients.size() < static_cast<std::size_t>(alphabet_size)) {
        throw Error(ErrorCode::InvalidArgument, "fewer windows than letters in the alphabet");
    }
    const std::size_t cols = coefficients.front().size();
    for (const auto& row : coefficients) {
        if (row.size() != cols) throw Error(ErrorCode::InvalidArgument, "ragged coefficient matrix");
    }
}

std::vector<double> column(const std::vector<std::vector<double>>& coefficients, std::size_t j) {
    std::vector<double> out(coefficients.size());
    for (std::size_t i = 0; i < coefficients.size(); ++i) out[i] = coefficients[i][j];
    return out;
}

} // namespace

std::string_view to_string(Binning b) noexcept { return b == Binning::MCB ? "MCB" : "IGB"; }

void SfaParameters::validate(std::size_t series_length) const {
    if (word_length <= 0 || word_length > 16 || word_length % 2 != 0) {
        throw Error(ErrorCode::InvalidArgument, "word length must be even and in [2, 16]");
    }
    if (alphabet_size < 2 || alphabet_size > 4) {
        throw Error(ErrorCode::InvalidArgument, "alphabet size must be in [2, 4]");
    }
    if (window_length < 1) throw Error(ErrorCode::InvalidArgument, "window length must be positive");
    if (window_length < required_window()) {
        throw Error(ErrorCode::InsufficientWindow, "window too short for the word length");
    }
    if (series_length < static_cast<std::size_t>(window_length)) {
        throw Error(ErrorCode::SeriesTooShort, "series of length " + std::to_string(series_length) +
                                                   " is shorter than window " + std::to_string(window_length));
    }
}

SfaWord SfaWord::with_region(int level, int region) const noexcept {
    SfaWord out = *this;
    out.tag = (tag & kBigramBit) | (static_cast<std::uint32_t>(level - 1) & 0x3u) << 1 |
              (static_cast<std::uint32_t>(region) & 0x7u) << 3;
    return out;
}

SfaWord SfaWord::bigram(std::uint32_t previous, std::uint32_t current) noexcept {
    return SfaWord{(static_cast<std::uint64_t>(previous) << 32) | current, kBigramBit};
}

std::vector<int> unpack_letters(std::uint32_t packed, int word_length) {
    std::vector<int> out(static_cast<std::size_t>(word_length));
    for (int i = word_length - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<int>(packed & 0x3u);
        packed >>= 2;
    }
    return out;
}

Bag Bag::from_entries(std::vector<BagEntry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const BagEntry& a, const BagEntry& b) { return a.word < b.word; });
    Bag bag;
    for (const auto& e : entries) {
        if (!bag.entries_.empty() && bag.entries_.back().word == e.word) {
            bag.entries_.back().count += e.count;
        } else {
            bag.entries_.push_back(e);
        }
    }
    std::erase_if(bag.entries_, [](const BagEntry& e) { return e.count == 0; });
    return bag;
}

std::int32_t Bag::count(const SfaWord& word) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), word,
                               [](const BagEntry& e, const SfaWord& w) { return e.word < w; });
    return (it != entries_.end() && it->word == word) ? it->count : 0;
}

std::int64_t Bag::total() const noexcept {
    std::int64_t t = 0;
    for (const auto& e : entries_) t += e.count;
    return t;
}

std::vector<double> window_dft(std::span<const double> window, int word_length, bool normalise) {
    check_window(window.size(), word_length, normalise);
    const auto pairs = static_cast<std::size_t>(word_length / 2);
    std::vector<double> out(static_cast<std::size_t>(word_length), 0.0);
    if (normalise) {
        const WindowStats st = window_stats(window);
        if (st.constant) return out;
        raw_dft(window, 1, pairs, st.mean, 1.0 / st.stdev, out);
    } else {
        raw_dft(window, 0, pairs, 0.0, 1.0, out);
    }
    return out;
}

std::vector<std::vector<double>> sliding_dft(std::span<const double> series, int window_length, int word_length,
                                             bool normalise) {
    const auto w = static_cast<std::size_t>(window_length);
    check_window(w, word_length, normalise);
    if (series.size() < w) throw Error(ErrorCode::SeriesTooShort, "series shorter than window");

    const std::size_t first_bin = normalise ? 1 : 0;
    const auto pairs = static_cast<std::size_t>(word_length / 2);
    const std::size_t windows = series.size() - w + 1;

    std::vector<double> rot_re(pairs);
    std::vector<double> rot_im(pairs);
    for (std::size_t b = 0; b < pairs; ++b) {
        const double a = twiddle(first_bin + b, 1, w);
        rot_re[b] = std::cos(a);
        rot_im[b] = std::sin(a);
    }

    std::vector<std::vector<double>> out(windows, std::vector<double>(static_cast<std::size_t>(word_length), 0.0));
    std::vector<double> raw(static_cast<std::size_t>(word_length), 0.0);
    for (std::size_t t = 0; t < windows; ++t) {
        auto window = series.subspan(t, w);
        if (t % kResyncInterval == 0) {
            raw_dft(window, first_bin, pairs, 0.0, 1.0, raw);
        } else {
            // X_k(t) = e^{i 2 pi k / w} (X_k(t-1) - x_{t-1} + x_{t-1+w})
            const double delta = series[t - 1 + w] - series[t - 1];
            for (std::size_t b = 0; b < pairs; ++b) {
                const double re = raw[2 * b] + delta;
                const double im = raw[2 * b + 1];
                raw[2 * b] = re * rot_re[b] - im * rot_im[b];
                raw[2 * b + 1] = re * rot_im[b] + im * rot_re[b];
            }
        }
        auto& row = out[t];
        if (normalise) {
            const WindowStats st = window_stats(window);
            if (st.constant) continue;
            const double inv = 1.0 / st.stdev;
            for (std::size_t j = 0; j < row.size(); ++j) row[j] = raw[j] * inv;
        } else {
            row = raw;
        }
    }
    return out;
}

BreakpointTable mcb_fit(const std::vector<std::vector<double>>& coefficients, int alphabet_size) {
    check_fit_input(coefficients, alphabet_size);
    BreakpointTable table;
    table.alphabet_size = alphabet_size;
    for (std::size_t j = 0; j < coefficients.front().size(); ++j) {
        table.rows.push_back(equal_frequency(column(coefficients, j), alphabet_size));
    }
    return table;
}

BreakpointTable igb_fit(const std::vector<std::vector<double>>& coefficients, std::span<const ClassId> labels,
                        int alphabet_size) {
    check_fit_input(coefficients, alphabet_size);
    if (labels.size() != coefficients.size()) {
        throw Error(ErrorCode::InvalidArgument, "one label per window required");
    }
    BreakpointTable table;
    table.alphabet_size = alphabet_size;
    for (std::size_t j = 0; j < coefficients.front().size(); ++j) {
        table.rows.push_back(information_gain_row(column(coefficients, j), labels, alphabet_size));
    }
    return table;
}

std::uint32_t discretise(std::span<const double> coeffs, const BreakpointTable& breakpoints) {
    if (coeffs.size() != breakpoints.rows.size()) {
        throw Error(ErrorCode::InvalidArgument, "coefficient count does not match breakpoint rows");
    }
    std::uint32_t word = 0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const auto& row = breakpoints.rows[i];
        auto letter = static_cast<std::uint32_t>(std::lower_bound(row.begin(), row.end(), coeffs[i]) - row.begin());
        word = (word << 2) | letter;
    }
    return word;
}

std::vector<WordAt> word_sequence(std::span<const double> series, const SfaParameters& params,
                                  const BreakpointTable& breakpoints) {
    params.validate(series.size());
    auto coeffs = sliding_dft(series, params.window_length, params.word_length, params.normalise);
    std::vector<WordAt> out(coeffs.size());
    for (std::size_t t = 0; t < coeffs.size(); ++t) out[t] = {t, discretise(coeffs[t], breakpoints)};
    return out;
}

Bag bag_from_words(std::span<const WordAt> words, std::size_t window_length, BagOptions options) {
    std::vector<BagEntry> entries;
    entries.reserve(words.size() * (options.bigrams ? 2 : 1));
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (options.numerosity_reduction && i > 0 && words[i].word == words[i - 1].word) continue;
        entries.push_back({SfaWord{words[i].word, 0}, 1});
    }
    if (options.bigrams) {
        // Word sequences are indexed by window start, so j - w is one window back.
        for (std::size_t j = window_length; j < words.size(); ++j) {
            entries.push_back({SfaWord::bigram(words[j - window_length].word, words[j].word), 1});
        }
    }
    return Bag::from_entries(std::move(entries));
}

Bag series_to_bag(std::span<const double> series, const SfaParameters& params, const BreakpointTable& breakpoints,
                  bool use_bigrams) {
    auto words = word_sequence(series, params, breakpoints);
    return bag_from_words(words, static_cast<std::size_t>(params.window_length), {true, use_bigrams});
}

SfaTransform SfaTransform::fit(std::span<const Series> series, std::span<const ClassId> labels,
                               const SfaParameters& params) {
    return fit(series, labels, params, nullptr);
}

SfaTransform SfaTransform::fit(std::span<const Series> series, std::span<const ClassId> labels,
                               const SfaParameters& params, std::vector<std::vector<WordAt>>* train_words) {
    if (series.empty()) throw Error(ErrorCode::EmptyDataset, "cannot fit a transform without series");
    if (labels.size() != series.size()) throw Error(ErrorCode::InvalidArgument, "one label per series required");
    params.validate(series.front().size());

    std::vector<std::vector<double>> rows;
    std::vector<ClassId> window_labels;
    std::vector<std::size_t> offsets;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].size() != series.front().size()) {
            throw Error(ErrorCode::UnequalLength, "training series lengths differ");
        }
        auto coeffs = sliding_dft(series[i], params.window_length, params.word_length, params.normalise);
        offsets.push_back(rows.size());
        window_labels.insert(window_labels.end(), coeffs.size(), labels[i]);
        for (auto& c : coeffs) rows.push_back(std::move(c));
    }

    // Too few windows to populate every letter: degrade to the smallest
    // table the data supports rather than failing the member.
    const int alphabet = std::min<int>(params.alphabet_size, static_cast<int>(rows.size()));
    BreakpointTable table;
    if (alphabet < 2) {
        table.alphabet_size = params.alphabet_size;
        table.rows.assign(static_cast<std::size_t>(params.word_length),
                          std::vector<double>(static_cast<std::size_t>(params.alphabet_size - 1),
                                              std::numeric_limits<double>::infinity()));
    } else {
        table = params.binning == Binning::MCB ? mcb_fit(rows, alphabet) : igb_fit(rows, window_labels, alphabet);
        for (auto& row : table.rows) {
            row.resize(static_cast<std::size_t>(params.alphabet_size - 1), std::numeric_limits<double>::infinity());
        }
        table.alphabet_size = params.alphabet_size;
    }

    SfaTransform transform(params, std::move(table));
    if (train_words != nullptr) {
        train_words->assign(series.size(), {});
        const std::size_t per_series = series.front().size() - static_cast<std::size_t>(params.window_length) + 1;
        for (std::size_t i = 0; i < series.size(); ++i) {
            auto& seq = (*train_words)[i];
            seq.resize(per_series);
            for (std::size_t t = 0; t < per_series; ++t) {
                seq[t] = {t, discretise(rows[offsets[i] + t], transform.breakpoints_)};
            }
        }
    }
    return transform;
}

std::vector<WordAt> SfaTransform::words(std::span<const double> series) const {
    return word_sequence(series, params_, breakpoints_);
}

} // namespace tde
