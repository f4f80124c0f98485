#include "tde/dictionary.hpp"

#include "tde/error.hpp"

#include <algorithm>
#include <limits>

namespace tde {

namespace {

// BOSS distance that gives up once the partial sum exceeds `bound`.
double boss_distance_bounded(const Bag& test, const Bag& train, double bound) {
    double dist = 0.0;
    auto it = train.begin();
    const auto last = train.end();
    for (const auto& e : test) {
        while (it != last && it->word < e.word) ++it;
        const std::int32_t other = (it != last && it->word == e.word) ? it->count : 0;
        const double diff = static_cast<double>(e.count - other);
        dist += diff * diff;
        if (dist > bound) return dist;
    }
    return dist;
}

} // namespace

std::string_view to_string(DistanceKind d) noexcept {
    return d == DistanceKind::Boss ? "boss" : "intersection";
}

double boss_distance(const Bag& test, const Bag& train) {
    return boss_distance_bounded(test, train, std::numeric_limits<double>::infinity());
}

std::int64_t histogram_intersection(const Bag& a, const Bag& b) {
    std::int64_t sim = 0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->word < ib->word) {
            ++ia;
        } else if (ib->word < ia->word) {
            ++ib;
        } else {
            sim += std::min(ia->count, ib->count);
            ++ia;
            ++ib;
        }
    }
    return sim;
}

Bag pyramid_bags(std::span<const WordAt> words, std::size_t series_length, int levels) {
    if (levels < 1 || levels > 3) throw Error(ErrorCode::InvalidArgument, "pyramid height must be 1, 2 or 3");
    if (series_length == 0) throw Error(ErrorCode::InvalidArgument, "series length must be positive");
    std::vector<BagEntry> entries;
    entries.reserve(words.size() * static_cast<std::size_t>(levels));
    for (int level = 1; level <= levels; ++level) {
        const std::size_t regions = std::size_t{1} << (level - 1);
        const auto weight = static_cast<std::int32_t>(regions);
        std::vector<std::optional<std::uint32_t>> previous(regions);
        for (const auto& w : words) {
            const std::size_t region = w.start * regions / series_length;
            if (previous[region] == w.word) continue;
            previous[region] = w.word;
            entries.push_back({SfaWord{w.word, 0}.with_region(level, static_cast<int>(region)), weight});
        }
    }
    return Bag::from_entries(std::move(entries));
}

Bag member_bag(std::span<const WordAt> words, std::size_t series_length, const IndividualParams& params) {
    Bag bag = pyramid_bags(words, series_length, params.levels);
    if (!params.bigrams) return bag;
    Bag bigrams = bag_from_words(words, static_cast<std::size_t>(params.sfa.window_length), {true, true});
    std::vector<BagEntry> entries(bag.begin(), bag.end());
    for (const auto& e : bigrams) {
        if (e.word.is_bigram()) entries.push_back(e);
    }
    return Bag::from_entries(std::move(entries));
}

IndividualBoss::IndividualBoss(IndividualParams params, DistanceKind distance, SfaTransform transform,
                               std::vector<Bag> train_bags, std::vector<ClassId> train_labels,
                               std::size_t series_length, double train_accuracy)
    : params_(params),
      distance_(distance),
      transform_(std::move(transform)),
      train_bags_(std::move(train_bags)),
      train_labels_(std::move(train_labels)),
      series_length_(series_length),
      train_accuracy_(train_accuracy) {
    if (train_bags_.size() != train_labels_.size() || train_bags_.empty()) {
        throw Error(ErrorCode::InvalidArgument, "classifier needs one label per training bag");
    }
}

IndividualBoss IndividualBoss::build(const Dataset& train, const IndividualParams& params, DistanceKind distance) {
    train.validate();
    if (params.levels < 1 || params.levels > 3) {
        throw Error(ErrorCode::InvalidArgument, "pyramid height must be 1, 2 or 3");
    }
    std::vector<std::vector<WordAt>> words;
    IndividualBoss cls;
    cls.params_ = params;
    cls.distance_ = distance;
    cls.series_length_ = train.length();
    cls.transform_ = SfaTransform::fit(train.series, train.labels, params.sfa, &words);
    cls.train_labels_ = train.labels;
    cls.train_bags_.reserve(words.size());
    for (const auto& seq : words) cls.train_bags_.push_back(member_bag(seq, cls.series_length_, params));
    cls.train_accuracy_ = loocv_accuracy(cls);
    return cls;
}

IndividualBoss IndividualBoss::with_levels(const Dataset& train, int levels) const {
    if (train.size() != train_bags_.size()) {
        throw Error(ErrorCode::InvalidArgument, "rebagging needs the original training set");
    }
    IndividualBoss cls = *this;
    cls.params_.levels = levels;
    for (std::size_t i = 0; i < train.size(); ++i) {
        cls.train_bags_[i] = member_bag(transform_.words(train.series[i]), series_length_, cls.params_);
    }
    cls.train_accuracy_ = loocv_accuracy(cls);
    return cls;
}

Bag IndividualBoss::bag_of(std::span<const double> series) const {
    if (series.size() != series_length_) {
        throw Error(ErrorCode::SeriesLengthMismatch, "expected series of length " + std::to_string(series_length_) +
                                                         ", got " + std::to_string(series.size()));
    }
    return member_bag(transform_.words(series), series_length_, params_);
}

std::optional<std::size_t> IndividualBoss::nearest(const Bag& query, std::optional<std::size_t> exclude) const {
    std::optional<std::size_t> best;
    if (distance_ == DistanceKind::Boss) {
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < train_bags_.size(); ++j) {
            if (exclude == j) continue;
            const double d = boss_distance_bounded(query, train_bags_[j], best_dist);
            if (!best || d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
    } else {
        std::int64_t best_sim = -1;
        for (std::size_t j = 0; j < train_bags_.size(); ++j) {
            if (exclude == j) continue;
            const std::int64_t s = histogram_intersection(query, train_bags_[j]);
            if (s > best_sim) {
                best_sim = s;
                best = j;
            }
        }
    }
    return best;
}

ClassId IndividualBoss::predict(std::span<const double> series) const {
    return train_labels_[*nearest(bag_of(series))];
}

double loocv_accuracy(const IndividualBoss& cls) {
    const auto& bags = cls.train_bags();
    const auto& labels = cls.train_labels();
    if (bags.size() < 2) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < bags.size(); ++i) {
        auto j = cls.nearest(bags[i], i);
        if (j && labels[*j] == labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(bags.size());
}

} // namespace tde
