#include "tde/dataset.hpp"

#include "tde/error.hpp"
#include "tde/random.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace tde {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool iequals_prefix(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) != std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    }
    return true;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

bool is_missing_token(std::string_view tok) {
    return tok == "?" || tok == "NaN" || tok == "nan" || tok == "NAN" || tok.empty();
}

double parse_value(std::string_view tok, std::size_t line_no) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    if (is_missing_token(tok)) {
        throw Error(ErrorCode::MissingValues, "missing value on line " + std::to_string(line_no));
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw Error(ErrorCode::Format, "bad numeric value '" + std::string(tok) + "' on line " +
                                           std::to_string(line_no));
    }
    if (std::isnan(value)) {
        throw Error(ErrorCode::MissingValues, "missing value on line " + std::to_string(line_no));
    }
    return value;
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

} // namespace

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (ClassId c : labels) ++counts[static_cast<std::size_t>(c)];
    return counts;
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
    Dataset out;
    out.name = name;
    out.class_names = class_names;
    out.series.reserve(indices.size());
    out.labels.reserve(indices.size());
    for (std::size_t i : indices) {
        out.series.push_back(series.at(i));
        out.labels.push_back(labels.at(i));
    }
    return out;
}

void Dataset::validate() const {
    if (series.empty()) throw Error(ErrorCode::EmptyDataset, "dataset '" + name + "' has no cases");
    if (labels.size() != series.size()) {
        throw Error(ErrorCode::InvalidArgument, "label count does not match series count");
    }
    const std::size_t m = series.front().size();
    if (m == 0) throw Error(ErrorCode::EmptyDataset, "series of length zero");
    for (const auto& s : series) {
        if (s.size() != m) throw Error(ErrorCode::UnequalLength, "series lengths differ");
    }
    if (class_names.empty()) throw Error(ErrorCode::InvalidArgument, "empty class table");
    for (ClassId c : labels) {
        if (c < 0 || static_cast<std::size_t>(c) >= class_names.size()) {
            throw Error(ErrorCode::InvalidArgument, "label id out of range");
        }
    }
}

Dataset parse_ts(std::string_view text, std::string name) {
    Dataset out;
    out.name = std::move(name);
    std::map<std::string, ClassId, std::less<>> class_ids;
    bool declared_classes = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;

        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '@') {
            if (iequals_prefix(line, "@problemname")) {
                auto rest = trim(line.substr(12));
                if (out.name.empty()) out.name = std::string(rest);
            } else if (iequals_prefix(line, "@classlabel")) {
                auto tokens = split(trim(line.substr(11)), ' ');
                std::vector<std::string_view> words;
                for (auto t : tokens) {
                    if (!trim(t).empty()) words.push_back(trim(t));
                }
                if (words.empty() || !iequals_prefix(words.front(), "true")) {
                    throw Error(ErrorCode::Format, "unlabelled datasets are not supported");
                }
                for (std::size_t i = 1; i < words.size(); ++i) {
                    std::string label(words[i]);
                    if (class_ids.emplace(label, static_cast<ClassId>(out.class_names.size())).second) {
                        out.class_names.push_back(label);
                    }
                }
                declared_classes = !out.class_names.empty();
            } else if (iequals_prefix(line, "@univariate")) {
                if (iequals_prefix(trim(line.substr(11)), "false")) {
                    throw Error(ErrorCode::Format, "multivariate datasets are not supported");
                }
            }
            continue;
        }

        std::size_t colon = line.rfind(':');
        if (colon == std::string_view::npos) {
            throw Error(ErrorCode::Format, "no class label on line " + std::to_string(line_no));
        }
        std::string_view values_part = line.substr(0, colon);
        if (values_part.find(':') != std::string_view::npos) {
            throw Error(ErrorCode::Format, "multivariate case on line " + std::to_string(line_no));
        }
        std::string label(trim(line.substr(colon + 1)));
        if (label.empty()) throw Error(ErrorCode::Format, "empty class label on line " + std::to_string(line_no));

        Series s;
        for (auto tok : split(values_part, ',')) s.push_back(parse_value(tok, line_no));
        if (!out.series.empty() && s.size() != out.series.front().size()) {
            throw Error(ErrorCode::UnequalLength, "line " + std::to_string(line_no) + " has " +
                                                      std::to_string(s.size()) + " values, expected " +
                                                      std::to_string(out.series.front().size()));
        }

        auto it = class_ids.find(label);
        if (it == class_ids.end()) {
            if (declared_classes) {
                throw Error(ErrorCode::Format, "label '" + label + "' not declared in @classLabel");
            }
            it = class_ids.emplace(label, static_cast<ClassId>(out.class_names.size())).first;
            out.class_names.push_back(label);
        }
        out.series.push_back(std::move(s));
        out.labels.push_back(it->second);
    }

    if (out.series.empty()) throw Error(ErrorCode::EmptyDataset, "no data lines");
    out.validate();
    return out;
}

Dataset load_ts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string stem = path.stem().string();
    for (std::string_view suffix : {"_TRAIN", "_TEST"}) {
        if (stem.size() > suffix.size() && stem.ends_with(suffix)) stem.resize(stem.size() - suffix.size());
    }
    Dataset d = parse_ts(buf.str());
    if (d.name.empty()) d.name = stem;
    return d;
}

std::string write_ts(const Dataset& data) {
    data.validate();
    std::string out;
    out += "@problemName " + (data.name.empty() ? std::string("unnamed") : data.name) + "\n";
    out += "@timeStamps false\n@missing false\n@univariate true\n@equalLength true\n";
    out += "@seriesLength " + std::to_string(data.length()) + "\n";
    out += "@classLabel true";
    for (const auto& c : data.class_names) out += " " + c;
    out += "\n@data\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto& s = data.series[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (j) out += ',';
            out += format_double(s[j]);
        }
        out += ':';
        out += data.class_names[static_cast<std::size_t>(data.labels[i])];
        out += '\n';
    }
    return out;
}

void save_ts(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out << write_ts(data);
}

std::string write_csv(const Dataset& data) {
    std::string out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.series[i]) out += format_double(v) + ",";
        out += data.class_names[static_cast<std::size_t>(data.labels[i])];
        out += '\n';
    }
    return out;
}

void harmonise_classes(Dataset& a, Dataset& b) {
    if (a.class_names == b.class_names) return;
    std::vector<std::string> merged = a.class_names;
    for (const auto& c : b.class_names) {
        if (std::find(merged.begin(), merged.end(), c) == merged.end()) merged.push_back(c);
    }
    auto remap = [&merged](Dataset& d) {
        std::vector<ClassId> to(d.class_names.size());
        for (std::size_t i = 0; i < d.class_names.size(); ++i) {
            to[i] = static_cast<ClassId>(std::find(merged.begin(), merged.end(), d.class_names[i]) - merged.begin());
        }
        for (auto& l : d.labels) l = to[static_cast<std::size_t>(l)];
        d.class_names = merged;
    };
    remap(a);
    remap(b);
}

std::pair<Dataset, Dataset> stratified_resample(const Dataset& train, const Dataset& test,
                                                std::uint64_t resample_id, std::uint64_t seed) {
    train.validate();
    test.validate();
    if (train.length() != test.length()) {
        throw Error(ErrorCode::UnequalLength, "train and test series lengths differ");
    }
    if (resample_id == 0) return {train, test};

    Dataset tr = train;
    Dataset te = test;
    harmonise_classes(tr, te);

    Dataset pool = tr;
    pool.series.insert(pool.series.end(), te.series.begin(), te.series.end());
    pool.labels.insert(pool.labels.end(), te.labels.begin(), te.labels.end());

    const auto wanted = tr.class_counts();
    std::vector<std::vector<std::size_t>> by_class(pool.num_classes());
    for (std::size_t i = 0; i < pool.size(); ++i) by_class[static_cast<std::size_t>(pool.labels[i])].push_back(i);

    Rng rng(mix_seed(seed, resample_id));
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& group = by_class[c];
        if (group.size() < wanted[c]) {
            throw Error(ErrorCode::StratificationImpossible,
                        "class '" + pool.class_names[c] + "' has too few cases in the pool");
        }
        shuffle(std::span<std::size_t>(group), rng);
        train_idx.insert(train_idx.end(), group.begin(), group.begin() + static_cast<std::ptrdiff_t>(wanted[c]));
        test_idx.insert(test_idx.end(), group.begin() + static_cast<std::ptrdiff_t>(wanted[c]), group.end());
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    return {pool.select(train_idx), pool.select(test_idx)};
}

std::vector<std::size_t> subsample_indices(std::size_t n, double proportion, std::uint64_t seed) {
    if (!(proportion > 0.0 && proportion <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "subsample proportion must lie in (0, 1]");
    }
    auto take = static_cast<std::size_t>(std::ceil(proportion * static_cast<double>(n) - 1e-9));
    take = std::clamp<std::size_t>(take, n == 0 ? 0 : 1, n);
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(mix_seed(seed));
    // Partial Fisher-Yates: the first `take` slots end up a uniform sample.
    for (std::size_t i = 0; i < take; ++i) {
        std::size_t j = i + uniform_index(rng, n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(take);
    return idx;
}

Dataset subsample_train(const Dataset& train, double proportion, std::uint64_t seed) {
    return train.select(subsample_indices(train.size(), proportion, seed));
}

} // namespace tde
