#include "tde/ensemble.hpp"
#include "tde/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iterator>

namespace tde {

namespace {

using json = nlohmann::json;

constexpr const char* kFormat = "tde-model";
constexpr int kVersion = 1;

json config_to_json(const EnsembleConfig& c) {
    json j;
    j["variant"] = std::string(to_string(c.variant));
    j["k"] = c.k;
    j["s"] = c.s;
    j["time_contract"] = c.time_contract ? json(c.time_contract->count()) : json(nullptr);
    j["seed"] = c.seed;
    j["subsample_proportion"] = c.subsample_proportion;
    j["word_lengths"] = c.word_lengths;
    j["max_levels"] = c.max_levels;
    json bins = json::array();
    for (Binning b : c.binnings) bins.push_back(std::string(to_string(b)));
    j["binnings"] = bins;
    j["bigrams"] = c.bigrams ? json(*c.bigrams) : json(nullptr);
    j["distance"] = c.distance ? json(std::string(to_string(*c.distance))) : json(nullptr);
    j["use_gp"] = c.use_gp;
    j["tune_gp"] = c.tune_gp;
    j["gp"] = {{"length_scale", c.gp.length_scale},
               {"signal_variance", c.gp.signal_variance},
               {"noise_variance", c.gp.noise_variance}};
    j["random_warmup"] = c.random_warmup;
    j["retention"] = c.retention;
    return j;
}

Binning binning_from(const std::string& s) {
    if (s == "MCB") return Binning::MCB;
    if (s == "IGB") return Binning::IGB;
    throw Error(ErrorCode::Format, "unknown binning '" + s + "'");
}

DistanceKind distance_from(const std::string& s) {
    if (s == "boss") return DistanceKind::Boss;
    if (s == "intersection") return DistanceKind::HistogramIntersection;
    throw Error(ErrorCode::Format, "unknown distance '" + s + "'");
}

EnsembleConfig config_from_json(const json& j) {
    EnsembleConfig c;
    c.variant = parse_variant(j.at("variant").get<std::string>());
    c.k = j.at("k").get<std::size_t>();
    c.s = j.at("s").get<std::size_t>();
    if (!j.at("time_contract").is_null()) c.time_contract = Seconds(j.at("time_contract").get<double>());
    c.seed = j.at("seed").get<std::uint64_t>();
    c.subsample_proportion = j.at("subsample_proportion").get<double>();
    c.word_lengths = j.at("word_lengths").get<std::vector<int>>();
    c.max_levels = j.at("max_levels").get<int>();
    for (const auto& b : j.at("binnings")) c.binnings.push_back(binning_from(b.get<std::string>()));
    if (!j.at("bigrams").is_null()) c.bigrams = j.at("bigrams").get<bool>();
    if (!j.at("distance").is_null()) c.distance = distance_from(j.at("distance").get<std::string>());
    c.use_gp = j.at("use_gp").get<bool>();
    c.tune_gp = j.at("tune_gp").get<bool>();
    const auto& gp = j.at("gp");
    c.gp = {gp.at("length_scale").get<double>(), gp.at("signal_variance").get<double>(),
            gp.at("noise_variance").get<double>()};
    c.random_warmup = j.at("random_warmup").get<std::size_t>();
    c.retention = j.at("retention").get<double>();
    return c;
}

json member_to_json(const IndividualBoss& m, double weight) {
    const auto& p = m.params();
    json j;
    j["word_length"] = p.sfa.word_length;
    j["alphabet_size"] = p.sfa.alphabet_size;
    j["window_length"] = p.sfa.window_length;
    j["normalise"] = p.sfa.normalise;
    j["binning"] = std::string(to_string(p.sfa.binning));
    j["levels"] = p.levels;
    j["bigrams"] = p.bigrams;
    j["distance"] = std::string(to_string(m.distance()));
    j["train_accuracy"] = m.train_accuracy();
    j["weight"] = weight;
    j["series_length"] = m.series_length();
    j["breakpoints"] = m.transform().breakpoints().rows;
    j["labels"] = m.train_labels();
    // Each bag is a flat array of (letters, tag, count) triples.
    json bags = json::array();
    for (const auto& bag : m.train_bags()) {
        std::vector<std::uint64_t> flat;
        flat.reserve(bag.size() * 3);
        for (const auto& e : bag) {
            flat.push_back(e.word.letters);
            flat.push_back(e.word.tag);
            flat.push_back(static_cast<std::uint64_t>(e.count));
        }
        bags.push_back(std::move(flat));
    }
    j["bags"] = std::move(bags);
    return j;
}

IndividualBoss member_from_json(const json& j, double& weight) {
    IndividualParams p;
    p.sfa.word_length = j.at("word_length").get<int>();
    p.sfa.alphabet_size = j.at("alphabet_size").get<int>();
    p.sfa.window_length = j.at("window_length").get<int>();
    p.sfa.normalise = j.at("normalise").get<bool>();
    p.sfa.binning = binning_from(j.at("binning").get<std::string>());
    p.levels = j.at("levels").get<int>();
    p.bigrams = j.at("bigrams").get<bool>();
    weight = j.at("weight").get<double>();

    BreakpointTable table;
    table.alphabet_size = p.sfa.alphabet_size;
    table.rows = j.at("breakpoints").get<std::vector<std::vector<double>>>();

    std::vector<Bag> bags;
    for (const auto& flat_json : j.at("bags")) {
        auto flat = flat_json.get<std::vector<std::uint64_t>>();
        if (flat.size() % 3 != 0) throw Error(ErrorCode::Format, "malformed bag");
        std::vector<BagEntry> entries;
        for (std::size_t i = 0; i < flat.size(); i += 3) {
            entries.push_back({SfaWord{flat[i], static_cast<std::uint32_t>(flat[i + 1])},
                               static_cast<std::int32_t>(flat[i + 2])});
        }
        bags.push_back(Bag::from_entries(std::move(entries)));
    }
    return IndividualBoss(p, distance_from(j.at("distance").get<std::string>()), SfaTransform(p.sfa, std::move(table)),
                          std::move(bags), j.at("labels").get<std::vector<ClassId>>(),
                          j.at("series_length").get<std::size_t>(), j.at("train_accuracy").get<double>());
}

} // namespace

std::vector<std::uint8_t> serialize(const Ensemble& ensemble) {
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["config"] = config_to_json(ensemble.config());
    j["class_names"] = ensemble.class_names();
    j["series_length"] = ensemble.series_length();
    j["arrivals"] = ensemble.arrivals();
    json members = json::array();
    for (std::size_t i = 0; i < ensemble.members().size(); ++i) {
        members.push_back(member_to_json(ensemble.members()[i], ensemble.weights()[i]));
    }
    j["members"] = std::move(members);
    return json::to_cbor(j);
}

Ensemble deserialize(std::span<const std::uint8_t> bytes) {
    json j;
    try {
        j = json::from_cbor(bytes.begin(), bytes.end());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, std::string("model container is not valid CBOR: ") + e.what());
    }
    try {
        if (j.at("format") != kFormat) throw Error(ErrorCode::Format, "not a model container");
        if (j.at("version").get<int>() != kVersion) throw Error(ErrorCode::Format, "unsupported model version");
        std::vector<IndividualBoss> members;
        std::vector<double> weights;
        for (const auto& mj : j.at("members")) {
            double w = 0.0;
            members.push_back(member_from_json(mj, w));
            weights.push_back(w);
        }
        return Ensemble(config_from_json(j.at("config")), j.at("class_names").get<std::vector<std::string>>(),
                        j.at("series_length").get<std::size_t>(), std::move(members), std::move(weights),
                        j.at("arrivals").get<std::vector<std::size_t>>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Format, std::string("malformed model container: ") + e.what());
    }
}

void save_model(const Ensemble& ensemble, const std::filesystem::path& path) {
    const auto bytes = serialize(ensemble);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Ensemble load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return deserialize(bytes);
}

} // namespace tde
