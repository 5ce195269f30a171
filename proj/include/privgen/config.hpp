#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "privgen/dataset.hpp"
#include "privgen/evaluation.hpp"
#include "privgen/generator.hpp"
#include "privgen/models.hpp"
#include "privgen/privacy.hpp"

namespace privgen {

/// Minimal INI reader: `[section]` headers, `key = value` pairs, `#`/`;`
/// comments. Section and key order is preserved so list-like sections (the
/// attribute list) keep their file order.
struct IniFile {
    using Entries = std::vector<std::pair<std::string, std::string>>;
    std::vector<std::pair<std::string, Entries>> sections;

    static std::string trim(const std::string& s) {
        size_t b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return "";
        size_t e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }

    static IniFile parse(std::istream& in) {
        IniFile ini;
        std::string line;
        std::string current;
        size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            auto hash = line.find_first_of("#;");
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("config line " + std::to_string(line_no) +
                                      ": unterminated section header");
                current = trim(line.substr(1, line.size() - 2));
                ini.sections.emplace_back(current, Entries{});
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (ini.sections.empty()) ini.sections.emplace_back("", Entries{});
            bool found = false;
            for (auto& [name, entries] : ini.sections)
                if (name == current) {
                    entries.emplace_back(key, value);
                    found = true;
                    break;
                }
            if (!found) ini.sections.emplace_back(current, Entries{{key, value}});
        }
        return ini;
    }

    static IniFile parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        return parse(in);
    }

    const Entries* section(const std::string& name) const {
        for (const auto& [n, entries] : sections)
            if (n == name) return &entries;
        return nullptr;
    }

    std::optional<std::string> get(const std::string& section_name,
                                   const std::string& key) const {
        const Entries* s = section(section_name);
        if (!s) return std::nullopt;
        for (const auto& [k, v] : *s)
            if (k == key) return v;
        return std::nullopt;
    }
};

namespace detail {

inline long long config_int(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not an integer");
    }
}

inline double config_double(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': '" + value + "' is not a number");
    }
}

inline bool config_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config key '" + key + "': '" + value + "' is not a boolean");
}

}  // namespace detail

/// Full run configuration: schema binding plus feature, model, generation,
/// evaluation, and risk settings, with the defaults used when a key is absent.
struct RunConfig {
    SchemaConfig schema;
    int window_size = 5;
    int bins = 100;
    ModelParams model;
    uint64_t seed = 1;
    unsigned threads = 0;

    // generation
    int64_t gen_n = 0;
    int gen_max_steps = 0;
    std::string base_date;  // parsed with the schema time format when nonempty
    StateChoice state_choice = StateChoice::Sample;

    // evaluation
    int folds = 10;
    double synthetic_fraction = 0.1;
    std::vector<size_t> ks = {20, 50, 100};
    size_t max_len = 5;

    // risk
    double epsilon_s = 0.0;
    bool estimate_epsilon = false;
    bool include_first_state = true;
    bool extended_qid = false;
    double risk_threshold = 0.25;

    static RunConfig from_ini(const IniFile& ini) {
        RunConfig c;
        using detail::config_bool;
        using detail::config_double;
        using detail::config_int;
        auto get = [&](const std::string& s, const std::string& k) { return ini.get(s, k); };

        if (auto v = get("schema", "object_column")) c.schema.object_column = *v;
        if (auto v = get("schema", "time_column")) c.schema.time_column = *v;
        if (auto v = get("schema", "state_column")) c.schema.state_column = *v;
        if (auto v = get("schema", "time_format")) c.schema.time_format = *v;
        if (const auto* attrs = ini.section("attributes"))
            for (const auto& [name, kind] : *attrs)
                c.schema.attributes.push_back({name, attr_kind_from_string(kind)});

        if (auto v = get("run", "seed"))
            c.seed = static_cast<uint64_t>(config_int("seed", *v));
        if (auto v = get("run", "threads"))
            c.threads = static_cast<unsigned>(config_int("threads", *v));

        if (auto v = get("features", "window_size"))
            c.window_size = static_cast<int>(config_int("window_size", *v));
        if (auto v = get("features", "bins")) c.bins = static_cast<int>(config_int("bins", *v));

        if (auto v = get("model", "variant")) c.model.variant = variant_from_string(*v);
        if (auto v = get("model", "markov_order"))
            c.model.markov_order = static_cast<int>(config_int("markov_order", *v));
        auto forest = [&](const char* prefix, ForestParams& p) {
            std::string pre(prefix);
            if (auto v = get("model", pre + "trees"))
                p.trees = static_cast<int>(config_int(pre + "trees", *v));
            if (auto v = get("model", pre + "max_depth"))
                p.max_depth = static_cast<int>(config_int(pre + "max_depth", *v));
            if (auto v = get("model", pre + "min_samples_leaf"))
                p.min_samples_leaf = static_cast<int>(config_int(pre + "min_samples_leaf", *v));
            if (auto v = get("model", pre + "feature_fraction"))
                p.feature_fraction = config_double(pre + "feature_fraction", *v);
            if (auto v = get("model", pre + "bootstrap"))
                p.bootstrap = config_bool(pre + "bootstrap", *v);
            if (auto v = get("model", pre + "bagging_fraction"))
                p.bagging_fraction = config_double(pre + "bagging_fraction", *v);
        };
        forest("", c.model.state_forest);
        forest("time_", c.model.time_forest);

        if (auto v = get("generation", "n")) c.gen_n = config_int("n", *v);
        if (auto v = get("generation", "max_steps"))
            c.gen_max_steps = static_cast<int>(config_int("max_steps", *v));
        if (auto v = get("generation", "base_date")) c.base_date = *v;
        if (auto v = get("generation", "state_choice"))
            c.state_choice = state_choice_from_string(*v);

        if (auto v = get("evaluation", "folds"))
            c.folds = static_cast<int>(config_int("folds", *v));
        if (auto v = get("evaluation", "synthetic_fraction"))
            c.synthetic_fraction = config_double("synthetic_fraction", *v);
        if (auto v = get("evaluation", "max_len"))
            c.max_len = static_cast<size_t>(config_int("max_len", *v));
        if (auto v = get("evaluation", "k")) {
            c.ks.clear();
            std::stringstream ss(*v);
            std::string item;
            while (std::getline(ss, item, ','))
                c.ks.push_back(static_cast<size_t>(config_int("k", IniFile::trim(item))));
            if (c.ks.empty()) throw ConfigError("config key 'k': empty list");
        }

        if (auto v = get("risk", "epsilon_s")) c.epsilon_s = config_double("epsilon_s", *v);
        if (auto v = get("risk", "estimate_epsilon"))
            c.estimate_epsilon = config_bool("estimate_epsilon", *v);
        if (auto v = get("risk", "include_first_state"))
            c.include_first_state = config_bool("include_first_state", *v);
        if (auto v = get("risk", "extended")) c.extended_qid = config_bool("extended", *v);
        if (auto v = get("risk", "threshold")) c.risk_threshold = config_double("threshold", *v);
        return c;
    }

    static RunConfig from_file(const std::string& path) {
        return from_ini(IniFile::parse_file(path));
    }

    int64_t resolved_base_date() const {
        if (base_date.empty()) return -1;
        return parse_timestamp(base_date, schema.time_format);
    }

    GenerationConfig generation_config() const {
        GenerationConfig g;
        g.n = gen_n;
        g.max_steps = gen_max_steps;
        g.seed = seed;
        g.base_date = resolved_base_date();
        g.state_choice = state_choice;
        g.threads = threads;
        return g;
    }

    EvalConfig eval_config() const {
        EvalConfig e;
        e.window_size = window_size;
        e.bins = bins;
        e.model = model;
        e.folds = folds;
        e.synthetic_fraction = synthetic_fraction;
        e.ks = ks;
        e.max_len = max_len;
        e.max_steps = gen_max_steps;
        e.state_choice = state_choice;
        e.seed = seed;
        e.threads = threads;
        return e;
    }

    QidSpec qid_spec() const {
        QidSpec q = QidSpec::all_attributes(schema);
        q.include_first_state = include_first_state;
        q.extended_mode = extended_qid;
        q.bins = bins;
        q.markov_order = model.markov_order;
        return q;
    }

    /// Effective-configuration snapshot in the same INI syntax; embedded in
    /// reports for provenance.
    std::string dump() const {
        std::ostringstream os;
        os << "[schema]\n";
        os << "object_column = " << schema.object_column << "\n";
        os << "time_column = " << schema.time_column << "\n";
        os << "state_column = " << schema.state_column << "\n";
        os << "time_format = " << schema.time_format << "\n";
        os << "[attributes]\n";
        for (const auto& a : schema.attributes)
            os << a.column << " = " << to_string(a.kind) << "\n";
        // the worker thread count never changes results, so it stays out of
        // the snapshot and reports are byte-identical across parallelism
        os << "[run]\n";
        os << "seed = " << seed << "\n";
        os << "[features]\n";
        os << "window_size = " << window_size << "\n";
        os << "bins = " << bins << "\n";
        os << "[model]\n";
        os << "variant = " << to_string(model.variant) << "\n";
        os << "markov_order = " << model.markov_order << "\n";
        auto forest = [&](const char* prefix, const ForestParams& p) {
            os << prefix << "trees = " << p.trees << "\n";
            os << prefix << "max_depth = " << p.max_depth << "\n";
            os << prefix << "min_samples_leaf = " << p.min_samples_leaf << "\n";
            os << prefix << "feature_fraction = " << format_double(p.feature_fraction) << "\n";
            os << prefix << "bootstrap = " << (p.bootstrap ? "true" : "false") << "\n";
            os << prefix << "bagging_fraction = " << format_double(p.bagging_fraction) << "\n";
        };
        forest("", model.state_forest);
        forest("time_", model.time_forest);
        os << "[generation]\n";
        os << "n = " << gen_n << "\n";
        os << "max_steps = " << gen_max_steps << "\n";
        os << "base_date = " << base_date << "\n";
        os << "state_choice = " << to_string(state_choice) << "\n";
        os << "[evaluation]\n";
        os << "folds = " << folds << "\n";
        os << "synthetic_fraction = " << format_double(synthetic_fraction) << "\n";
        os << "k = ";
        for (size_t i = 0; i < ks.size(); ++i) os << (i ? "," : "") << ks[i];
        os << "\n";
        os << "max_len = " << max_len << "\n";
        os << "[risk]\n";
        os << "epsilon_s = " << format_double(epsilon_s) << "\n";
        os << "estimate_epsilon = " << (estimate_epsilon ? "true" : "false") << "\n";
        os << "include_first_state = " << (include_first_state ? "true" : "false") << "\n";
        os << "extended = " << (extended_qid ? "true" : "false") << "\n";
        os << "threshold = " << format_double(risk_threshold) << "\n";
        return os.str();
    }
};

}  // namespace privgen
