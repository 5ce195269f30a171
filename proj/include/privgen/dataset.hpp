#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "privgen/csv.hpp"
#include "privgen/error.hpp"
#include "privgen/timeutil.hpp"

namespace privgen {

enum class AttrKind { Numeric, Nominal };

inline std::string to_string(AttrKind k) {
    return k == AttrKind::Numeric ? "numeric" : "nominal";
}

inline AttrKind attr_kind_from_string(const std::string& s) {
    if (s == "numeric") return AttrKind::Numeric;
    if (s == "nominal") return AttrKind::Nominal;
    throw ConfigError("unknown attribute kind '" + s + "' (expected numeric or nominal)");
}

struct AttributeSchema {
    std::string column;
    AttrKind kind = AttrKind::Nominal;
};

/// Column binding for the event-sequence CSV layout: one owner column, one
/// timestamp column, one state column, and any number of per-owner attributes.
struct SchemaConfig {
    std::string object_column;
    std::string time_column;
    std::string state_column;
    std::vector<AttributeSchema> attributes;
    std::string time_format = "%Y-%m-%d %H:%M:%S";

    void validate() const {
        if (object_column.empty() || time_column.empty() || state_column.empty())
            throw SchemaError("schema requires object, time, and state columns");
        std::set<std::string> seen{object_column, time_column, state_column};
        if (seen.size() != 3)
            throw SchemaError("schema column names must be distinct");
        for (const auto& a : attributes)
            if (!seen.insert(a.column).second)
                throw SchemaError("schema column '" + a.column + "' is listed twice");
    }

    std::vector<std::string> columns() const {
        std::vector<std::string> cols{object_column, time_column, state_column};
        for (const auto& a : attributes) cols.push_back(a.column);
        return cols;
    }
};

/// Attribute value: a parsed number for numeric columns, the raw string for
/// nominal ones.
using AttrValue = std::variant<double, std::string>;

inline std::string attr_to_string(const AttrValue& v) {
    if (std::holds_alternative<double>(v)) return format_double(std::get<double>(v));
    return std::get<std::string>(v);
}

struct Record {
    std::string object_id;
    int64_t timestamp = 0;  // seconds since epoch
    int state = -1;         // index into the dataset alphabet
    std::vector<AttrValue> attributes;

    bool operator==(const Record&) const = default;
};

/// Distinct state symbols in sorted order plus a reserved end-of-sequence
/// sentinel that never occurs in input data.
struct StateAlphabet {
    std::vector<std::string> states;
    std::string end_sentinel = "__END__";

    size_t size() const { return states.size(); }

    /// Index of the END class in model outputs (one past the real states).
    int end_index() const { return static_cast<int>(states.size()); }

    int id_of(const std::string& symbol) const {
        auto it = std::lower_bound(states.begin(), states.end(), symbol);
        if (it == states.end() || *it != symbol) return -1;
        return static_cast<int>(it - states.begin());
    }

    const std::string& symbol(int id) const {
        if (id == end_index()) return end_sentinel;
        return states.at(static_cast<size_t>(id));
    }

    bool operator==(const StateAlphabet&) const = default;
};

struct DatasetStats {
    size_t sequence_count = 0;
    size_t unique_states = 0;
    int64_t min_date = 0;
    int64_t max_date = 0;
    double seq_size_mean = 0, seq_size_std = 0;
    double seq_duration_mean = 0, seq_duration_std = 0;
    double transfer_time_mean = 0, transfer_time_std = 0;
};

/// Immutable, canonicalized event-sequence dataset. Records are sorted by
/// (object, timestamp); each object's records form one contiguous sequence and
/// carry identical attribute values.
struct Dataset {
    SchemaConfig schema;
    StateAlphabet alphabet;
    std::vector<Record> records;
    std::vector<size_t> seq_offsets;  // size n_sequences()+1

    size_t n_sequences() const { return seq_offsets.empty() ? 0 : seq_offsets.size() - 1; }

    std::span<const Record> sequence(size_t i) const {
        return {records.data() + seq_offsets[i], seq_offsets[i + 1] - seq_offsets[i]};
    }

    const std::string& object_of(size_t seq) const { return records[seq_offsets[seq]].object_id; }

    const std::vector<AttrValue>& attributes_of(size_t seq) const {
        return records[seq_offsets[seq]].attributes;
    }
};

/// Pre-canonicalization record with the state still as a symbol.
struct RawRecord {
    std::string object_id;
    int64_t timestamp = 0;
    std::string state;
    std::vector<AttrValue> attributes;
};

namespace detail {

inline std::string reserve_end_sentinel(const std::vector<std::string>& states) {
    std::string sentinel = "__END__";
    while (std::binary_search(states.begin(), states.end(), sentinel)) sentinel += "_";
    return sentinel;
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double std_of(const std::vector<double>& v, double mean) {
    if (v.empty()) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace detail

/// Canonicalizes raw rows into a Dataset: stable-sorts by (object, timestamp),
/// collects the alphabet from the distinct states, and validates per-owner
/// attribute constancy. Shared by the loader and the generator so every
/// Dataset in the system satisfies the same invariants.
inline Dataset make_dataset(const SchemaConfig& schema, std::vector<RawRecord> raw) {
    schema.validate();
    std::stable_sort(raw.begin(), raw.end(), [](const RawRecord& a, const RawRecord& b) {
        if (a.object_id != b.object_id) return a.object_id < b.object_id;
        return a.timestamp < b.timestamp;
    });

    std::vector<std::string> states;
    states.reserve(raw.size());
    for (const auto& r : raw) states.push_back(r.state);
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());

    Dataset d;
    d.schema = schema;
    d.alphabet.states = states;
    d.alphabet.end_sentinel = detail::reserve_end_sentinel(states);
    d.records.reserve(raw.size());
    d.seq_offsets.push_back(0);
    for (size_t i = 0; i < raw.size(); ++i) {
        const auto& r = raw[i];
        if (i > 0 && raw[i - 1].object_id == r.object_id) {
            if (raw[i - 1].attributes != r.attributes)
                throw IntegrityError("object '" + r.object_id +
                                     "' has inconsistent attribute values across its records");
        } else if (i > 0) {
            d.seq_offsets.push_back(i);
        }
        Record rec;
        rec.object_id = r.object_id;
        rec.timestamp = r.timestamp;
        rec.state = d.alphabet.id_of(r.state);
        rec.attributes = r.attributes;
        d.records.push_back(std::move(rec));
    }
    d.seq_offsets.push_back(raw.size());
    if (raw.empty()) d.seq_offsets.assign(1, 0);
    return d;
}

/// Loads a CSV dataset under the given schema. The file must have a header row
/// naming every schema column; rows may appear in any order.
inline Dataset load_dataset(std::istream& in, const SchemaConfig& schema) {
    schema.validate();
    CsvReader reader(in);
    std::vector<std::string> header;
    size_t line = 0;
    if (!reader.next(header, line))
        throw SchemaError("input has no header row");

    std::unordered_map<std::string, size_t> col_index;
    for (size_t i = 0; i < header.size(); ++i) col_index.emplace(header[i], i);
    auto require = [&](const std::string& name) {
        auto it = col_index.find(name);
        if (it == col_index.end())
            throw SchemaError("missing column '" + name + "' in header");
        return it->second;
    };
    const size_t obj_col = require(schema.object_column);
    const size_t time_col = require(schema.time_column);
    const size_t state_col = require(schema.state_column);
    std::vector<size_t> attr_cols;
    for (const auto& a : schema.attributes) attr_cols.push_back(require(a.column));

    std::vector<RawRecord> raw;
    std::vector<std::string> fields;
    while (reader.next(fields, line)) {
        if (fields.size() == 1 && fields[0].empty()) continue;  // blank line
        if (fields.size() < header.size())
            throw ParseError(line, "row has " + std::to_string(fields.size()) +
                                       " fields, expected " + std::to_string(header.size()));
        RawRecord r;
        r.object_id = fields[obj_col];
        try {
            r.timestamp = parse_timestamp(fields[time_col], schema.time_format);
        } catch (const Error& e) {
            throw ParseError(line, e.what());
        }
        r.state = fields[state_col];
        if (r.state.empty()) throw ParseError(line, "empty state value");
        for (size_t j = 0; j < attr_cols.size(); ++j) {
            const std::string& text = fields[attr_cols[j]];
            if (schema.attributes[j].kind == AttrKind::Numeric)
                r.attributes.emplace_back(parse_double(text, line, schema.attributes[j].column));
            else
                r.attributes.emplace_back(text);
        }
        raw.push_back(std::move(r));
    }
    return make_dataset(schema, std::move(raw));
}

inline Dataset load_dataset(const std::string& path, const SchemaConfig& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    return load_dataset(in, schema);
}

inline void write_dataset(const Dataset& d, std::ostream& os) {
    write_csv_row(os, d.schema.columns());
    std::vector<std::string> fields;
    for (const auto& r : d.records) {
        fields.clear();
        fields.push_back(r.object_id);
        fields.push_back(format_timestamp(r.timestamp, d.schema.time_format));
        fields.push_back(d.alphabet.symbol(r.state));
        for (const auto& a : r.attributes) fields.push_back(attr_to_string(a));
        write_csv_row(os, fields);
    }
}

inline void write_dataset(const Dataset& d, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    write_dataset(d, os);
    if (!os.flush()) throw Error("failed writing '" + path + "'");
}

/// Sequence-level summary statistics: size and duration are per sequence,
/// transfer time pools the step deltas of all sequences. Standard deviations
/// are population deviations; an empty dataset yields all zeros.
inline DatasetStats summarize(const Dataset& d) {
    DatasetStats s;
    s.sequence_count = d.n_sequences();
    s.unique_states = d.alphabet.size();
    if (d.records.empty()) return s;

    s.min_date = d.records.front().timestamp;
    s.max_date = s.min_date;
    std::vector<double> sizes, durations, transfers;
    for (size_t i = 0; i < d.n_sequences(); ++i) {
        auto seq = d.sequence(i);
        sizes.push_back(static_cast<double>(seq.size()));
        durations.push_back(static_cast<double>(seq.back().timestamp - seq.front().timestamp));
        for (size_t j = 0; j < seq.size(); ++j) {
            s.min_date = std::min(s.min_date, seq[j].timestamp);
            s.max_date = std::max(s.max_date, seq[j].timestamp);
            if (j + 1 < seq.size())
                transfers.push_back(static_cast<double>(seq[j + 1].timestamp - seq[j].timestamp));
        }
    }
    s.seq_size_mean = detail::mean_of(sizes);
    s.seq_size_std = detail::std_of(sizes, s.seq_size_mean);
    s.seq_duration_mean = detail::mean_of(durations);
    s.seq_duration_std = detail::std_of(durations, s.seq_duration_mean);
    s.transfer_time_mean = detail::mean_of(transfers);
    s.transfer_time_std = detail::std_of(transfers, s.transfer_time_mean);
    return s;
}

}  // namespace privgen
