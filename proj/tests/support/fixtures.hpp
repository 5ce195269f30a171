#pragma once

// Shared dataset fixtures for the test suites. The hospital-flavored fixtures
// mirror the classic worked setup: two or three owners with gender/age
// attributes moving through emergency-room admission and release states.

#include <string>
#include <vector>

#include "privgen/dataset.hpp"

namespace testsup {

inline privgen::SchemaConfig hospital_schema() {
    privgen::SchemaConfig s;
    s.object_column = "patient";
    s.time_column = "time";
    s.state_column = "event";
    s.attributes = {{"gender", privgen::AttrKind::Nominal},
                    {"age", privgen::AttrKind::Numeric}};
    s.time_format = "%Y-%m-%d %H:%M:%S";
    return s;
}

inline privgen::RawRecord hospital_row(const std::string& id, const std::string& ts,
                                       const std::string& state, const std::string& gender,
                                       double age) {
    privgen::RawRecord r;
    r.object_id = id;
    r.timestamp = privgen::parse_timestamp(ts, "%Y-%m-%d %H:%M:%S");
    r.state = state;
    r.attributes = {privgen::AttrValue{gender}, privgen::AttrValue{age}};
    return r;
}

/// Two owners, three records, two states.
inline privgen::Dataset two_owner_dataset() {
    return privgen::make_dataset(
        hospital_schema(),
        {hospital_row("1", "2017-02-01 05:45:00", "ER_ADMIT", "M", 45),
         hospital_row("1", "2017-02-02 15:00:00", "ER_RELEASE", "M", 45),
         hospital_row("2", "2017-02-01 06:40:00", "ER_ADMIT", "F", 45)});
}

/// Three single-record owners sharing one attribute combination and state.
inline privgen::Dataset three_identical_owners() {
    return privgen::make_dataset(
        hospital_schema(),
        {hospital_row("1", "2017-02-01 05:45:00", "ER_ADMIT", "M", 45),
         hospital_row("2", "2017-02-02 15:03:00", "ER_ADMIT", "M", 45),
         hospital_row("3", "2017-02-03 12:23:00", "ER_ADMIT", "M", 45)});
}

/// Three owners, six records: owners 1 and 2 share (M, 45), owner 3 is (F, 16);
/// every sequence starts with an admission.
inline privgen::Dataset six_record_dataset() {
    return privgen::make_dataset(
        hospital_schema(),
        {hospital_row("1", "2017-02-01 05:45:00", "ER_ADMIT", "M", 45),
         hospital_row("1", "2017-02-02 15:03:00", "ER_ADMIT", "M", 45),
         hospital_row("2", "2017-02-02 15:03:00", "ER_ADMIT", "M", 45),
         hospital_row("2", "2017-02-03 12:23:00", "ER_RELEASE", "M", 45),
         hospital_row("3", "2017-02-02 17:03:00", "ER_ADMIT", "F", 16),
         hospital_row("3", "2017-02-03 12:56:00", "ER_RELEASE", "F", 16)});
}

/// Attribute-free schema for synthetic state-sequence corpora.
inline privgen::SchemaConfig plain_schema() {
    privgen::SchemaConfig s;
    s.object_column = "obj";
    s.time_column = "time";
    s.state_column = "state";
    s.time_format = "%Y-%m-%d %H:%M:%S";
    return s;
}

/// Builds a dataset from explicit state sequences; object i starts at
/// `base_time + i` seconds and steps by `step` seconds.
inline privgen::Dataset sequences_dataset(const std::vector<std::vector<std::string>>& seqs,
                                          int64_t step = 60,
                                          int64_t base_time = 1500000000) {
    std::vector<privgen::RawRecord> raw;
    for (size_t i = 0; i < seqs.size(); ++i) {
        int64_t t = base_time + static_cast<int64_t>(i);
        for (const auto& state : seqs[i]) {
            privgen::RawRecord r;
            r.object_id = "o" + std::to_string(i + 1);
            r.timestamp = t;
            r.state = state;
            raw.push_back(std::move(r));
            t += step;
        }
    }
    return privgen::make_dataset(plain_schema(), std::move(raw));
}

}  // namespace testsup
