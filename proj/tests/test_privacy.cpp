#include <catch2/catch_amalgamated.hpp>

#include "privgen/privacy.hpp"
#include "privgen/rng.hpp"

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace privgen;
using namespace testsup;

TEST_CASE("identical owners reconstruct with certainty but zero risk") {
    Dataset d = three_identical_owners();
    QidSpec qid = QidSpec::all_attributes(d.schema);

    double p = reconstruction_probability({AttrValue{std::string("M")}, AttrValue{45.0}},
                                          "ER_ADMIT", d, qid);
    CHECK(p == 1.0);
    CHECK(reidentification_risk(p) == 0.0);

    // a probe whose state never appears cannot be reconstructed
    double p0 = reconstruction_probability({AttrValue{std::string("M")}, AttrValue{45.0}},
                                           "ER_RELEASE", d, qid);
    CHECK(p0 == 0.0);
    CHECK(reidentification_risk(p0) == 0.0);
}

TEST_CASE("three-owner worked example") {
    Dataset d = six_record_dataset();
    QidSpec qid = QidSpec::all_attributes(d.schema);

    double p = reconstruction_probability({AttrValue{std::string("M")}, AttrValue{45.0}},
                                          "ER_ADMIT", d, qid);
    CHECK(p == Catch::Approx(4.0 / 9.0).margin(1e-12));
    CHECK(1.0 - p == Catch::Approx(5.0 / 9.0).margin(1e-12));
    CHECK(reidentification_risk(p) == Catch::Approx(20.0 / 81.0).margin(1e-12));
    CHECK(reidentification_risk_2dp(p) == Catch::Approx(0.2464).margin(1e-12));
}

TEST_CASE("adjusted reconstruction probability") {
    CHECK(adjusted_reconstruction_probability(0.44, 0.0) == 0.44);
    CHECK(adjusted_reconstruction_probability(1.0, 0.5) == 0.5);
    CHECK(adjusted_reconstruction_probability(0.44, 0.1) == Catch::Approx(0.396));
    CHECK_THROWS_AS(adjusted_reconstruction_probability(0.4, 1.5), std::domain_error);
}

TEST_CASE("risk formula endpoints and domain") {
    CHECK(reidentification_risk(1.0) == 0.0);
    CHECK(reidentification_risk(0.0) == 0.0);
    CHECK(reidentification_risk(0.44) == Catch::Approx(0.2464));
    CHECK(reidentification_risk(0.5) == 0.25);
    CHECK_THROWS_AS(reidentification_risk(-0.1), std::domain_error);
    CHECK_THROWS_AS(reidentification_risk(1.1), std::domain_error);
}

TEST_CASE("risk curve stays inside the bound on a fine grid") {
    double best = 0;
    double best_p = -1;
    for (int i = 0; i <= 10000; ++i) {
        double p = i / 10000.0;
        double r = reidentification_risk(p);
        CHECK(r >= 0.0);
        CHECK(r <= 0.25);
        if (r > best) {
            best = r;
            best_p = p;
        }
    }
    CHECK(best == 0.25);
    CHECK(best_p == 0.5);
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            double p = i / 100.0, eps = j / 100.0;
            double adj = adjusted_reconstruction_probability(p, eps);
            CHECK(reidentification_risk(adj) <= 0.25);
        }
}

TEST_CASE("risk report on the worked example matches the owner oracle") {
    Dataset d = six_record_dataset();
    QidSpec qid = QidSpec::all_attributes(d.schema);
    RiskReport report = risk_report(d, qid);
    REQUIRE(report.records.size() == 6);

    auto oracle = oracle_owner_probabilities(d);
    REQUIRE(oracle.size() == 3);
    // owners 1 and 2 share (M, 45, first ER_ADMIT); owner 3 is unique
    CHECK(oracle[0] == Catch::Approx(4.0 / 9.0).margin(1e-12));
    CHECK(oracle[1] == Catch::Approx(4.0 / 9.0).margin(1e-12));
    CHECK(oracle[2] == Catch::Approx(1.0 / 9.0).margin(1e-12));

    for (const auto& r : report.records) {
        size_t owner = r.record_index / 2;  // two records per owner
        CHECK(r.reconstruction_probability == Catch::Approx(oracle[owner]).margin(1e-12));
        CHECK(r.risk ==
              Catch::Approx(oracle[owner] * (1.0 - oracle[owner])).margin(1e-12));
        CHECK(r.uniqueness == Catch::Approx(1.0 - oracle[owner]).margin(1e-12));
    }
    CHECK(report.max_risk == Catch::Approx(20.0 / 81.0).margin(1e-12));
    CHECK(report.max_risk <= 0.25);

    double product = 1.0;
    for (const auto& r : report.records) product *= r.risk;
    CHECK(report.risk_product == Catch::Approx(product).margin(1e-15));
}

TEST_CASE("one-owner dataset carries no risk") {
    Dataset d = make_dataset(hospital_schema(),
                             {hospital_row("1", "2017-02-01 05:45:00", "ER_ADMIT", "M", 45),
                              hospital_row("1", "2017-02-02 05:45:00", "ER_RELEASE", "M", 45)});
    RiskReport report = risk_report(d, QidSpec::all_attributes(d.schema));
    for (const auto& r : report.records) {
        CHECK(r.reconstruction_probability == 1.0);
        CHECK(r.risk == 0.0);
    }
    CHECK(report.max_risk == 0.0);
}

TEST_CASE("risk is invariant under record duplication within an owner") {
    Dataset base = six_record_dataset();
    std::vector<RawRecord> raw;
    for (const auto& r : base.records) {
        RawRecord rr;
        rr.object_id = r.object_id;
        rr.timestamp = r.timestamp;
        rr.state = base.alphabet.symbol(r.state);
        rr.attributes = r.attributes;
        raw.push_back(rr);
        if (r.object_id == "2") {
            rr.timestamp += 30;
            raw.push_back(rr);  // duplicate owner 2's records
        }
    }
    Dataset dup = make_dataset(base.schema, raw);
    RiskReport a = risk_report(base, QidSpec::all_attributes(base.schema));
    RiskReport b = risk_report(dup, QidSpec::all_attributes(dup.schema));
    CHECK(a.max_risk == Catch::Approx(b.max_risk).margin(1e-12));
    CHECK(a.records.front().reconstruction_probability ==
          Catch::Approx(b.records.front().reconstruction_probability).margin(1e-12));
}

TEST_CASE("unseen attribute values zero out the product") {
    Dataset d = six_record_dataset();
    QidSpec qid = QidSpec::all_attributes(d.schema);
    CHECK(reconstruction_probability({AttrValue{std::string("X")}, AttrValue{45.0}}, "ER_ADMIT",
                                     d, qid) == 0.0);
    CHECK(reconstruction_probability({AttrValue{std::string("M")}, AttrValue{99.0}}, "ER_ADMIT",
                                     d, qid) == 0.0);
    // unseen combination of seen values: empty condition group
    CHECK(reconstruction_probability({AttrValue{std::string("F")}, AttrValue{45.0}}, "ER_ADMIT",
                                     d, qid) == 0.0);
}

TEST_CASE("QID selection controls the factor count") {
    Dataset d = six_record_dataset();
    QidSpec gender_only;
    gender_only.attribute_indices = {0};
    double p = reconstruction_probability({AttrValue{std::string("F")}, AttrValue{16.0}},
                                          "ER_ADMIT", d, gender_only);
    CHECK(p == Catch::Approx((1.0 / 3.0) * 1.0).margin(1e-12));

    QidSpec none;
    none.attribute_indices = {};
    none.include_first_state = true;
    double ps = reconstruction_probability({}, "ER_ADMIT", d, none);
    CHECK(ps == 1.0);  // every owner starts with an admission

    QidSpec invalid;
    invalid.include_first_state = false;
    CHECK_THROWS_AS(
        reconstruction_probability({}, "ER_ADMIT", d, invalid), ConfigError);
}

TEST_CASE("extended QID mode multiplies in sequence factors") {
    Dataset d = six_record_dataset();
    QidSpec simplified = QidSpec::all_attributes(d.schema);
    QidSpec extended = QidSpec::all_attributes(d.schema);
    extended.extended_mode = true;
    extended.markov_order = 1;

    RiskReport simple = risk_report(d, simplified);
    RiskReport ext = risk_report(d, extended);
    REQUIRE(simple.records.size() == ext.records.size());
    for (size_t i = 0; i < simple.records.size(); ++i) {
        CHECK(ext.records[i].reconstruction_probability <=
              simple.records[i].reconstruction_probability + 1e-12);
        CHECK(ext.records[i].reconstruction_probability >= 0.0);
        CHECK(ext.records[i].risk <= 0.25);
    }
    CHECK_THROWS_AS(reconstruction_probability({}, "ER_ADMIT", d, extended), ConfigError);
}

TEST_CASE("epsilon adjustment appears as a separate column") {
    Dataset d = six_record_dataset();
    RiskReport report = risk_report(d, QidSpec::all_attributes(d.schema), 0.1);
    CHECK(report.epsilon_s == 0.1);
    for (const auto& r : report.records) {
        CHECK(r.adjusted_probability ==
              Catch::Approx(0.9 * r.reconstruction_probability).margin(1e-12));
        CHECK(r.adjusted_risk ==
              Catch::Approx(r.adjusted_probability * (1 - r.adjusted_probability))
                  .margin(1e-12));
        // the unadjusted column stays untouched
        CHECK(r.risk == Catch::Approx(r.reconstruction_probability *
                                      (1 - r.reconstruction_probability))
                            .margin(1e-12));
    }
}

TEST_CASE("randomized datasets stay inside the risk bound and match the oracle") {
    Rng rng(777);
    for (int trial = 0; trial < 300; ++trial) {
        size_t owners = 1 + rng.uniform_int(20);
        std::vector<RawRecord> raw;
        for (size_t o = 0; o < owners; ++o) {
            std::string gender = rng.uniform01() < 0.5 ? "M" : "F";
            double age = 10 + static_cast<double>(rng.uniform_int(6)) * 10;
            size_t len = 1 + rng.uniform_int(4);
            int64_t t = 1600000000 + static_cast<int64_t>(o);
            for (size_t j = 0; j < len; ++j) {
                RawRecord r = hospital_row("o" + std::to_string(o), "2017-02-01 05:45:00",
                                           std::string(1, static_cast<char>('a' + rng.uniform_int(5))),
                                           gender, age);
                r.timestamp = t;
                t += 60;
                raw.push_back(r);
            }
        }
        Dataset d = make_dataset(hospital_schema(), raw);
        RiskReport report = risk_report(d, QidSpec::all_attributes(d.schema));
        auto oracle = oracle_owner_probabilities(d);
        for (const auto& r : report.records) {
            CHECK(r.risk >= 0.0);
            CHECK(r.risk <= 0.25);
        }
        size_t rec = 0;
        for (size_t s = 0; s < d.n_sequences(); ++s)
            for (size_t i = 0; i < d.sequence(s).size(); ++i, ++rec) {
                CHECK(report.records[rec].reconstruction_probability ==
                      Catch::Approx(oracle[s]).margin(1e-12));
                CHECK(report.records[rec].risk ==
                      Catch::Approx(oracle[s] * (1 - oracle[s])).margin(1e-12));
            }
    }
}

TEST_CASE("risk report rejects an empty dataset") {
    Dataset d = sequences_dataset({});
    QidSpec qid;
    qid.include_first_state = true;
    CHECK_THROWS_AS(risk_report(d, qid), Error);
}
