#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "privgen/generator.hpp"
#include "privgen/rng.hpp"

#include "support/chain.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace privgen;
using namespace testsup;

namespace {

ModelBundle fit_small_bundle(const Dataset& d, int window, int markov_order,
                             uint64_t seed = 42) {
    FeatureSpec spec = make_feature_spec(d, window);
    ModelParams params;
    params.variant = StateModelVariant::Markov;
    params.markov_order = markov_order;
    params.time_forest.trees = 5;
    params.time_forest.max_depth = 6;
    return fit_bundle(d, spec, params, seed, 1);
}

}  // namespace

TEST_CASE("a deterministic chain generates itself") {
    Dataset d = sequences_dataset({{"A", "B"}, {"A", "B"}, {"A", "B"}});
    ModelBundle bundle = fit_small_bundle(d, 2, 1);
    GenerationConfig gc;
    gc.n = 5;
    gc.seed = 11;
    Dataset out = generate(bundle, gc);
    REQUIRE(out.n_sequences() == 5);
    for (size_t s = 0; s < out.n_sequences(); ++s) {
        auto seq = out.sequence(s);
        REQUIRE(seq.size() == 2);
        CHECK(out.alphabet.symbol(seq[0].state) == "A");
        CHECK(out.alphabet.symbol(seq[1].state) == "B");
        CHECK(seq[1].timestamp >= seq[0].timestamp);
    }
}

TEST_CASE("max_steps caps every sequence") {
    Dataset d = sequences_dataset({{"A", "B", "A", "B"}, {"A", "B", "A"}});
    ModelBundle bundle = fit_small_bundle(d, 2, 1);
    GenerationConfig gc;
    gc.n = 8;
    gc.max_steps = 1;
    gc.seed = 3;
    Dataset out = generate(bundle, gc);
    REQUIRE(out.n_sequences() == 8);
    for (size_t s = 0; s < out.n_sequences(); ++s) CHECK(out.sequence(s).size() == 1);
}

TEST_CASE("n defaults to the source object count") {
    Dataset d = sequences_dataset({{"A", "B"}, {"A", "B"}, {"A", "B"}, {"A"}});
    ModelBundle bundle = fit_small_bundle(d, 2, 1);
    GenerationConfig gc;
    gc.seed = 5;
    Dataset out = generate(bundle, gc);
    CHECK(out.n_sequences() == 4);
}

TEST_CASE("window mismatch is a configuration error") {
    Dataset d = sequences_dataset({{"A", "B"}});
    ModelBundle bundle = fit_small_bundle(d, 2, 1);
    GenerationConfig gc;
    gc.window_size = 3;
    CHECK_THROWS_AS(generate(bundle, gc), ConfigError);
}

TEST_CASE("generation is deterministic and thread-count independent") {
    Dataset d = simulate_chain_dataset(branch_cycle_chain(), 120, 900);
    ModelBundle bundle = fit_small_bundle(d, 5, 2);
    GenerationConfig gc;
    gc.n = 40;
    gc.seed = 77;
    gc.threads = 1;
    Dataset a = generate(bundle, gc);
    gc.threads = 4;
    Dataset b = generate(bundle, gc);
    CHECK(a.records == b.records);
    gc.seed = 78;
    Dataset c = generate(bundle, gc);
    CHECK(a.records != c.records);
}

TEST_CASE("output is a legal dataset without the end sentinel") {
    Dataset d = simulate_chain_dataset(branch_cycle_chain(), 150, 901);
    ModelBundle bundle = fit_small_bundle(d, 5, 2);
    GenerationConfig gc;
    gc.n = 60;
    gc.seed = 9;
    Dataset out = generate(bundle, gc);
    CHECK(out.n_sequences() == 60);
    for (const auto& r : out.records) {
        CHECK(out.alphabet.symbol(r.state) != bundle.alphabet.end_sentinel);
        CHECK(r.state >= 0);
    }
    for (size_t s = 0; s < out.n_sequences(); ++s) {
        auto seq = out.sequence(s);
        CHECK(seq.size() >= 1);
        CHECK(static_cast<int>(seq.size()) <= bundle.default_max_steps);
        for (size_t i = 0; i + 1 < seq.size(); ++i)
            CHECK(seq[i].timestamp <= seq[i + 1].timestamp);
    }
    // round-trips through CSV as a drop-in dataset
    std::ostringstream os;
    write_dataset(out, os);
    std::istringstream in(os.str());
    Dataset back = load_dataset(in, bundle.schema);
    CHECK(back.records == out.records);
}

TEST_CASE("generated state frequencies approach the chain's analytic frequencies") {
    SecondOrderChain chain = branch_cycle_chain();
    Dataset d = simulate_chain_dataset(chain, 1000, 902);
    ModelBundle bundle = fit_small_bundle(d, 5, 2);
    GenerationConfig gc;
    gc.n = 1000;
    gc.seed = 13;
    gc.threads = 2;
    Dataset out = generate(bundle, gc);

    ChainExpectation expect = chain_expectation(chain);
    std::vector<std::string> symbols;
    for (int s = 0; s < chain.n_states; ++s)
        symbols.push_back(std::string(1, static_cast<char>('A' + s)));
    auto freq = state_frequencies(out, symbols);
    CHECK(total_variation(freq, expect.state_frequencies) <= 0.05);
}

TEST_CASE("generated length distribution matches a direct chain simulation") {
    // fit a first-order model, then sample the fitted chain directly as an
    // independent oracle and compare sequence-length histograms
    Rng sim_rng(700);
    std::vector<std::vector<std::string>> seqs;
    for (int i = 0; i < 400; ++i) {
        std::vector<std::string> seq{"A"};
        while (seq.size() < 30) {
            const std::string& cur = seq.back();
            double u = sim_rng.uniform01();
            if (cur == "A")
                seq.push_back(u < 0.7 ? "B" : "C");
            else if (cur == "B") {
                if (u < 0.5) seq.push_back("A");
                else if (u < 0.8) seq.push_back("C");
                else break;
            } else {
                if (u < 0.4) seq.push_back("A");
                else break;
            }
        }
        seqs.push_back(seq);
    }
    Dataset d = sequences_dataset(seqs);
    ModelBundle bundle = fit_small_bundle(d, 3, 1);

    const size_t n = 10000;
    const int cap = bundle.default_max_steps;
    GenerationConfig gc;
    gc.n = static_cast<int64_t>(n);
    gc.seed = 21;
    gc.threads = 2;
    Dataset out = generate(bundle, gc);

    std::vector<double> gen_hist(static_cast<size_t>(cap) + 1, 0.0);
    for (size_t s = 0; s < out.n_sequences(); ++s)
        gen_hist[out.sequence(s).size()] += 1.0 / static_cast<double>(n);

    // independent sampler over the fitted markov counts
    const MarkovModel& m = bundle.state_model.markov;
    Rng oracle_rng(22);
    std::vector<double> oracle_hist(static_cast<size_t>(cap) + 1, 0.0);
    for (size_t i = 0; i < n; ++i) {
        std::vector<int> hist{
            static_cast<int>(oracle_rng.pick_weighted(m.start_state_frequencies))};
        while (static_cast<int>(hist.size()) < cap) {
            auto dist = m.predict(hist);
            size_t next = oracle_rng.pick_weighted(dist);
            if (next == static_cast<size_t>(m.state_count)) break;
            hist.push_back(static_cast<int>(next));
        }
        oracle_hist[hist.size()] += 1.0 / static_cast<double>(n);
    }
    CHECK(total_variation(gen_hist, oracle_hist) <= 0.05);
}

TEST_CASE("start sampling reproduces start state, attributes, and start times") {
    SECTION("degenerate start state") {
        Dataset d = sequences_dataset({{"A", "B"}, {"A"}, {"A", "B"}});
        ModelBundle bundle = fit_small_bundle(d, 2, 1);
        Rng rng(30);
        for (int i = 0; i < 50; ++i)
            CHECK(sample_start(bundle, rng).state == d.alphabet.id_of("A"));
    }
    SECTION("attribute frequencies at ten thousand draws") {
        Dataset d = six_record_dataset();
        ModelBundle bundle = fit_small_bundle(d, 2, 1);
        Rng rng(31);
        double males = 0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            StartSample s = sample_start(bundle, rng);
            if (std::get<std::string>(s.attributes[0]) == "M") males += 1;
        }
        CHECK(males / draws == Catch::Approx(2.0 / 3.0).margin(0.05));
    }
    SECTION("weekday-hour histogram within 0.05 total variation of the source") {
        Dataset d = simulate_chain_dataset(branch_cycle_chain(), 500, 903);
        ModelBundle bundle = fit_small_bundle(d, 5, 2);
        std::map<std::pair<int, int>, double> source_hist, sampled_hist;
        for (size_t s = 0; s < d.n_sequences(); ++s) {
            TimeFeatures tf = extract_time_features(d.sequence(s)[0].timestamp);
            source_hist[{tf.weekday, tf.hour}] += 1.0 / static_cast<double>(d.n_sequences());
        }
        Rng rng(32);
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            StartSample s = sample_start(bundle, rng);
            TimeFeatures tf = extract_time_features(s.timestamp);
            sampled_hist[{tf.weekday, tf.hour}] += 1.0 / draws;
        }
        double tv = 0;
        for (const auto& [key, p] : source_hist) tv += std::abs(p - sampled_hist[key]);
        for (const auto& [key, p] : sampled_hist)
            if (!source_hist.count(key)) tv += p;
        CHECK(tv / 2.0 <= 0.05);
    }
}

TEST_CASE("refitting on generated output keeps the alphabet") {
    Dataset d = simulate_chain_dataset(branch_cycle_chain(), 400, 904);
    ModelBundle bundle = fit_small_bundle(d, 5, 2);
    GenerationConfig gc;
    gc.n = 400;
    gc.seed = 14;
    Dataset out = generate(bundle, gc);
    ModelBundle refit = fit_small_bundle(out, 5, 2);
    CHECK(refit.alphabet.states == bundle.alphabet.states);
}
