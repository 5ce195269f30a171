// privgen command-line front end: fit, generate, risk, evaluate, stats.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "privgen/privgen.hpp"

namespace {

using namespace privgen;

struct CliOptions {
    std::string config_path;
    std::string input;
    std::string output;
    std::string model_path;
    std::optional<uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> variant;
    std::optional<int> markov_order;
    std::optional<int> trees;
    std::optional<int> window_size;
    std::optional<int> bins;
    std::optional<int64_t> n;
    std::optional<int> max_steps;
    std::optional<std::string> state_choice;
    std::optional<std::string> base_date;
    std::optional<double> epsilon_s;
    bool estimate_epsilon = false;
    bool extended = false;
    std::optional<double> threshold;
    std::optional<int> folds;
    std::optional<double> fraction;
    std::optional<size_t> max_len;
    std::optional<std::string> ks;
};

RunConfig effective_config(const CliOptions& opt) {
    RunConfig cfg;
    if (!opt.config_path.empty()) cfg = RunConfig::from_file(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.threads) cfg.threads = *opt.threads;
    if (opt.variant) cfg.model.variant = variant_from_string(*opt.variant);
    if (opt.markov_order) cfg.model.markov_order = *opt.markov_order;
    if (opt.trees) cfg.model.state_forest.trees = *opt.trees;
    if (opt.window_size) cfg.window_size = *opt.window_size;
    if (opt.bins) cfg.bins = *opt.bins;
    if (opt.n) cfg.gen_n = *opt.n;
    if (opt.max_steps) cfg.gen_max_steps = *opt.max_steps;
    if (opt.state_choice) cfg.state_choice = state_choice_from_string(*opt.state_choice);
    if (opt.base_date) cfg.base_date = *opt.base_date;
    if (opt.epsilon_s) cfg.epsilon_s = *opt.epsilon_s;
    if (opt.estimate_epsilon) cfg.estimate_epsilon = true;
    if (opt.extended) cfg.extended_qid = true;
    if (opt.threshold) cfg.risk_threshold = *opt.threshold;
    if (opt.folds) cfg.folds = *opt.folds;
    if (opt.fraction) cfg.synthetic_fraction = *opt.fraction;
    if (opt.max_len) cfg.max_len = *opt.max_len;
    if (opt.ks) {
        cfg.ks.clear();
        std::stringstream ss(*opt.ks);
        std::string item;
        while (std::getline(ss, item, ','))
            cfg.ks.push_back(static_cast<size_t>(std::stoull(item)));
    }
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    return os;
}

void print_stats(std::ostream& os, const DatasetStats& s, const std::string& time_format) {
    os << "sequences:          " << s.sequence_count << "\n";
    os << "unique states:      " << s.unique_states << "\n";
    os << "min date:           " << format_timestamp(s.min_date, time_format) << "\n";
    os << "max date:           " << format_timestamp(s.max_date, time_format) << "\n";
    os << "sequence size:      " << format_double(s.seq_size_mean) << " +- "
       << format_double(s.seq_size_std) << "\n";
    os << "sequence duration:  " << format_double(s.seq_duration_mean) << " +- "
       << format_double(s.seq_duration_std) << " sec\n";
    os << "transfer time:      " << format_double(s.transfer_time_mean) << " +- "
       << format_double(s.transfer_time_std) << " sec\n";
}

void write_stats_csv(std::ostream& os, const DatasetStats& s, const std::string& time_format) {
    write_csv_row(os, {"statistic", "value"});
    write_csv_row(os, {"sequence_count", std::to_string(s.sequence_count)});
    write_csv_row(os, {"unique_states", std::to_string(s.unique_states)});
    write_csv_row(os, {"min_date", format_timestamp(s.min_date, time_format)});
    write_csv_row(os, {"max_date", format_timestamp(s.max_date, time_format)});
    write_csv_row(os, {"seq_size_mean", format_double(s.seq_size_mean)});
    write_csv_row(os, {"seq_size_std", format_double(s.seq_size_std)});
    write_csv_row(os, {"seq_duration_mean", format_double(s.seq_duration_mean)});
    write_csv_row(os, {"seq_duration_std", format_double(s.seq_duration_std)});
    write_csv_row(os, {"transfer_time_mean", format_double(s.transfer_time_mean)});
    write_csv_row(os, {"transfer_time_std", format_double(s.transfer_time_std)});
}

int cmd_stats(const CliOptions& opt) {
    RunConfig cfg = effective_config(opt);
    Dataset d = load_dataset(opt.input, cfg.schema);
    DatasetStats s = summarize(d);
    print_stats(std::cout, s, cfg.schema.time_format);
    if (!opt.output.empty()) {
        auto os = open_out(opt.output);
        write_stats_csv(os, s, cfg.schema.time_format);
    }
    return 0;
}

int cmd_fit(const CliOptions& opt) {
    RunConfig cfg = effective_config(opt);
    Dataset d = load_dataset(opt.input, cfg.schema);
    FeatureSpec spec = make_feature_spec(d, cfg.window_size, cfg.bins);
    ModelBundle bundle = fit_bundle(d, spec, cfg.model, cfg.seed, cfg.threads);
    save_bundle(bundle, opt.model_path);
    std::cout << "model: " << to_string(cfg.model.variant) << "\n"
              << "owners: " << bundle.object_count << "\n"
              << "records: " << d.records.size() << "\n"
              << "states: " << bundle.alphabet.size() << "\n"
              << "features: " << spec.feature_count() << "\n"
              << "default max steps: " << bundle.default_max_steps << "\n"
              << "seed: " << cfg.seed << "\n"
              << "written: " << opt.model_path << "\n";
    return 0;
}

int cmd_generate(const CliOptions& opt) {
    RunConfig cfg = effective_config(opt);
    ModelBundle bundle = load_bundle(opt.model_path);
    GenerationConfig gc = cfg.generation_config();
    if (!cfg.base_date.empty())
        gc.base_date = parse_timestamp(cfg.base_date, bundle.schema.time_format);
    Dataset synth = generate(bundle, gc);
    write_dataset(synth, opt.output);
    // reload what we wrote so a bad output file can never exit 0
    Dataset check = load_dataset(opt.output, bundle.schema);
    if (check.records.size() != synth.records.size())
        throw Error("generated output failed round-trip validation");
    std::cout << "objects: " << synth.n_sequences() << "\n"
              << "records: " << synth.records.size() << "\n"
              << "seed: " << gc.seed << "\n"
              << "written: " << opt.output << "\n";
    return 0;
}

// The risk summary reports the raw probability behind the maximal risk so the
// 2dp display mode can be recomputed from it.
double max_probability(const RiskReport& report) {
    double best_p = 0.0, best_risk = -1.0;
    for (const auto& r : report.records)
        if (r.risk > best_risk) {
            best_risk = r.risk;
            best_p = r.reconstruction_probability;
        }
    return best_p;
}

int cmd_risk(const CliOptions& opt) {
    RunConfig cfg = effective_config(opt);
    Dataset d = load_dataset(opt.input, cfg.schema);
    double epsilon = cfg.epsilon_s;
    if (cfg.estimate_epsilon) epsilon = estimate_epsilon_s(d, cfg.eval_config());
    RiskReport report = risk_report(d, cfg.qid_spec(), epsilon, cfg.risk_threshold);

    auto os = open_out(opt.output);
    write_csv_row(os, {"record_index", "object_id", "reconstruction_probability", "uniqueness",
                       "risk", "adjusted_probability", "adjusted_risk"});
    for (const auto& r : report.records)
        write_csv_row(os, {std::to_string(r.record_index), r.object_id,
                           format_double(r.reconstruction_probability),
                           format_double(r.uniqueness), format_double(r.risk),
                           format_double(r.adjusted_probability),
                           format_double(r.adjusted_risk)});

    std::ostringstream summary;
    summary << "records: " << report.records.size() << "\n";
    summary << "max risk: " << format_double(report.max_risk) << " (2dp mode: "
            << format_double(reidentification_risk_2dp(
                   report.records.empty() ? 0.0 : max_probability(report)))
            << ")\n";
    summary << "mean risk: " << format_double(report.mean_risk) << "\n";
    summary << "epsilon_s: " << format_double(report.epsilon_s) << "\n";
    summary << "records at or above threshold " << format_double(report.threshold) << ": "
            << report.over_threshold << "\n";
    summary << "per-record risk product (footnote): " << format_double(report.risk_product)
            << "\n";
    if (report.near_bound)
        summary << "note: at least one record sits at the 0.25 risk bound\n";
    summary << "\n# effective configuration\n" << cfg.dump();
    std::cout << summary.str();
    auto sf = open_out(opt.output + ".summary.txt");
    sf << summary.str();
    return 0;
}

int cmd_evaluate(const CliOptions& opt) {
    RunConfig cfg = effective_config(opt);
    Dataset source = load_dataset(opt.input, cfg.schema);
    EvalConfig ec = cfg.eval_config();

    UtilityReport report = tstr_evaluate(source, ec);

    FeatureSpec spec = make_feature_spec(source, cfg.window_size, cfg.bins);
    ModelBundle bundle = fit_bundle(source, spec, cfg.model, cfg.seed, cfg.threads);
    GenerationConfig gc = cfg.generation_config();
    gc.n = std::max<int64_t>(
        1, std::llround(ec.synthetic_fraction * static_cast<double>(source.n_sequences())));
    Dataset synth = generate(bundle, gc);
    StatComparison stats = compare_stats(source, synth);
    report.stat_pairs = stats.stat_pairs;
    report.state_frequencies = stats.state_frequencies;
    for (size_t k : ec.ks)
        report.topk.push_back({k, ec.max_len, topk_precision(source, synth, k, ec.max_len)});

    const std::string prefix = opt.output;
    {
        auto os = open_out(prefix + ".txt");
        os << "accuracy source: " << format_double(report.acc_source) << "\n";
        os << "accuracy synthetic: " << format_double(report.acc_synth) << "\n";
        os << "rmse source: " << format_double(report.rmse_source) << " sec\n";
        os << "rmse synthetic: " << format_double(report.rmse_synth) << " sec\n";
        for (const auto& t : report.topk)
            os << "top-" << t.k << " precision (max_len " << t.max_len
               << "): " << format_double(t.precision) << "\n";
        os << "\n# effective configuration\n" << cfg.dump();
    }
    {
        auto os = open_out(prefix + "_tstr.csv");
        write_csv_row(os, {"fold", "acc_source", "acc_synth", "rmse_source", "rmse_synth"});
        for (size_t f = 0; f < report.folds.size(); ++f)
            write_csv_row(os, {std::to_string(f), format_double(report.folds[f].acc_source),
                               format_double(report.folds[f].acc_synth),
                               format_double(report.folds[f].rmse_source),
                               format_double(report.folds[f].rmse_synth)});
        write_csv_row(os, {"mean", format_double(report.acc_source),
                           format_double(report.acc_synth), format_double(report.rmse_source),
                           format_double(report.rmse_synth)});
    }
    {
        auto os = open_out(prefix + "_stats.csv");
        write_csv_row(os, {"statistic", "source", "synthetic"});
        for (const auto& s : report.stat_pairs)
            write_csv_row(os, {s.name, format_double(s.source),
                               s.synth_defined ? format_double(s.synthetic) : "NA"});
    }
    {
        auto os = open_out(prefix + "_state_freq.csv");
        write_csv_row(os, {"state", "source_freq", "synth_freq"});
        for (const auto& row : report.state_frequencies)
            write_csv_row(os, {row.state, format_double(row.source_freq),
                               format_double(row.synth_freq)});
    }
    {
        auto os = open_out(prefix + "_precision.csv");
        write_csv_row(os, {"k", "max_len", "precision"});
        for (const auto& t : report.topk)
            write_csv_row(os, {std::to_string(t.k), std::to_string(t.max_len),
                               format_double(t.precision)});
    }
    std::cout << "accuracy source/synthetic: " << format_double(report.acc_source) << " / "
              << format_double(report.acc_synth) << "\n"
              << "rmse source/synthetic: " << format_double(report.rmse_source) << " / "
              << format_double(report.rmse_synth) << "\n"
              << "written: " << prefix << ".txt and CSV tables\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"privgen: model-based synthetic event-sequence generation, "
                 "re-identification risk scoring, and utility evaluation"};
    app.require_subcommand(1);

    CliOptions opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opt.config_path, "configuration file (INI)");
        cmd->add_option("--seed", opt.seed, "master random seed");
        cmd->add_option("--threads", opt.threads, "worker threads (0 = all cores)");
    };

    CLI::App* fit = app.add_subcommand("fit", "fit a model bundle from a CSV dataset");
    add_common(fit);
    fit->add_option("--input", opt.input, "input CSV")->required();
    fit->add_option("--model", opt.model_path, "output model file")->required();
    fit->add_option("--variant", opt.variant,
                    "state model: random_selection|markov|decision_tree|random_forest");
    fit->add_option("--markov-order", opt.markov_order, "markov context length");
    fit->add_option("--trees", opt.trees, "trees in the state forest");
    fit->add_option("--window-size", opt.window_size, "sliding window size");
    fit->add_option("--bins", opt.bins, "numeric attribute bins");

    CLI::App* gen = app.add_subcommand("generate", "generate synthetic data from a model");
    add_common(gen);
    gen->add_option("--model", opt.model_path, "model file")->required();
    gen->add_option("--output", opt.output, "output CSV")->required();
    gen->add_option("--n", opt.n, "objects to generate (default: source object count)");
    gen->add_option("--max-steps", opt.max_steps, "sequence length cap");
    gen->add_option("--state-choice", opt.state_choice, "sample|argmax");
    gen->add_option("--base-date", opt.base_date, "anchor date for start times");

    CLI::App* risk = app.add_subcommand("risk", "per-record re-identification risk report");
    add_common(risk);
    risk->add_option("--input", opt.input, "input CSV")->required();
    risk->add_option("--output", opt.output, "output CSV report")->required();
    risk->add_option("--epsilon-s", opt.epsilon_s, "state-model generalization error");
    risk->add_flag("--estimate-epsilon", opt.estimate_epsilon,
                   "estimate epsilon_s by cross-validation");
    risk->add_flag("--extended", opt.extended, "full-sequence QID (experimental)");
    risk->add_option("--threshold", opt.threshold, "risk reporting threshold");
    risk->add_option("--bins", opt.bins, "numeric attribute bins");

    CLI::App* eval = app.add_subcommand("evaluate", "TSTR utility evaluation");
    add_common(eval);
    eval->add_option("--input", opt.input, "input CSV")->required();
    eval->add_option("--output", opt.output, "output report prefix")->required();
    eval->add_option("--variant", opt.variant, "state model variant");
    eval->add_option("--markov-order", opt.markov_order, "markov context length");
    eval->add_option("--window-size", opt.window_size, "sliding window size");
    eval->add_option("--folds", opt.folds, "cross-validation folds");
    eval->add_option("--fraction", opt.fraction, "synthetic size as fraction of source");
    eval->add_option("--k", opt.ks, "comma-separated top-k list");
    eval->add_option("--max-len", opt.max_len, "max mined subsequence length");
    eval->add_option("--max-steps", opt.max_steps, "generated sequence length cap");

    CLI::App* stats = app.add_subcommand("stats", "dataset summary statistics");
    add_common(stats);
    stats->add_option("--input", opt.input, "input CSV")->required();
    stats->add_option("--output", opt.output, "optional CSV output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return cmd_fit(opt);
        if (gen->parsed()) return cmd_generate(opt);
        if (risk->parsed()) return cmd_risk(opt);
        if (eval->parsed()) return cmd_evaluate(opt);
        if (stats->parsed()) return cmd_stats(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
