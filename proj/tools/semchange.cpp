// Command-line front end: wires corpus ingestion, embedding training,
// second-order construction, TISS statistics, and the meaning-dynamics
// model into file-producing subcommands.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "semchange/csv.hpp"
#include "semchange/dynamics.hpp"
#include "semchange/embedding.hpp"
#include "semchange/errors.hpp"
#include "semchange/parallel.hpp"
#include "semchange/rng.hpp"
#include "semchange/synth.hpp"
#include "semchange/tiss.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace semchange;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    std::string corpus_dir;
    std::string embeddings_dir;
    std::string allowlist;
    std::string out_dir;
    std::string spec_file;
    std::string kind = "decay";
    std::string word;
    long min_count = 100;
    int window = 5;
    int dim = 100;
    int n = 5;
    int p = 1;
    int horizon = 1;
    int bins = 20;
    double t_threshold = 2.0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool grid = false;
    bool weighted = false;
};

/// Registers every file the command writes; on error all of them are
/// removed so failed runs leave no partial outputs.
class Outputs {
public:
    explicit Outputs(const fs::path& dir) : dir_(dir) { fs::create_directories(dir_); }

    fs::path file(const std::string& name) {
        written_.push_back(dir_ / name);
        return written_.back();
    }
    void discard_all() {
        std::error_code ec;
        for (const auto& p : written_) fs::remove(p, ec);
    }
    const fs::path& dir() const { return dir_; }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

void write_meta(Outputs& out, const std::string& command, const RunConfig& cfg,
                const json& extra = json::object()) {
    json meta;
    meta["command"] = command;
    meta["version"] = kVersion;
    meta["seed"] = cfg.seed;
    json params;
    if (!cfg.corpus_dir.empty()) params["corpus"] = cfg.corpus_dir;
    if (!cfg.embeddings_dir.empty()) params["embeddings"] = cfg.embeddings_dir;
    if (!cfg.allowlist.empty()) params["allowlist"] = cfg.allowlist;
    params["min_count"] = cfg.min_count;
    params["window"] = cfg.window;
    params["dim"] = cfg.dim;
    params["threads"] = cfg.threads;
    meta["parameters"] = params;
    for (auto it = extra.begin(); it != extra.end(); ++it) meta[it.key()] = *it;
    std::ofstream f(out.file("run_meta.json"), std::ios::binary);
    f << meta.dump(2) << '\n';
}

struct Pipeline {
    TimeAxis axis;
    Vocabulary vocab;
    EmbeddingSet embeddings;
    std::vector<SecondOrderMatrix> sos;
};

Pipeline from_corpus(const RunConfig& cfg, bool need_sos) {
    Pipeline pipe;
    pipe.axis = scan_corpus_dir(cfg.corpus_dir);

    std::unordered_set<std::string> allow;
    const std::unordered_set<std::string>* allow_ptr = nullptr;
    if (!cfg.allowlist.empty()) {
        allow = read_allowlist(cfg.allowlist);
        allow_ptr = &allow;
    }

    std::vector<TokenStream> streams;
    std::vector<CountTable> counts;
    for (const auto& epoch : pipe.axis) {
        streams.push_back(read_tokens(fs::path(cfg.corpus_dir) /
                                          (std::to_string(epoch.label) + ".txt"),
                                      epoch));
        counts.push_back(epoch_counts(streams.back()));
    }
    pipe.vocab = build_vocabulary(counts, cfg.min_count, allow_ptr);

    pipe.embeddings.axis = pipe.axis;
    pipe.embeddings.vocabulary = pipe.vocab;
    for (std::size_t t = 0; t < streams.size(); ++t)
        pipe.embeddings.epochs.push_back(train_count_embedding(
            streams[t], pipe.vocab, cfg.window, cfg.dim, derive_seed(cfg.seed, t)));

    if (need_sos)
        for (const auto& emb : pipe.embeddings.epochs)
            pipe.sos.push_back(second_order_matrix(emb, pipe.vocab, cfg.threads));
    return pipe;
}

Pipeline from_embeddings(const RunConfig& cfg, bool need_sos) {
    Pipeline pipe;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.embeddings_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".emb") continue;
        const std::string stem = entry.path().stem().string();
        try {
            std::size_t pos = 0;
            const long label = std::stol(stem, &pos);
            if (pos != stem.size()) continue;
            pipe.axis.push_back(EpochId{label});
            files.push_back(entry.path());
        } catch (const std::exception&) {
        }
    }
    if (pipe.axis.size() < 2)
        throw IoError("embeddings directory needs at least two <label>.emb files");
    std::vector<std::size_t> order(files.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pipe.axis[a] < pipe.axis[b]; });
    std::sort(pipe.axis.begin(), pipe.axis.end());

    // Vocabulary = intersection of the words listed in every file.
    std::set<std::string> common;
    for (std::size_t k = 0; k < order.size(); ++k) {
        std::ifstream in(files[order[k]]);
        if (!in) throw IoError("cannot open " + files[order[k]].string());
        std::set<std::string> here;
        std::string line, word;
        std::getline(in, line); // header
        while (std::getline(in, line)) {
            std::istringstream fields(line);
            if (fields >> word) here.insert(word);
        }
        if (k == 0)
            common = std::move(here);
        else {
            std::set<std::string> kept;
            std::set_intersection(common.begin(), common.end(), here.begin(), here.end(),
                                  std::inserter(kept, kept.begin()));
            common = std::move(kept);
        }
    }
    if (common.empty())
        throw NoCommonVocabulary("no word is present in every embedding file");

    pipe.vocab.min_count = 1;
    pipe.vocab.words.assign(common.begin(), common.end());
    pipe.vocab.counts.assign(pipe.vocab.words.size(),
                             std::vector<std::int64_t>(pipe.axis.size(), 1));
    for (std::size_t i = 0; i < pipe.vocab.words.size(); ++i)
        pipe.vocab.index.emplace(pipe.vocab.words[i], static_cast<int>(i));

    pipe.embeddings.axis = pipe.axis;
    pipe.embeddings.vocabulary = pipe.vocab;
    int first_dim = -1;
    for (std::size_t k = 0; k < order.size(); ++k) {
        pipe.embeddings.epochs.push_back(
            load_embedding_file(files[order[k]], pipe.vocab, pipe.axis[k]));
        if (first_dim < 0) first_dim = pipe.embeddings.epochs.back().dim;
        if (pipe.embeddings.epochs.back().dim != first_dim)
            std::cerr << "warning: embedding dimensions differ across epochs; "
                         "second-order construction erases the difference\n";
    }
    if (need_sos)
        for (const auto& emb : pipe.embeddings.epochs)
            pipe.sos.push_back(second_order_matrix(emb, pipe.vocab, cfg.threads));
    return pipe;
}

Pipeline load_pipeline(const RunConfig& cfg, bool need_sos = true) {
    if (cfg.corpus_dir.empty() == cfg.embeddings_dir.empty())
        throw InvalidSpec("exactly one of --corpus and --embeddings must be given");
    return cfg.corpus_dir.empty() ? from_embeddings(cfg, need_sos) : from_corpus(cfg, need_sos);
}

void write_vocabulary(Outputs& out, const Pipeline& pipe) {
    CsvWriter csv(out.file("vocabulary.csv").string());
    csv.cell(std::string("word"));
    for (const auto& epoch : pipe.axis) csv.cell(std::string("count_") + std::to_string(epoch.label));
    csv.endrow();
    for (int i = 0; i < pipe.vocab.size(); ++i) {
        csv.cell(pipe.vocab.words[i]);
        for (auto c : pipe.vocab.counts[static_cast<std::size_t>(i)])
            csv.cell(static_cast<long>(c));
        csv.endrow();
    }
}

void write_histogram(const fs::path& path, const Histogram& hist) {
    CsvWriter csv(path.string());
    csv.cell(std::string("bin_lo")).cell(std::string("bin_hi")).cell(std::string("count"));
    csv.endrow();
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        csv.cell(hist.lo + hist.bin_width * static_cast<double>(b));
        csv.cell(hist.lo + hist.bin_width * static_cast<double>(b + 1));
        csv.cell(hist.counts[b]);
        csv.endrow();
    }
}

MeaningSeries pipeline_series(const Pipeline& pipe, const RunConfig& cfg) {
    return make_series(pipe.sos, pipe.vocab, pipe.axis, cfg.n, cfg.threads);
}

void write_evaluation_header(CsvWriter& csv) {
    csv.cell(std::string("n")).cell(std::string("p"));
    csv.cell(std::string("mean_adj_r2")).cell(std::string("std_adj_r2"));
    csv.cell(std::string("mean_pred_err")).cell(std::string("std_pred_err"));
    csv.cell(std::string("mean_baseline")).cell(std::string("std_baseline"));
    csv.cell(std::string("fitted")).cell(std::string("skipped"));
    csv.endrow();
}

void write_evaluation_row(CsvWriter& csv, const EvaluationSummary& s) {
    csv.cell(s.n).cell(s.p);
    csv.cell(s.mean_adj_r2).cell(s.std_adj_r2);
    csv.cell(s.mean_pred_err).cell(s.std_pred_err);
    csv.cell(s.mean_baseline).cell(s.std_baseline);
    csv.cell(s.fitted).cell(s.skipped);
    csv.endrow();
}

// ---- subcommand bodies -------------------------------------------------

void cmd_ingest(const RunConfig& cfg, Outputs& out) {
    RunConfig local = cfg;
    local.dim = 1; // no embeddings needed; avoid wasted work
    if (local.corpus_dir.empty())
        throw InvalidSpec("ingest requires --corpus");
    Pipeline pipe;
    pipe.axis = scan_corpus_dir(local.corpus_dir);
    std::unordered_set<std::string> allow;
    const std::unordered_set<std::string>* allow_ptr = nullptr;
    if (!local.allowlist.empty()) {
        allow = read_allowlist(local.allowlist);
        allow_ptr = &allow;
    }
    std::vector<CountTable> counts;
    for (const auto& epoch : pipe.axis)
        counts.push_back(epoch_counts(read_tokens(
            fs::path(local.corpus_dir) / (std::to_string(epoch.label) + ".txt"), epoch)));
    pipe.vocab = build_vocabulary(counts, local.min_count, allow_ptr);
    write_vocabulary(out, pipe);
    write_meta(out, "ingest", cfg, {{"vocabulary_size", pipe.vocab.size()}});
}

void cmd_embed(const RunConfig& cfg, Outputs& out) {
    if (cfg.corpus_dir.empty())
        throw InvalidSpec("embed requires --corpus");
    Pipeline pipe = from_corpus(cfg, /*need_sos=*/false);
    for (std::size_t t = 0; t < pipe.embeddings.epochs.size(); ++t)
        save_embedding_file(out.file(std::to_string(pipe.axis[t].label) + ".emb"),
                            pipe.embeddings.epochs[t], pipe.vocab);
    write_vocabulary(out, pipe);
    write_meta(out, "embed", cfg, {{"vocabulary_size", pipe.vocab.size()}});
}

void cmd_second_order(const RunConfig& cfg, Outputs& out) {
    Pipeline pipe = load_pipeline(cfg);
    for (std::size_t t = 0; t < pipe.sos.size(); ++t) {
        CsvWriter csv(out.file("second_order_" + std::to_string(pipe.axis[t].label) + ".csv")
                          .string());
        csv.cell(std::string("word"));
        for (const auto& w : pipe.vocab.words) csv.cell(w);
        csv.endrow();
        for (int i = 0; i < pipe.vocab.size(); ++i) {
            csv.cell(pipe.vocab.words[i]);
            for (int j = 0; j < pipe.vocab.size(); ++j) csv.cell(pipe.sos[t].sims(i, j));
            csv.endrow();
        }
    }
    write_meta(out, "second-order", cfg, {{"vocabulary_size", pipe.vocab.size()}});
}

void cmd_tiss_decay(const RunConfig& cfg, Outputs& out) {
    Pipeline pipe = load_pipeline(cfg);
    const auto graphs = all_tiss_graphs(pipe.sos, pipe.vocab, cfg.threads);

    const DecayCurve aggregate = aggregate_decay_curve(graphs);
    const auto stds = decay_std_across_words(graphs);
    {
        CsvWriter csv(out.file("decay_curve.csv").string());
        csv.cell(std::string("t0")).cell(std::string("value")).cell(std::string("count"));
        csv.cell(std::string("std_across_words"));
        csv.endrow();
        for (std::size_t i = 0; i < aggregate.points.size(); ++i) {
            csv.cell(aggregate.points[i].t0).cell(aggregate.points[i].value);
            csv.cell(aggregate.points[i].count).cell(stds[i]);
            csv.endrow();
        }
    }

    std::vector<DecayFit> fits(graphs.size());
    parallel_for(graphs.size(), cfg.threads, [&](std::size_t i) {
        fits[i] = fit_decay(word_decay_curve(graphs[i]), cfg.weighted);
    });
    {
        CsvWriter csv(out.file("decay_fits.csv").string());
        csv.cell(std::string("word")).cell(std::string("slope")).cell(std::string("slope_pct"));
        csv.cell(std::string("intercept")).cell(std::string("adj_r2")).cell(std::string("stderr"));
        csv.endrow();
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            csv.cell(graphs[i].word).cell(fits[i].slope).cell(fits[i].slope * 100.0);
            csv.cell(fits[i].intercept).cell(fits[i].adjusted_r2).cell(fits[i].std_error_slope);
            csv.endrow();
        }
    }

    const DecayFit aggregate_fit = fit_decay(aggregate, cfg.weighted);
    const DecayDistribution dist = decay_distribution(fits, cfg.bins);
    write_histogram(out.file("decay_slope_hist.csv"), dist.slope_pct);
    write_histogram(out.file("decay_r2_hist.csv"), dist.adjusted_r2);

    json extra;
    extra["aggregate_fit"] = {{"slope", aggregate_fit.slope},
                              {"slope_pct", aggregate_fit.slope * 100.0},
                              {"intercept", aggregate_fit.intercept},
                              {"adj_r2", aggregate_fit.adjusted_r2},
                              {"stderr_slope", aggregate_fit.std_error_slope}};
    extra["distribution"] = {{"mean_slope", dist.mean_slope},
                             {"median_slope", dist.median_slope},
                             {"skewness", dist.skewness_slope},
                             {"share_negative", dist.share_negative},
                             {"share_r2_at_least_075", dist.share_r2_at_least_075}};
    extra["weighted_fit"] = cfg.weighted;
    extra["r2_convention"] = cfg.weighted ? "uncentered (weighted, no intercept column)"
                                          : "centered (intercept fitted)";
    write_meta(out, "tiss-decay", cfg, extra);
}

void cmd_tiss_rank(const RunConfig& cfg, Outputs& out) {
    Pipeline pipe = load_pipeline(cfg);
    const auto graphs = all_tiss_graphs(pipe.sos, pipe.vocab, cfg.threads);
    const ChangeRanking ranking = rank_changes(graphs);
    CsvWriter csv(out.file("ranking.csv").string());
    csv.cell(std::string("rank")).cell(std::string("word")).cell(std::string("ratio"));
    csv.cell(std::string("max_s")).cell(std::string("max_t"));
    csv.cell(std::string("min_s")).cell(std::string("min_t"));
    csv.endrow();
    long rank = 1;
    for (const auto& entry : ranking.entries) {
        csv.cell(rank++).cell(entry.word).cell(entry.ratio);
        csv.cell(static_cast<long>(pipe.axis[static_cast<std::size_t>(entry.max_edge.s)].label));
        csv.cell(static_cast<long>(pipe.axis[static_cast<std::size_t>(entry.max_edge.t)].label));
        csv.cell(static_cast<long>(pipe.axis[static_cast<std::size_t>(entry.min_edge.s)].label));
        csv.cell(static_cast<long>(pipe.axis[static_cast<std::size_t>(entry.min_edge.t)].label));
        csv.endrow();
    }
    write_meta(out, "tiss-rank", cfg, {{"words", ranking.entries.size()}});
}

void write_dynamics_fits(Outputs& out, const std::vector<DynamicsFit>& fits) {
    CsvWriter csv(out.file("dynamics_fits.csv").string());
    csv.cell(std::string("target")).cell(std::string("neighbor")).cell(std::string("lag"));
    csv.cell(std::string("coefficient")).cell(std::string("t_stat")).cell(std::string("adj_r2"));
    csv.endrow();
    for (const auto& fit : fits)
        for (std::size_t j = 0; j < fit.neighbors.members.size(); ++j)
            for (int n = 1; n <= fit.order; ++n) {
                csv.cell(fit.target).cell(fit.neighbors.members[j]).cell(n);
                csv.cell(fit.coefficients(static_cast<int>(j), n - 1));
                csv.cell(fit.fit.t_stats[static_cast<int>(j) * fit.order + (n - 1)]);
                csv.cell(fit.fit.adjusted_r2);
                csv.endrow();
            }
}

void cmd_dynamics_fit(const RunConfig& cfg, Outputs& out) {
    Pipeline pipe = load_pipeline(cfg);
    const MeaningSeries series = pipeline_series(pipe, cfg);
    std::vector<DynamicsFit> fits;
    const EvaluationSummary summary = evaluate_all(series, cfg.p, cfg.threads, &fits);
    write_dynamics_fits(out, fits);
    write_meta(out, "dynamics-fit", cfg,
               {{"n", cfg.n}, {"p", cfg.p}, {"fitted", summary.fitted},
                {"skipped", summary.skipped},
                {"r2_convention", "uncentered (no intercept)"}});
}

void cmd_dynamics_eval(const RunConfig& cfg, Outputs& out) {
    Pipeline pipe = load_pipeline(cfg);
    CsvWriter csv(out.file("evaluation.csv").string());
    write_evaluation_header(csv);
    json skipped = json::array();
    const std::vector<int> ns = cfg.grid ? std::vector<int>{5, 10, 20} : std::vector<int>{cfg.n};
    const std::vector<int> ps = cfg.grid ? std::vector<int>{1, 2} : std::vector<int>{cfg.p};

    // Row matrices are shared across the sweep; only neighbor sets change
    // with n. Moving the similarity matrices avoids a second copy of the
    // largest allocation.
    std::vector<std::vector<NeighborSet>> neighbors_by_n;
    for (int n : ns)
        neighbors_by_n.push_back(all_neighbor_sets(pipe.sos, pipe.vocab, n, cfg.threads));
    MeaningSeries series;
    series.words = pipe.vocab.words;
    series.axis = pipe.axis;
    for (auto& m : pipe.sos) series.rows.push_back(std::move(m.sims));
    pipe.sos.clear();

    for (std::size_t ni = 0; ni < ns.size(); ++ni) {
        series.neighbors = std::move(neighbors_by_n[ni]);
        for (int p : ps) {
            const EvaluationSummary summary = evaluate_all(series, p, cfg.threads);
            write_evaluation_row(csv, summary);
            skipped.push_back({{"n", ns[ni]}, {"p", p}, {"skipped", summary.skipped}});
        }
    }
    write_meta(out, "dynamics-eval", cfg,
               {{"grid", cfg.grid}, {"skipped_words", skipped},
                {"r2_convention", "uncentered (no intercept)"},
                {"prediction_error_space", "masked support coordinates"}});
}

void cmd_diff_pairs(const RunConfig& cfg, Outputs& out) {
    Pipeline pipe = load_pipeline(cfg);
    const MeaningSeries series = pipeline_series(pipe, cfg);
    std::vector<DynamicsFit> fits;
    const EvaluationSummary summary = evaluate_all(series, cfg.p, cfg.threads, &fits);
    const auto pairs = negative_pairs(fits, cfg.t_threshold);
    CsvWriter csv(out.file("negative_pairs.csv").string());
    csv.cell(std::string("target")).cell(std::string("neighbor")).cell(std::string("lag"));
    csv.cell(std::string("coefficient")).cell(std::string("t_stat"));
    csv.endrow();
    for (const auto& pair : pairs) {
        csv.cell(pair.target).cell(pair.neighbor).cell(pair.lag);
        csv.cell(pair.coefficient).cell(pair.t_stat);
        csv.endrow();
    }
    write_meta(out, "diff-pairs", cfg,
               {{"n", cfg.n}, {"p", cfg.p}, {"t_threshold", cfg.t_threshold},
                {"pairs", pairs.size()}, {"skipped", summary.skipped}});
}

void cmd_forecast(const RunConfig& cfg, Outputs& out) {
    if (cfg.word.empty())
        throw InvalidSpec("forecast requires --word");
    Pipeline pipe = load_pipeline(cfg);
    const MeaningSeries series = pipeline_series(pipe, cfg);
    const auto idx = pipe.vocab.find(cfg.word);
    if (!idx)
        throw UnknownWord("word not in vocabulary: " + cfg.word);
    const auto steps = forecast(series, *idx, cfg.p, cfg.horizon);
    const auto& support = series.neighbors[static_cast<std::size_t>(*idx)].member_indices;
    CsvWriter csv(out.file("forecast.csv").string());
    csv.cell(std::string("step")).cell(std::string("coordinate")).cell(std::string("value"));
    csv.endrow();
    for (std::size_t h = 0; h < steps.size(); ++h)
        for (std::size_t c = 0; c < support.size(); ++c) {
            csv.cell(static_cast<long>(h + 1));
            csv.cell(pipe.vocab.words[static_cast<std::size_t>(support[c])]);
            csv.cell(steps[h][static_cast<int>(c)]);
            csv.endrow();
        }
    write_meta(out, "forecast", cfg,
               {{"word", cfg.word}, {"n", cfg.n}, {"p", cfg.p}, {"horizon", cfg.horizon}});
}

void cmd_synth(const RunConfig& cfg, Outputs& out) {
    if (cfg.spec_file.empty())
        throw InvalidSpec("synth requires --spec");
    if (cfg.kind == "decay") {
        const DecaySpec spec = parse_decay_spec(cfg.spec_file);
        const DecayData data = gen_decay_graphs(spec);
        CsvWriter csv(out.file("tiss_graphs.csv").string());
        csv.cell(std::string("word")).cell(std::string("s")).cell(std::string("t"));
        csv.cell(std::string("weight"));
        csv.endrow();
        for (const auto& graph : data.graphs)
            for (int s = 0; s < graph.weights.rows(); ++s)
                for (int t = s + 1; t < graph.weights.cols(); ++t) {
                    csv.cell(graph.word).cell(s).cell(t).cell(graph.weights(s, t));
                    csv.endrow();
                }
        write_meta(out, "synth", cfg,
                   {{"kind", "decay"}, {"clamped", data.clamped},
                    {"epochs", spec.epochs}, {"words", spec.words}});
    } else if (cfg.kind == "var") {
        const VarSpec spec = parse_var_spec(cfg.spec_file);
        const VarData data = gen_var_embeddings(spec);
        // rows reuse the plain-text embedding format (dim = |V|)
        Vocabulary vocab;
        vocab.words = data.series.words;
        vocab.min_count = 1;
        vocab.counts.assign(vocab.words.size(),
                            std::vector<std::int64_t>(data.series.axis.size(), 1));
        for (std::size_t i = 0; i < vocab.words.size(); ++i)
            vocab.index.emplace(vocab.words[i], static_cast<int>(i));
        for (std::size_t t = 0; t < data.series.rows.size(); ++t) {
            EpochEmbedding emb;
            emb.epoch = data.series.axis[t];
            emb.dim = static_cast<int>(data.series.rows[t].cols());
            emb.matrix = data.series.rows[t];
            save_embedding_file(
                out.file(std::to_string(data.series.axis[t].label) + ".emb"), emb, vocab);
        }
        CsvWriter csv(out.file("true_coefficients.csv").string());
        csv.cell(std::string("neighbor_offset")).cell(std::string("lag"));
        csv.cell(std::string("coefficient"));
        csv.endrow();
        for (int m = 0; m < spec.neighbors; ++m)
            for (int n = 0; n < spec.order; ++n) {
                csv.cell(m + 1).cell(n + 1).cell(spec.coefficients(m, n));
                csv.endrow();
            }
        write_meta(out, "synth", cfg,
                   {{"kind", "var"}, {"epochs", spec.epochs}, {"words", spec.words},
                    {"neighbors", spec.neighbors}, {"order", spec.order}});
    } else {
        throw InvalidSpec("--kind must be 'decay' or 'var'");
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graph models of lexical semantic change over per-epoch word embeddings"};
    app.require_subcommand(1);

    RunConfig cfg;
    if (const char* env = std::getenv("SEMCHANGE_OUT")) cfg.out_dir = env;
    if (cfg.out_dir.empty()) cfg.out_dir = "out";

    const auto add_common = [&](CLI::App* sub, bool pipeline_input) {
        if (pipeline_input) {
            sub->add_option("--corpus", cfg.corpus_dir, "Corpus directory (<label>.txt per epoch)");
            sub->add_option("--embeddings", cfg.embeddings_dir,
                            "Embeddings directory (<label>.emb per epoch)");
            sub->add_option("--allowlist", cfg.allowlist, "Optional word allowlist file");
            sub->add_option("--min-count", cfg.min_count, "Frequency threshold per epoch")
                ->check(CLI::PositiveNumber);
            sub->add_option("--window", cfg.window, "Co-occurrence window")
                ->check(CLI::PositiveNumber);
            sub->add_option("--dim", cfg.dim, "Embedding dimension")->check(CLI::PositiveNumber);
        }
        sub->add_option("--out", cfg.out_dir, "Output directory (default $SEMCHANGE_OUT or ./out)");
        sub->add_option("--seed", cfg.seed, "Seed for all randomized steps");
        sub->add_option("--threads", cfg.threads, "Worker thread cap (0 = hardware)");
        return sub;
    };
    const auto add_model = [&](CLI::App* sub) {
        sub->add_option("--n", cfg.n, "Neighbors per epoch")->check(CLI::PositiveNumber);
        sub->add_option("--p", cfg.p, "Model order (lags)")->check(CLI::PositiveNumber);
        return sub;
    };

    auto* ingest = add_common(app.add_subcommand("ingest", "Build the common vocabulary"), true);
    auto* embed = add_common(app.add_subcommand("embed", "Train per-epoch embeddings"), true);
    auto* second = add_common(
        app.add_subcommand("second-order", "Export per-epoch similarity matrices"), true);
    auto* decay = add_common(
        app.add_subcommand("tiss-decay", "Decay curves, per-word fits, distributions"), true);
    decay->add_flag("--weighted", cfg.weighted, "Weight decay fit by pair counts");
    decay->add_option("--bins", cfg.bins, "Histogram bins")->check(CLI::PositiveNumber);
    auto* rank = add_common(
        app.add_subcommand("tiss-rank", "Rank words by maxlink/minlink ratio"), true);
    auto* dfit = add_model(add_common(
        app.add_subcommand("dynamics-fit", "Estimate lag coefficients per word"), true));
    auto* deval = add_model(add_common(
        app.add_subcommand("dynamics-eval", "Held-out evaluation vs persistence baseline"), true));
    deval->add_flag("--grid", cfg.grid, "Run the full n x p grid (5,10,20) x (1,2)");
    auto* pairs = add_model(add_common(
        app.add_subcommand("diff-pairs", "Significantly negative coefficient pairs"), true));
    pairs->add_option("--t-threshold", cfg.t_threshold, "Minimum |t| for significance");
    auto* fcast = add_model(add_common(
        app.add_subcommand("forecast", "Iterate the joint model beyond the last epoch"), true));
    fcast->add_option("--word", cfg.word, "Target word");
    fcast->add_option("--horizon", cfg.horizon, "Steps ahead")->check(CLI::PositiveNumber);
    auto* synth = add_common(app.add_subcommand("synth", "Generate ground-truth data"), false);
    synth->add_option("--spec", cfg.spec_file, "Key-value spec file")->required();
    synth->add_option("--kind", cfg.kind, "decay | var");

    CLI11_PARSE(app, argc, argv);

    Outputs out{cfg.out_dir};
    try {
        if (ingest->parsed()) cmd_ingest(cfg, out);
        else if (embed->parsed()) cmd_embed(cfg, out);
        else if (second->parsed()) cmd_second_order(cfg, out);
        else if (decay->parsed()) cmd_tiss_decay(cfg, out);
        else if (rank->parsed()) cmd_tiss_rank(cfg, out);
        else if (dfit->parsed()) cmd_dynamics_fit(cfg, out);
        else if (deval->parsed()) cmd_dynamics_eval(cfg, out);
        else if (pairs->parsed()) cmd_diff_pairs(cfg, out);
        else if (fcast->parsed()) cmd_forecast(cfg, out);
        else if (synth->parsed()) cmd_synth(cfg, out);
    } catch (const std::exception& e) {
        out.discard_all();
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
