#include "keyclust/cli.hpp"

#include <cstdlib>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "keyclust/pipeline.hpp"

namespace keyclust {

namespace {

struct Flags {
    PipelineRunConfig run;
    std::vector<std::string> corpora;
    std::string cleaning_config;
    std::string mode = "modified";
    std::string seeding = "random";
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--out", f.run.out, "Output directory (stages under <out>/stages)");
    cmd->add_option("--threads", f.run.cluster.threads, "Worker threads")->check(CLI::Range(1u, 256u));
    cmd->add_option("--config", f.cleaning_config, "Cleaning config (JSON)");
    cmd->add_option("--seed", f.run.cluster.seed, "Random seed");
}

void add_ingest(CLI::App* cmd, Flags& f, bool required) {
    auto* corpus = cmd->add_option("--corpus", f.corpora, "Corpus directory and label as <path>:<label>");
    if (required) corpus->required();
    cmd->add_option("--batch-size", f.run.batch_size, "Articles per batch");
}

void add_vectorize(CLI::App* cmd, Flags& f) {
    cmd->add_option("--min-df", f.run.min_df, "Minimum document frequency of a term");
    cmd->add_option("--max-df", f.run.max_df_ratio, "Maximum document frequency as a fraction of chunks");
}

void add_clustering(CLI::App* cmd, Flags& f) {
    cmd->add_option("--epsilon", f.run.cluster.epsilon, "Convergence bound on summed centroid movement");
    cmd->add_option("--max-iter", f.run.cluster.max_iter, "Iteration limit");
    cmd->add_option("--seeding", f.seeding, "Centroid seeding")
        ->check(CLI::IsMember({"random", "random_distinct", "partial"}));
}

void add_cluster(CLI::App* cmd, Flags& f) {
    cmd->add_option("--query", f.run.query, "Search query");
    cmd->add_option("--k", f.run.cluster.k, "Number of clusters");
    cmd->add_option("--threshold", f.run.cluster.threshold, "Distance gap for a second cluster");
    cmd->add_option("--damping", f.run.cluster.damping_weight, "Weight of the previous centroid");
    cmd->add_flag("--raw-denominator", f.run.cluster.raw_denominator, "Divide centroid sums by member count");
    add_clustering(cmd, f);
}

}  // namespace

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Keyword-weighted document clustering", "keyclust"};
    app.require_subcommand(1);
    Flags f;

    auto* ingest = app.add_subcommand("ingest", "Load corpora and write the chunk stage");
    add_common(ingest, f);
    add_ingest(ingest, f, true);

    auto* vectorize = app.add_subcommand("vectorize", "Build vocabulary and tf-idf stages");
    add_common(vectorize, f);
    add_vectorize(vectorize, f);

    auto* reduce = app.add_subcommand("reduce", "Project tf-idf vectors with PCA");
    add_common(reduce, f);
    reduce->add_option("--pca-dim", f.run.pca_dim, "Target dimension (capped by the data)");

    auto* cluster = app.add_subcommand("cluster", "Fit a clustering model");
    add_common(cluster, f);
    add_cluster(cluster, f);
    cluster->add_option("--mode", f.mode, "Algorithm variant")->check(CLI::IsMember({"modified", "standard"}));
    cluster->add_option("--restarts", f.run.restarts, "Seeded runs; the lowest distortion is kept");

    auto* elbow = app.add_subcommand("elbow", "Distortion against k (standard mode)");
    add_common(elbow, f);
    add_clustering(elbow, f);
    elbow->add_option("--k-min", f.run.k_min, "Smallest k");
    elbow->add_option("--k-max", f.run.k_max, "Largest k");
    elbow->add_option("--restarts", f.run.elbow_restarts, "Seeded runs per k");

    auto* report = app.add_subcommand("report", "Compare the standard and modified models");
    add_common(report, f);
    report->add_option("--query", f.run.query, "Search query (defaults to the one stored with the model)");

    auto* all = app.add_subcommand("run-all", "Every stage in order");
    add_common(all, f);
    add_ingest(all, f, true);
    add_vectorize(all, f);
    all->add_option("--pca-dim", f.run.pca_dim, "Target dimension (capped by the data)");
    add_cluster(all, f);
    all->add_option("--k-min", f.run.k_min, "Smallest k for the elbow scan");
    all->add_option("--k-max", f.run.k_max, "Largest k for the elbow scan");
    all->add_option("--restarts", f.run.elbow_restarts, "Seeded runs per k in the elbow scan");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    std::function<void(const PipelineRunConfig&, std::ostream&)> stage;
    if (ingest->parsed()) stage = run_ingest;
    if (vectorize->parsed()) stage = run_vectorize;
    if (reduce->parsed()) stage = run_reduce;
    if (cluster->parsed()) stage = run_cluster;
    if (elbow->parsed()) stage = run_elbow;
    if (report->parsed()) stage = run_report;
    if (all->parsed()) stage = run_all;

    try {
        for (const auto& c : f.corpora) f.run.corpora.push_back(parse_corpus_spec(c));
        if (!f.cleaning_config.empty()) f.run.cleaning_config = f.cleaning_config;
        if (const char* env = std::getenv("KEYCLUST_STOPLIST"); env != nullptr && *env != '\0') {
            f.run.stoplist_override = env;
        }
        f.run.cluster.mode = parse_cluster_mode(f.mode);
        f.run.cluster.seeding = parse_seeding(f.seeding);
        f.run.validate();
        const bool needs_query = all->parsed() || (cluster->parsed() && f.run.cluster.mode == ClusterMode::Modified);
        if (needs_query && f.run.query.empty()) throw InvalidConfig("--query is required for the modified mode");
    } catch (const Error& e) {
        err << "keyclust: " << e.what() << '\n';
        return 2;
    }

    try {
        stage(f.run, err);
    } catch (const std::exception& e) {
        err << "keyclust: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int execute(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return execute(args, std::cout, std::cerr);
}

}  // namespace keyclust
