// protoband: wavelet band features + learned diagonal metric + nearest-prototype
// classification. Subcommands cover the full pipeline:
//   synth    write the bundled synthetic demo dataset (wav + manifest + embeddings)
//   extract  manifest -> feature CSV (+ classes CSV)
//   graph    embeddings CSV -> adjacency CSV (top-K cosine neighbors)
//   train    features + adjacency -> model file (+ energy trace CSV)
//   predict  model + features -> prediction CSV
//   explain  model -> per-dimension weight and prototype distance report

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "protoband/classifier.hpp"
#include "protoband/dataset_io.hpp"
#include "protoband/errors.hpp"
#include "protoband/model_io.hpp"
#include "protoband/synthetic.hpp"
#include "protoband/trainer.hpp"
#include "protoband/wavelet.hpp"

namespace {

using namespace protoband;

struct WaveletFlags {
    std::string family = "db4";
    int levels = 5;
    int coeffs_per_band = 10;
    std::string boundary = "periodic";
    bool no_normalize = false;

    WaveletConfig to_config() const {
        WaveletConfig config;
        config.family = family;
        config.levels = levels;
        config.coeffs_per_band = coeffs_per_band;
        config.boundary = boundary_from_string(boundary);
        config.normalize = !no_normalize;
        return config;
    }
};

void add_wavelet_flags(CLI::App* cmd, WaveletFlags& flags) {
    cmd->add_option("--wavelet", flags.family, "Wavelet family: haar, db2, db4")
        ->capture_default_str();
    cmd->add_option("--levels", flags.levels, "Decomposition depth L")->capture_default_str();
    cmd->add_option("--coeffs-per-band", flags.coeffs_per_band, "Coefficients kept per band (k)")
        ->capture_default_str();
    cmd->add_option("--boundary", flags.boundary, "Boundary mode: periodic, symmetric, zero")
        ->capture_default_str();
    cmd->add_flag("--no-normalize", flags.no_normalize,
                  "Skip peak-amplitude normalization before decomposition");
}

struct ExtractArgs {
    std::string manifest;
    std::string out;
    std::string classes_out;
    WaveletFlags wavelet;
};

void run_extract(const ExtractArgs& args) {
    const LoadedDataset loaded = load_manifest(args.manifest, args.wavelet.to_config());
    write_features_csv(args.out, loaded);
    if (!args.classes_out.empty()) write_classes_csv(args.classes_out, loaded.registry);
    std::cerr << "extracted " << loaded.data.size() << " samples, " << loaded.registry.size()
              << " classes\n";
}

struct GraphArgs {
    std::string embeddings;
    std::string out;
    int k_neighbors = 3;
};

void run_graph(const GraphArgs& args) {
    const NamedEmbeddings named = load_embeddings_csv(args.embeddings);
    ClassRegistry registry = make_registry(named.names);
    const EmbeddingTable table = embeddings_for_registry(named, registry);
    const SemanticGraph graph = build_adjacency(registry, table, args.k_neighbors);
    write_adjacency_csv(args.out, graph, registry);
    std::cerr << "wrote " << graph.edges.size() << " edges over " << registry.size()
              << " classes\n";
}

struct TrainArgs {
    std::string manifest;
    std::string features;
    std::string classes;
    std::string adjacency;
    std::string model_out;
    std::string trace_out;
    double lambda1 = 0.1;
    double lambda2 = 0.01;
    double margin = 1.0;
    int t_max = 100;
    double epsilon = 1e-4;
    unsigned long long seed = 0; // reserved; the pipeline is deterministic
    WaveletFlags wavelet;
};

void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
    std::ofstream file(path);
    if (!file) throw DataError("cannot write '" + path + "'");
    file << "t,E_total,E_att,E_ten,E_rep\n";
    for (const TraceRow& row : trace) {
        file << row.iteration << "," << format_double(row.total) << ","
             << format_double(row.attachment) << "," << format_double(row.tension) << ","
             << format_double(row.repulsion) << "\n";
    }
    if (!file) throw DataError("failed writing '" + path + "'");
}

void run_train(const TrainArgs& args) {
    const WaveletConfig wavelet_config = args.wavelet.to_config();

    LoadedDataset loaded;
    if (!args.manifest.empty()) {
        loaded = load_manifest(args.manifest, wavelet_config);
    } else {
        loaded = load_features(args.features, args.classes);
    }
    const int dim = static_cast<int>(loaded.data.items.front().features.size());
    if (dim != wavelet_config.dim()) {
        throw DataError("feature dimension " + std::to_string(dim) +
                        " does not match (levels+1)*coeffs_per_band = " +
                        std::to_string(wavelet_config.dim()) +
                        "; pass the --levels/--coeffs-per-band used at extraction");
    }

    const SemanticGraph graph = load_adjacency_csv(args.adjacency, loaded.registry);

    Hyperparams hp;
    hp.lambda1 = args.lambda1;
    hp.lambda2 = args.lambda2;
    hp.margin = args.margin;

    TrainConfig tc;
    tc.t_max = args.t_max;
    tc.epsilon = args.epsilon;

    std::cerr << "t,E_total,E_att,E_ten,E_rep\n";
    const Model model = train(loaded.data, loaded.registry, graph, hp, tc, wavelet_config,
                              [](const TraceRow& row) {
                                  std::fprintf(stderr, "%d,%.17g,%.17g,%.17g,%.17g\n",
                                               row.iteration, row.total, row.attachment,
                                               row.tension, row.repulsion);
                              });

    save_model(model, args.model_out);
    if (!args.trace_out.empty()) write_trace_csv(args.trace_out, model.energy_trace);
}

struct PredictArgs {
    std::string model;
    std::string features;
    std::string out;
};

void run_predict(const PredictArgs& args) {
    const Model model = load_model(args.model);
    const LoadedDataset loaded = load_features_unlabeled(args.features);

    const int dim = static_cast<int>(loaded.data.items.front().features.size());
    if (dim != model.dim()) {
        throw DataError("feature dimension " + std::to_string(dim) +
                        " does not match model dimension " + std::to_string(model.dim()));
    }

    std::ofstream file(args.out);
    if (!file) throw DataError("cannot write '" + args.out + "'");
    file << "sample_id,predicted_class,distance,second_class,margin_gap\n";
    const int top = std::min(2, model.registry.size());
    for (std::size_t i = 0; i < loaded.data.items.size(); ++i) {
        const auto ranked = predict_ranked(loaded.data.items[i].features, model, top);
        file << loaded.sample_ids[i] << "," << model.registry.names[ranked[0].class_id] << ","
             << format_double(ranked[0].distance);
        if (ranked.size() > 1) {
            file << "," << model.registry.names[ranked[1].class_id] << ","
                 << format_double(ranked[1].distance - ranked[0].distance);
        } else {
            file << ",,";
        }
        file << "\n";
    }
    if (!file) throw DataError("failed writing '" + args.out + "'");
}

struct ExplainArgs {
    std::string model;
    std::string out;
};

void run_explain(const ExplainArgs& args) {
    const Model model = load_model(args.model);
    const ExplainReport report = explain(model);
    if (args.out.empty()) {
        write_explain_report(report, model, std::cout);
    } else {
        std::ofstream file(args.out);
        if (!file) throw DataError("cannot write '" + args.out + "'");
        write_explain_report(report, model, file);
    }
}

struct SynthArgs {
    std::string out_dir;
    int samples_per_class = 60;
    std::size_t length = 2048;
    int sample_rate = 16000;
    unsigned long long seed = 7;
};

void run_synth(const SynthArgs& args) {
    SyntheticConfig config;
    config.samples_per_class = args.samples_per_class;
    config.signal_length = args.length;
    config.sample_rate = args.sample_rate;
    config.seed = args.seed;
    write_synthetic_dataset(config, args.out_dir);
    std::cerr << "wrote synthetic dataset to " << args.out_dir << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet band features, learned diagonal metric, nearest-prototype classifier"};
    app.require_subcommand(1);

    ExtractArgs extract_args;
    CLI::App* extract = app.add_subcommand("extract", "Extract features from an audio manifest");
    extract->add_option("--manifest", extract_args.manifest, "Manifest CSV")->required();
    extract->add_option("--out", extract_args.out, "Output feature CSV")->required();
    extract->add_option("--classes-out", extract_args.classes_out, "Output classes CSV");
    add_wavelet_flags(extract, extract_args.wavelet);

    GraphArgs graph_args;
    CLI::App* graph = app.add_subcommand("graph", "Build the class adjacency graph");
    graph->add_option("--embeddings", graph_args.embeddings, "Class embeddings CSV")->required();
    graph->add_option("--out", graph_args.out, "Output adjacency CSV")->required();
    graph->add_option("--k-neighbors", graph_args.k_neighbors, "Neighbors per class")
        ->capture_default_str();

    TrainArgs train_args;
    CLI::App* train_cmd = app.add_subcommand("train", "Train prototypes and metric");
    train_cmd->add_option("--manifest", train_args.manifest,
                          "Manifest CSV (audio or inline features)");
    train_cmd->add_option("--features", train_args.features, "Feature CSV from `extract`");
    train_cmd->add_option("--classes", train_args.classes, "Classes CSV from `extract`");
    train_cmd->add_option("--adjacency", train_args.adjacency, "Adjacency CSV")->required();
    train_cmd->add_option("--model-out", train_args.model_out, "Output model file")->required();
    train_cmd->add_option("--trace-out", train_args.trace_out, "Output energy trace CSV");
    train_cmd->add_option("--lambda1", train_args.lambda1, "Neighbor smoothness weight")
        ->capture_default_str();
    train_cmd->add_option("--lambda2", train_args.lambda2, "Separation weight")
        ->capture_default_str();
    train_cmd->add_option("--margin", train_args.margin, "Separation margin")
        ->capture_default_str();
    train_cmd->add_option("--t-max", train_args.t_max, "Max outer iterations")
        ->capture_default_str();
    train_cmd->add_option("--epsilon", train_args.epsilon, "Energy-change stop threshold")
        ->capture_default_str();
    train_cmd->add_option("--seed", train_args.seed, "Reserved; training is deterministic");
    add_wavelet_flags(train_cmd, train_args.wavelet);

    PredictArgs predict_args;
    CLI::App* predict_cmd = app.add_subcommand("predict", "Classify feature rows");
    predict_cmd->add_option("--model", predict_args.model, "Model file")->required();
    predict_cmd->add_option("--features", predict_args.features, "Feature CSV")->required();
    predict_cmd->add_option("--out", predict_args.out, "Output prediction CSV")->required();

    ExplainArgs explain_args;
    CLI::App* explain_cmd = app.add_subcommand("explain", "Report weights and distances");
    explain_cmd->add_option("--model", explain_args.model, "Model file")->required();
    explain_cmd->add_option("--out", explain_args.out, "Output report path (default stdout)");

    SynthArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "Write the synthetic demo dataset");
    synth->add_option("--out-dir", synth_args.out_dir, "Output directory")->required();
    synth->add_option("--samples-per-class", synth_args.samples_per_class, "Samples per class")
        ->capture_default_str();
    synth->add_option("--length", synth_args.length, "Signal length in samples")
        ->capture_default_str();
    synth->add_option("--sample-rate", synth_args.sample_rate, "Sample rate in Hz")
        ->capture_default_str();
    synth->add_option("--seed", synth_args.seed, "Generator seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (extract->parsed()) run_extract(extract_args);
        if (graph->parsed()) run_graph(graph_args);
        if (train_cmd->parsed()) {
            const bool manifest_mode = !train_args.manifest.empty();
            const bool feature_mode = !train_args.features.empty();
            if (manifest_mode == feature_mode) {
                throw ConfigError("pass either --manifest or --features (with --classes)");
            }
            if (feature_mode && train_args.classes.empty()) {
                throw ConfigError("--features needs --classes to map ids to names");
            }
            run_train(train_args);
        }
        if (predict_cmd->parsed()) run_predict(predict_args);
        if (explain_cmd->parsed()) run_explain(explain_args);
        if (synth->parsed()) run_synth(synth_args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
