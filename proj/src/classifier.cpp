#include "protoband/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "protoband/errors.hpp"

namespace protoband {

namespace {

void check_query(const std::vector<double>& features, const Model& model) {
    if (static_cast<int>(features.size()) != model.dim()) {
        throw DataError("feature dimension " + std::to_string(features.size()) +
                        " does not match model dimension " + std::to_string(model.dim()));
    }
    if (model.prototypes.size() == 0) throw DataError("model has no prototypes");
}

} // namespace

int predict(const std::vector<double>& features, const Model& model) {
    check_query(features, model);
    const Metric metric = metric_from_theta(model.metric_params);
    int best = 0;
    double best_d2 = distance_squared(features, model.prototypes.vectors[0], metric);
    for (int c = 1; c < model.prototypes.size(); ++c) {
        const double d2 = distance_squared(features, model.prototypes.vectors[c], metric);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = c;
        }
    }
    return best;
}

std::vector<RankedPrediction> predict_ranked(const std::vector<double>& features,
                                             const Model& model, int top) {
    check_query(features, model);
    if (top < 1 || top > model.prototypes.size()) {
        throw ConfigError("ranked prediction count must be in [1, number of classes]");
    }
    const Metric metric = metric_from_theta(model.metric_params);
    std::vector<RankedPrediction> ranked;
    ranked.reserve(static_cast<std::size_t>(model.prototypes.size()));
    for (int c = 0; c < model.prototypes.size(); ++c) {
        ranked.push_back({c, distance(features, model.prototypes.vectors[c], metric)});
    }
    std::sort(ranked.begin(), ranked.end(), [](const RankedPrediction& a, const RankedPrediction& b) {
        if (a.distance != b.distance) return a.distance < b.distance;
        return a.class_id < b.class_id;
    });
    ranked.resize(static_cast<std::size_t>(top));
    return ranked;
}

ExplainReport explain(const Model& model) {
    const Metric metric = metric_from_theta(model.metric_params);
    const std::vector<std::string> labels = band_labels(model.wavelet);

    ExplainReport report;
    report.weights.reserve(metric.weights.size());
    for (std::size_t i = 0; i < metric.weights.size(); ++i) {
        std::string label = i < labels.size() ? labels[i] : "dim" + std::to_string(i);
        report.weights.push_back({static_cast<int>(i), std::move(label), metric.weights[i]});
    }
    std::sort(report.weights.begin(), report.weights.end(),
              [](const WeightReportRow& a, const WeightReportRow& b) {
                  if (a.weight != b.weight) return a.weight > b.weight;
                  return a.dimension < b.dimension;
              });

    const int n = model.prototypes.size();
    report.prototype_distances.assign(static_cast<std::size_t>(n),
                                      std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            report.prototype_distances[i][j] =
                distance(model.prototypes.vectors[i], model.prototypes.vectors[j], metric);
        }
    }
    return report;
}

void write_explain_report(const ExplainReport& report, const Model& model, std::ostream& out) {
    out << "metric weights (largest first)\n";
    out << "dimension,band,weight\n";
    for (const WeightReportRow& row : report.weights) {
        out << row.dimension << "," << row.band_label << "," << std::setprecision(6) << row.weight
            << "\n";
    }
    out << "\nprototype distances\n";
    out << "class";
    for (const std::string& name : model.registry.names) out << "," << name;
    out << "\n";
    for (std::size_t i = 0; i < report.prototype_distances.size(); ++i) {
        out << model.registry.names[i];
        for (double d : report.prototype_distances[i]) {
            out << "," << std::setprecision(6) << d;
        }
        out << "\n";
    }
}

} // namespace protoband
