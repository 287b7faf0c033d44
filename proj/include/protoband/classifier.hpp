#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "protoband/trainer.hpp"

namespace protoband {

// Nearest-prototype class id under the trained metric; ties go to the lowest
// class id. Throws DataError on dimension mismatch.
int predict(const std::vector<double>& features, const Model& model);

struct RankedPrediction {
    int class_id = 0;
    double distance = 0.0;
};

// The `top` nearest prototypes, distances ascending (ties by class id).
std::vector<RankedPrediction> predict_ranked(const std::vector<double>& features,
                                             const Model& model, int top);

struct WeightReportRow {
    int dimension = 0;
    std::string band_label;
    double weight = 0.0;
};

struct ExplainReport {
    std::vector<WeightReportRow> weights;                 // sorted by weight, descending
    std::vector<std::vector<double>> prototype_distances; // N x N, trained metric
};

ExplainReport explain(const Model& model);

void write_explain_report(const ExplainReport& report, const Model& model, std::ostream& out);

} // namespace protoband
