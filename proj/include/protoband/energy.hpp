#pragma once

#include <vector>

#include "protoband/metric.hpp"
#include "protoband/semgraph.hpp"

namespace protoband {

// One prototype vector per class, indexed by class id.
struct Prototypes {
    std::vector<std::vector<double>> vectors;

    int size() const { return static_cast<int>(vectors.size()); }
};

struct Hyperparams {
    double lambda1 = 0.1;  // neighbor smoothness weight
    double lambda2 = 0.01; // separation weight
    double margin = 1.0;   // minimum prototype separation before penalty
};

struct DataItem {
    int class_id = 0;
    std::vector<double> features;
};

struct Dataset {
    std::vector<DataItem> items;

    int size() const { return static_cast<int>(items.size()); }
};

// Ordered prototype pairs closer than 1e-12 contribute neither energy
// direction nor gradient; the direction is undefined there.
constexpr double kPairDistanceFloor = 1e-12;

// Mean squared metric distance from each sample to its class prototype.
double attachment_energy(const Dataset& data, const Prototypes& protos, const Metric& metric);

// Sum over directed edges of w * d^2 between the endpoint prototypes.
double tension_energy(const Prototypes& protos, const SemanticGraph& graph, const Metric& metric);

// Sum over ordered pairs (i, j), i != j, of max(0, margin - d_ij)^2. Each
// unordered pair therefore contributes twice.
double repulsion_energy(const Prototypes& protos, const Metric& metric, double margin);

// attachment + lambda1 * tension + lambda2 * repulsion. Always >= 0.
double total_energy(const Dataset& data, const Prototypes& protos, const Metric& metric,
                    const SemanticGraph& graph, const Hyperparams& hp);

struct EnergyBreakdown {
    double total = 0.0;
    double attachment = 0.0;
    double tension = 0.0;
    double repulsion = 0.0;
};

EnergyBreakdown energy_breakdown(const Dataset& data, const Prototypes& protos,
                                 const Metric& metric, const SemanticGraph& graph,
                                 const Hyperparams& hp);

// d(total_energy)/d(prototype), one gradient vector per class.
std::vector<std::vector<double>> grad_prototypes(const Dataset& data, const Prototypes& protos,
                                                 const Metric& metric, const SemanticGraph& graph,
                                                 const Hyperparams& hp);

// d(total_energy)/d(theta) with weights a_i = exp(theta_i). Valid for theta
// strictly inside the clamp range.
std::vector<double> grad_theta(const Dataset& data, const Prototypes& protos,
                               const MetricParams& params, const SemanticGraph& graph,
                               const Hyperparams& hp);

} // namespace protoband
