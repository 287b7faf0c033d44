#include "protoband/energy.hpp"

#include <cmath>
#include <string>

#include "protoband/errors.hpp"

namespace protoband {

namespace {

void check_shapes(const Dataset& data, const Prototypes& protos, const Metric& metric) {
    const std::size_t dim = metric.weights.size();
    for (const auto& proto : protos.vectors) {
        if (proto.size() != dim) throw DataError("prototype dimension does not match the metric");
    }
    for (const DataItem& item : data.items) {
        if (item.class_id < 0 || item.class_id >= protos.size()) {
            throw DataError("sample references unregistered class id " +
                            std::to_string(item.class_id));
        }
        if (item.features.size() != dim) {
            throw DataError("sample feature dimension does not match the metric");
        }
    }
}

void check_graph(const SemanticGraph& graph, const Prototypes& protos) {
    for (const GraphEdge& e : graph.edges) {
        if (e.src < 0 || e.src >= protos.size() || e.dst < 0 || e.dst >= protos.size()) {
            throw DataError("graph edge references a class without a prototype");
        }
    }
}

} // namespace

double attachment_energy(const Dataset& data, const Prototypes& protos, const Metric& metric) {
    if (data.items.empty()) throw DataError("attachment energy needs a non-empty dataset");
    check_shapes(data, protos, metric);
    double sum = 0.0;
    for (const DataItem& item : data.items) {
        sum += distance_squared(item.features, protos.vectors[item.class_id], metric);
    }
    return sum / static_cast<double>(data.size());
}

double tension_energy(const Prototypes& protos, const SemanticGraph& graph, const Metric& metric) {
    check_graph(graph, protos);
    double sum = 0.0;
    for (const GraphEdge& e : graph.edges) {
        sum += e.weight * distance_squared(protos.vectors[e.src], protos.vectors[e.dst], metric);
    }
    return sum;
}

double repulsion_energy(const Prototypes& protos, const Metric& metric, double margin) {
    if (margin <= 0.0) throw ConfigError("repulsion margin must be positive");
    const int n = protos.size();
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = distance(protos.vectors[i], protos.vectors[j], metric);
            const double gap = margin - d;
            if (gap > 0.0) sum += gap * gap;
        }
    }
    return sum;
}

double total_energy(const Dataset& data, const Prototypes& protos, const Metric& metric,
                    const SemanticGraph& graph, const Hyperparams& hp) {
    return attachment_energy(data, protos, metric) +
           hp.lambda1 * tension_energy(protos, graph, metric) +
           hp.lambda2 * repulsion_energy(protos, metric, hp.margin);
}

EnergyBreakdown energy_breakdown(const Dataset& data, const Prototypes& protos,
                                 const Metric& metric, const SemanticGraph& graph,
                                 const Hyperparams& hp) {
    EnergyBreakdown e;
    e.attachment = attachment_energy(data, protos, metric);
    e.tension = tension_energy(protos, graph, metric);
    e.repulsion = repulsion_energy(protos, metric, hp.margin);
    e.total = e.attachment + hp.lambda1 * e.tension + hp.lambda2 * e.repulsion;
    return e;
}

std::vector<std::vector<double>> grad_prototypes(const Dataset& data, const Prototypes& protos,
                                                 const Metric& metric, const SemanticGraph& graph,
                                                 const Hyperparams& hp) {
    if (data.items.empty()) throw DataError("gradient needs a non-empty dataset");
    check_shapes(data, protos, metric);
    check_graph(graph, protos);

    const std::size_t dim = metric.weights.size();
    const int n = protos.size();
    const std::vector<double>& a = metric.weights;
    std::vector<std::vector<double>> grad(static_cast<std::size_t>(n),
                                          std::vector<double>(dim, 0.0));

    const double att_scale = 2.0 / static_cast<double>(data.size());
    for (const DataItem& item : data.items) {
        const std::vector<double>& proto = protos.vectors[item.class_id];
        std::vector<double>& g = grad[item.class_id];
        for (std::size_t i = 0; i < dim; ++i) {
            g[i] += att_scale * a[i] * (proto[i] - item.features[i]);
        }
    }

    for (const GraphEdge& e : graph.edges) {
        const std::vector<double>& ps = protos.vectors[e.src];
        const std::vector<double>& pd = protos.vectors[e.dst];
        const double scale = 2.0 * hp.lambda1 * e.weight;
        for (std::size_t i = 0; i < dim; ++i) {
            const double diff = ps[i] - pd[i];
            grad[e.src][i] += scale * a[i] * diff;
            grad[e.dst][i] -= scale * a[i] * diff;
        }
    }

    // For each ordered pair the hinge is active strictly below the margin;
    // coincident prototypes have no defined direction and contribute nothing.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = distance(protos.vectors[i], protos.vectors[j], metric);
            if (d >= hp.margin || d < kPairDistanceFloor) continue;
            const double scale = -2.0 * hp.lambda2 * (hp.margin - d) / d;
            for (std::size_t dd = 0; dd < dim; ++dd) {
                grad[i][dd] += scale * a[dd] * (protos.vectors[i][dd] - protos.vectors[j][dd]);
            }
        }
    }
    return grad;
}

std::vector<double> grad_theta(const Dataset& data, const Prototypes& protos,
                               const MetricParams& params, const SemanticGraph& graph,
                               const Hyperparams& hp) {
    if (data.items.empty()) throw DataError("gradient needs a non-empty dataset");
    const Metric metric = metric_from_theta(params);
    check_shapes(data, protos, metric);
    check_graph(graph, protos);

    const std::size_t dim = metric.weights.size();
    const std::vector<double>& a = metric.weights;
    // dE/da_i, scaled by a_i at the end (chain rule for a_i = exp(theta_i))
    std::vector<double> grad(dim, 0.0);

    const double att_scale = 1.0 / static_cast<double>(data.size());
    for (const DataItem& item : data.items) {
        const std::vector<double>& proto = protos.vectors[item.class_id];
        for (std::size_t i = 0; i < dim; ++i) {
            const double diff = item.features[i] - proto[i];
            grad[i] += att_scale * diff * diff;
        }
    }

    for (const GraphEdge& e : graph.edges) {
        const std::vector<double>& ps = protos.vectors[e.src];
        const std::vector<double>& pd = protos.vectors[e.dst];
        for (std::size_t i = 0; i < dim; ++i) {
            const double diff = ps[i] - pd[i];
            grad[i] += hp.lambda1 * e.weight * diff * diff;
        }
    }

    const int n = protos.size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = distance(protos.vectors[i], protos.vectors[j], metric);
            if (d >= hp.margin || d < kPairDistanceFloor) continue;
            const double scale = -hp.lambda2 * (hp.margin - d) / d;
            for (std::size_t dd = 0; dd < dim; ++dd) {
                const double diff = protos.vectors[i][dd] - protos.vectors[j][dd];
                grad[dd] += scale * diff * diff;
            }
        }
    }

    for (std::size_t i = 0; i < dim; ++i) grad[i] *= a[i];
    return grad;
}

} // namespace protoband
