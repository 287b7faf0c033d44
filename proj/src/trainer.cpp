#include "protoband/trainer.hpp"

#include <cmath>
#include <string>

namespace protoband {

namespace {

void validate_train_config(const TrainConfig& tc) {
    if (tc.t_max < 1) throw ConfigError("t_max must be >= 1");
    if (!(tc.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (tc.inner_steps_prototypes < 1 || tc.inner_steps_theta < 1) {
        throw ConfigError("inner step counts must be >= 1");
    }
    if (!(tc.lr0_prototypes > 0.0) || !(tc.lr0_theta > 0.0)) {
        throw ConfigError("initial step sizes must be positive");
    }
    if (!(tc.backtrack_shrink > 0.0) || !(tc.backtrack_shrink < 1.0)) {
        throw ConfigError("backtracking shrink factor must be in (0, 1)");
    }
    if (tc.max_halvings < 0) throw ConfigError("max halvings must be >= 0");
}

bool all_zero(const std::vector<std::vector<double>>& grad) {
    for (const auto& g : grad) {
        for (double v : g) {
            if (v != 0.0) return false;
        }
    }
    return true;
}

bool all_zero(const std::vector<double>& grad) {
    for (double v : grad) {
        if (v != 0.0) return false;
    }
    return true;
}

} // namespace

std::pair<Prototypes, MetricParams> initialize(const Dataset& data,
                                               const ClassRegistry& registry) {
    if (data.items.empty()) throw DataError("training needs a non-empty dataset");
    const int n = registry.size();
    const std::size_t dim = data.items.front().features.size();

    Prototypes protos;
    protos.vectors.assign(static_cast<std::size_t>(n), std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(n), 0);

    for (const DataItem& item : data.items) {
        if (item.class_id < 0 || item.class_id >= n) {
            throw DataError("sample references unregistered class id " +
                            std::to_string(item.class_id));
        }
        if (item.features.size() != dim) {
            throw DataError("dataset features have inconsistent dimensions");
        }
        std::vector<double>& proto = protos.vectors[item.class_id];
        for (std::size_t i = 0; i < dim; ++i) proto[i] += item.features[i];
        ++counts[item.class_id];
    }
    for (int c = 0; c < n; ++c) {
        if (counts[c] == 0) {
            throw DataError("class '" + registry.names[c] + "' has no training samples");
        }
        for (double& v : protos.vectors[c]) v /= static_cast<double>(counts[c]);
    }

    MetricParams params;
    params.theta.assign(dim, 0.0);
    return {std::move(protos), std::move(params)};
}

bool step_prototypes(Prototypes& protos, const MetricParams& params, const Dataset& data,
                     const SemanticGraph& graph, const Hyperparams& hp, const TrainConfig& tc) {
    const Metric metric = metric_from_theta(params);
    double energy = total_energy(data, protos, metric, graph, hp);
    bool moved = false;

    for (int step = 0; step < tc.inner_steps_prototypes; ++step) {
        const auto grad = grad_prototypes(data, protos, metric, graph, hp);
        if (all_zero(grad)) break;

        double lr = tc.lr0_prototypes;
        bool accepted = false;
        for (int attempt = 0; attempt <= tc.max_halvings; ++attempt) {
            Prototypes candidate = protos;
            for (int c = 0; c < protos.size(); ++c) {
                for (std::size_t i = 0; i < grad[c].size(); ++i) {
                    candidate.vectors[c][i] -= lr * grad[c][i];
                }
            }
            const double cand_energy = total_energy(data, candidate, metric, graph, hp);
            if (std::isfinite(cand_energy) && cand_energy <= energy) {
                protos = std::move(candidate);
                energy = cand_energy;
                accepted = true;
                moved = true;
                break;
            }
            lr *= tc.backtrack_shrink;
        }
        if (!accepted) break; // stationary up to line-search resolution
    }
    return moved;
}

bool step_theta(MetricParams& params, const Prototypes& protos, const Dataset& data,
                const SemanticGraph& graph, const Hyperparams& hp, const TrainConfig& tc) {
    double energy = total_energy(data, protos, metric_from_theta(params), graph, hp);
    bool moved = false;

    for (int step = 0; step < tc.inner_steps_theta; ++step) {
        const auto grad = grad_theta(data, protos, params, graph, hp);
        if (all_zero(grad)) break;

        double lr = tc.lr0_theta;
        bool accepted = false;
        for (int attempt = 0; attempt <= tc.max_halvings; ++attempt) {
            MetricParams candidate = params;
            for (std::size_t i = 0; i < grad.size(); ++i) candidate.theta[i] -= lr * grad[i];
            clamp_theta(candidate.theta);
            const double cand_energy =
                total_energy(data, protos, metric_from_theta(candidate), graph, hp);
            if (std::isfinite(cand_energy) && cand_energy <= energy) {
                const bool changed = candidate.theta != params.theta;
                params = std::move(candidate);
                energy = cand_energy;
                accepted = true;
                moved = moved || changed;
                break;
            }
            lr *= tc.backtrack_shrink;
        }
        if (!accepted) break;
    }
    return moved;
}

Model train(const Dataset& data, const ClassRegistry& registry, const SemanticGraph& graph,
            const Hyperparams& hp, const TrainConfig& tc, const WaveletConfig& wavelet_config,
            const ProgressFn& progress) {
    validate_train_config(tc);

    Model model;
    model.wavelet = wavelet_config;
    model.hyperparams = hp;
    model.registry = registry;
    model.graph = graph;

    auto [protos, params] = initialize(data, registry);

    auto record = [&](int iteration) {
        const EnergyBreakdown e =
            energy_breakdown(data, protos, metric_from_theta(params), graph, hp);
        if (!std::isfinite(e.total)) {
            throw TrainNumericError("non-finite energy at iteration " + std::to_string(iteration),
                                    model.energy_trace);
        }
        model.energy_trace.push_back({iteration, e.total, e.attachment, e.tension, e.repulsion});
        if (progress) progress(model.energy_trace.back());
        return e.total;
    };

    double prev_energy = record(0);
    for (int t = 1; t <= tc.t_max; ++t) {
        const bool protos_moved = step_prototypes(protos, params, data, graph, hp, tc);
        const bool theta_moved = step_theta(params, protos, data, graph, hp, tc);
        const double energy = record(t);

        if (energy > prev_energy + 1e-12) {
            throw TrainNumericError("energy increased at iteration " + std::to_string(t),
                                    model.energy_trace);
        }
        const double change = std::fabs(energy - prev_energy);
        prev_energy = energy;
        if (change < tc.epsilon) break;
        if (!protos_moved && !theta_moved) break;
    }

    model.prototypes = std::move(protos);
    model.metric_params = std::move(params);
    return model;
}

} // namespace protoband
