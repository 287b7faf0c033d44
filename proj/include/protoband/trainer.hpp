#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "protoband/energy.hpp"
#include "protoband/errors.hpp"
#include "protoband/metric.hpp"
#include "protoband/semgraph.hpp"
#include "protoband/wavelet.hpp"

namespace protoband {

struct TrainConfig {
    int t_max = 100;               // max outer iterations
    double epsilon = 1e-4;         // stop when |E(t+1) - E(t)| < epsilon
    int inner_steps_prototypes = 10;
    int inner_steps_theta = 10;
    double lr0_prototypes = 0.1;   // initial step size per inner step
    double lr0_theta = 0.1;
    double backtrack_shrink = 0.5; // step shrink factor, in (0, 1)
    int max_halvings = 30;
};

struct TraceRow {
    int iteration = 0;
    double total = 0.0;
    double attachment = 0.0;
    double tension = 0.0;
    double repulsion = 0.0;
};

// Trained artifact: prototype configuration, metric parameters, and the
// configuration needed to reproduce features and report on the result.
struct Model {
    Prototypes prototypes;
    MetricParams metric_params;
    WaveletConfig wavelet;
    Hyperparams hyperparams;
    ClassRegistry registry;
    SemanticGraph graph;
    std::vector<TraceRow> energy_trace; // totals are monotone non-increasing

    int dim() const { return static_cast<int>(metric_params.theta.size()); }
};

// Numerical failure during training; carries the energy trace recorded up to
// the point of failure.
class TrainNumericError : public NumericError {
public:
    TrainNumericError(const std::string& msg, std::vector<TraceRow> trace)
        : NumericError(msg), partial_trace(std::move(trace)) {}

    std::vector<TraceRow> partial_trace;
};

// Prototypes start at the per-class sample means, theta at zero (Euclidean
// metric). Throws DataError when a registered class has no samples.
std::pair<Prototypes, MetricParams> initialize(const Dataset& data, const ClassRegistry& registry);

// One optimization phase: inner gradient-descent steps on all prototypes with
// theta fixed. Every step backtracks (step *= shrink) until the energy does
// not increase; a step whose line search fails leaves the prototypes
// unchanged and ends the phase. Returns true if anything moved.
bool step_prototypes(Prototypes& protos, const MetricParams& params, const Dataset& data,
                     const SemanticGraph& graph, const Hyperparams& hp, const TrainConfig& tc);

// Mirror phase on theta with the prototypes fixed; candidates are clamped to
// the valid range before evaluation so accepted steps never raise the energy.
bool step_theta(MetricParams& params, const Prototypes& protos, const Dataset& data,
                const SemanticGraph& graph, const Hyperparams& hp, const TrainConfig& tc);

using ProgressFn = std::function<void(const TraceRow&)>;

// Alternating optimization: prototypes first, then theta, recording the
// energy after every outer iteration. Stops when the energy change drops
// below epsilon, both phases stall, or t_max is reached. The recorded trace
// never increases by more than 1e-12 between iterations.
Model train(const Dataset& data, const ClassRegistry& registry, const SemanticGraph& graph,
            const Hyperparams& hp, const TrainConfig& tc, const WaveletConfig& wavelet_config,
            const ProgressFn& progress = nullptr);

} // namespace protoband
