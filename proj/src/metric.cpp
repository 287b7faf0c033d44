#include "protoband/metric.hpp"

#include <algorithm>
#include <cmath>

#include "protoband/errors.hpp"

namespace protoband {

void clamp_theta(std::vector<double>& theta) {
    for (double& t : theta) t = std::clamp(t, -kThetaClamp, kThetaClamp);
}

Metric metric_from_theta(const MetricParams& params) {
    Metric metric;
    metric.weights.reserve(params.theta.size());
    for (double t : params.theta) {
        if (!std::isfinite(t)) throw ConfigError("metric parameter is not finite");
        metric.weights.push_back(std::exp(std::clamp(t, -kThetaClamp, kThetaClamp)));
    }
    return metric;
}

double distance_squared(const std::vector<double>& v1, const std::vector<double>& v2,
                        const Metric& metric) {
    if (v1.size() != v2.size() || v1.size() != metric.weights.size()) {
        throw DataError("distance: dimension mismatch (" + std::to_string(v1.size()) + ", " +
                        std::to_string(v2.size()) + ", metric " +
                        std::to_string(metric.weights.size()) + ")");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        const double diff = v1[i] - v2[i];
        sum += metric.weights[i] * diff * diff;
    }
    return sum;
}

double distance(const std::vector<double>& v1, const std::vector<double>& v2,
                const Metric& metric) {
    return std::sqrt(distance_squared(v1, v2, metric));
}

} // namespace protoband
