#pragma once

#include <vector>

namespace protoband {

// Unconstrained metric parameters theta; the induced per-dimension weights
// are a_i = exp(theta_i).
struct MetricParams {
    std::vector<double> theta;
};

// Diagonal metric with strictly positive per-dimension weights.
struct Metric {
    std::vector<double> weights;
};

// theta is clamped to [-kThetaClamp, kThetaClamp] before exponentiation so
// the weights can neither overflow nor underflow to zero.
constexpr double kThetaClamp = 30.0;

void clamp_theta(std::vector<double>& theta);

// weights[i] = exp(clamped theta[i]); throws ConfigError on non-finite input.
Metric metric_from_theta(const MetricParams& params);

// sum_i a_i (v1_i - v2_i)^2, accumulated left to right in double precision.
double distance_squared(const std::vector<double>& v1, const std::vector<double>& v2,
                        const Metric& metric);

// sqrt of distance_squared.
double distance(const std::vector<double>& v1, const std::vector<double>& v2,
                const Metric& metric);

} // namespace protoband
