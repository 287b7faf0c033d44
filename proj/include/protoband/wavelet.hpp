#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace protoband {

// Mono time-domain signal. Samples are dimensionless amplitudes, nominally
// in [-1, 1] once normalized.
struct Signal {
    std::vector<double> samples;
    int sample_rate = 16000;
};

enum class Boundary {
    Periodic,  // circular extension; preserves energy and round-trips exactly
    Symmetric, // half-sample reflection at both ends
    Zero       // zero padding
};

Boundary boundary_from_string(const std::string& name);
std::string to_string(Boundary mode);

struct WaveletConfig {
    std::string family = "db4"; // "haar" ("db1"), "db2", "db4"
    int levels = 5;             // decomposition depth L
    int coeffs_per_band = 10;   // coefficients kept per band (k)
    Boundary boundary = Boundary::Periodic;
    bool normalize = true;      // rescale to max |sample| = 1 before decomposing

    // Feature dimension d = (L + 1) * k.
    int dim() const { return (levels + 1) * coeffs_per_band; }
};

// Orthogonal analysis filter pair. highpass[j] = (-1)^j * lowpass[F-1-j].
struct FilterPair {
    std::vector<double> lowpass;
    std::vector<double> highpass;
};

// Filters for a known family; throws ConfigError for unknown names.
const FilterPair& filter_pair(const std::string& family);

// Output of a multi-level decomposition. details[0] is the deepest band D_L,
// details[L-1] is D_1. level_lengths[i] is the input length at level i+1
// (level_lengths[0] is the original signal length); reconstruct() needs these
// because band lengths alone do not determine the parity of each stage.
struct BandSet {
    std::vector<double> approx;               // A_L
    std::vector<std::vector<double>> details; // [D_L, D_{L-1}, ..., D_1]
    std::vector<std::size_t> level_lengths;
    int sample_rate = 16000;
};

// L-level pyramid decomposition. With an orthogonal family and periodic
// boundary the transform is orthogonal: ||signal||^2 equals the summed band
// energies and the inverse is exact.
BandSet dwt_decompose(const Signal& signal, const WaveletConfig& config);

// Inverse of dwt_decompose for all boundary modes.
Signal reconstruct(const BandSet& bands, const WaveletConfig& config);

// For each band keep the coeffs_per_band entries of largest magnitude
// (signed values, ordered by descending |value|, ties broken by lower index;
// short bands are zero-padded). Blocks are concatenated [A_L, D_L, ..., D_1].
std::vector<double> build_feature_vector(const BandSet& bands, int coeffs_per_band);

// Full pipeline: optional amplitude normalization, decomposition, top-k
// selection. Deterministic; output dimension is config.dim().
std::vector<double> extract_features(const Signal& signal, const WaveletConfig& config);

// Label for every feature dimension, e.g. "A5#1" for the strongest kept
// approximation coefficient, "D1#10" for the weakest kept D_1 coefficient.
std::vector<std::string> band_labels(const WaveletConfig& config);

} // namespace protoband
