#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "protoband/dataset_io.hpp"
#include "protoband/wavelet.hpp"

namespace protoband {

// Three-class synthetic audio set used by the demo and the acceptance suite:
//   high_band  tones in the top half of the spectrum (lands in D_1)
//   low_band   slow tones near DC (lands in A_L for L = 5)
//   noise      isotropic white noise
// high_band and low_band samples also carry random mid-band clutter so the
// middle bands vary without carrying class information. Samples are
// quantized to the int16 grid, so in-memory signals match a WAV round trip
// bit for bit.
struct SyntheticConfig {
    int samples_per_class = 60;
    std::size_t signal_length = 2048;
    int sample_rate = 16000;
    std::uint64_t seed = 7;
};

struct SyntheticSample {
    std::string sample_id;
    std::string class_name;
    Signal signal;
};

std::vector<SyntheticSample> generate_synthetic(const SyntheticConfig& config);

// Class names in sorted (registry) order.
std::vector<std::string> synthetic_class_names();

// Fixed unit-scale embeddings for the three classes, keyed by name.
NamedEmbeddings synthetic_embeddings();

// Writes out_dir/wav/*.wav, out_dir/manifest.csv, out_dir/embeddings.csv.
void write_synthetic_dataset(const SyntheticConfig& config, const std::string& out_dir);

} // namespace protoband
