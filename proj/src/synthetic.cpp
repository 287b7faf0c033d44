#include "protoband/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "protoband/errors.hpp"
#include "protoband/wav.hpp"

namespace protoband {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Deterministic per-sample stream, independent of generation order.
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t class_idx, std::uint64_t sample_idx) {
    std::uint64_t x = seed * 0x9e3779b97f4a7c15ULL + class_idx * 0xbf58476d1ce4e5b9ULL +
                      sample_idx * 0x94d049bb133111ebULL + 0x2545f4914f6cdd1dULL;
    // splitmix64 finalizer
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return std::mt19937_64(x);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double gaussian(std::mt19937_64& rng) {
    double u1 = uniform(rng, 0.0, 1.0);
    while (u1 <= 1e-300) u1 = uniform(rng, 0.0, 1.0);
    const double u2 = uniform(rng, 0.0, 1.0);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

constexpr std::uint64_t kClutterStream = 1000; // shared across the three classes

WaveletConfig synthetic_wavelet_config() {
    WaveletConfig config; // library defaults: db4, L = 5, periodic
    return config;
}

// Band layout for the synthetic signal length under the default config.
BandSet empty_bands(std::size_t length) {
    WaveletConfig config = synthetic_wavelet_config();
    Signal zero;
    zero.samples.assign(length, 0.0);
    return dwt_decompose(zero, config);
}

// Mid-band clutter, built directly in coefficient space so it cannot leak
// into the signature bands. Random per-band gains move a lot of energy
// between the middle dimensions from sample to sample; the draw is paired
// across classes by sample index, so the middle bands carry no class
// information.
std::vector<double> clutter_wave(std::size_t length, std::mt19937_64& rng) {
    BandSet bands = empty_bands(length);
    // middle bands D_5..D_2; the signature bands A_5 and D_1 stay empty
    for (std::size_t band = 0; band + 1 < bands.details.size(); ++band) {
        const double gain = uniform(rng, 0.3, 1.7);
        for (double& c : bands.details[band]) c = gain * gaussian(rng);
    }
    return reconstruct(bands, synthetic_wavelet_config()).samples;
}

// Fixed signature patterns: a dozen coefficients with slowly decaying
// magnitudes and alternating signs, so the top-k selection and its order are
// stable from sample to sample.
std::vector<double> signature_wave(std::size_t length, int band) {
    BandSet bands = empty_bands(length);
    std::vector<double>& target = band < 0 ? bands.approx : bands.details[band];
    const std::size_t stride = std::max<std::size_t>(target.size() / 13, 1);
    for (int j = 0; j < 12; ++j) {
        const std::size_t idx = stride / 2 + stride * static_cast<std::size_t>(j);
        if (idx < target.size()) {
            target[idx] = (j % 2 == 0 ? 1.0 : -1.0) * (1.0 - 0.04 * j);
        }
    }
    return reconstruct(bands, synthetic_wavelet_config()).samples;
}

void quantize_to_int16_grid(std::vector<double>& samples) {
    double peak = 0.0;
    for (double s : samples) peak = std::max(peak, std::fabs(s));
    const double scale = peak > 0.0 ? 0.95 / peak : 1.0;
    for (double& s : samples) {
        double q = std::round(s * scale * 32768.0);
        q = std::clamp(q, -32768.0, 32767.0);
        s = q / 32768.0;
    }
}

} // namespace

std::vector<std::string> synthetic_class_names() { return {"high_band", "low_band", "noise"}; }

NamedEmbeddings synthetic_embeddings() {
    NamedEmbeddings emb;
    emb.names = synthetic_class_names();
    emb.vectors = {
        {1.0, 0.25, 0.05, 0.0},  // high_band
        {0.25, 1.0, 0.05, 0.0},  // low_band
        {0.05, 0.05, 1.0, 0.0},  // noise
    };
    return emb;
}

std::vector<SyntheticSample> generate_synthetic(const SyntheticConfig& config) {
    if (config.samples_per_class < 1) throw ConfigError("samples per class must be >= 1");
    if (config.signal_length < 32) throw ConfigError("signal length must be >= 32");

    const std::vector<std::string> names = synthetic_class_names();
    std::vector<SyntheticSample> samples;
    samples.reserve(names.size() * static_cast<std::size_t>(config.samples_per_class));

    // high_band plants its signature in D_1, low_band in A_L; signatures are
    // scaled relative to each sample's clutter peak so the peak-amplitude
    // normalization at feature time leaves them nearly constant.
    const std::vector<double> high_sig = signature_wave(config.signal_length, 4);  // D_1
    const std::vector<double> low_sig = signature_wave(config.signal_length, -1);  // A_L
    constexpr double kSignatureLevel = 0.25;

    for (std::size_t class_idx = 0; class_idx < names.size(); ++class_idx) {
        for (int s = 0; s < config.samples_per_class; ++s) {
            std::mt19937_64 rng = sample_rng(config.seed, class_idx, static_cast<std::uint64_t>(s));
            std::mt19937_64 clutter_rng =
                sample_rng(config.seed, kClutterStream, static_cast<std::uint64_t>(s));
            std::vector<double> wave = clutter_wave(config.signal_length, clutter_rng);
            double clutter_peak = 0.0;
            for (double v : wave) clutter_peak = std::max(clutter_peak, std::fabs(v));
            if (clutter_peak == 0.0) clutter_peak = 1.0;

            if (names[class_idx] == "high_band") {
                for (std::size_t t = 0; t < wave.size(); ++t) {
                    wave[t] += kSignatureLevel * clutter_peak * high_sig[t];
                }
                for (double& v : wave) v += 0.004 * clutter_peak * gaussian(rng);
            } else if (names[class_idx] == "low_band") {
                for (std::size_t t = 0; t < wave.size(); ++t) {
                    wave[t] += kSignatureLevel * clutter_peak * low_sig[t];
                }
                for (double& v : wave) v += 0.004 * clutter_peak * gaussian(rng);
            } else {
                // the noise class plants no band, just an isotropic floor
                for (double& v : wave) v += 0.02 * clutter_peak * gaussian(rng);
            }

            quantize_to_int16_grid(wave);

            SyntheticSample sample;
            char id[64];
            std::snprintf(id, sizeof(id), "%s_%03d", names[class_idx].c_str(), s);
            sample.sample_id = id;
            sample.class_name = names[class_idx];
            sample.signal.samples = std::move(wave);
            sample.signal.sample_rate = config.sample_rate;
            samples.push_back(std::move(sample));
        }
    }
    return samples;
}

void write_synthetic_dataset(const SyntheticConfig& config, const std::string& out_dir) {
    namespace fs = std::filesystem;
    const fs::path root(out_dir);
    fs::create_directories(root / "wav");

    const std::vector<SyntheticSample> samples = generate_synthetic(config);

    std::ofstream manifest(root / "manifest.csv");
    if (!manifest) throw DataError("cannot write '" + (root / "manifest.csv").string() + "'");
    manifest << "sample_id,class_name,path\n";
    for (const SyntheticSample& sample : samples) {
        const std::string rel = "wav/" + sample.sample_id + ".wav";
        write_wav_pcm16((root / rel).string(), sample.signal);
        manifest << sample.sample_id << "," << sample.class_name << "," << rel << "\n";
    }
    manifest.close();

    const NamedEmbeddings emb = synthetic_embeddings();
    std::ofstream embeddings(root / "embeddings.csv");
    if (!embeddings) throw DataError("cannot write '" + (root / "embeddings.csv").string() + "'");
    embeddings << "class_name";
    for (std::size_t i = 0; i < emb.vectors.front().size(); ++i) embeddings << ",e_" << i;
    embeddings << "\n";
    for (std::size_t i = 0; i < emb.names.size(); ++i) {
        embeddings << emb.names[i];
        for (double v : emb.vectors[i]) embeddings << "," << format_double(v);
        embeddings << "\n";
    }
}

} // namespace protoband
