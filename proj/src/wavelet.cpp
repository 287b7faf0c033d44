#include "protoband/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>

#include "protoband/errors.hpp"

namespace protoband {

namespace {

FilterPair make_pair(std::vector<double> lowpass) {
    FilterPair fp;
    fp.highpass.resize(lowpass.size());
    const std::size_t n = lowpass.size();
    for (std::size_t j = 0; j < n; ++j) {
        double v = lowpass[n - 1 - j];
        fp.highpass[j] = (j % 2 == 0) ? v : -v;
    }
    fp.lowpass = std::move(lowpass);
    return fp;
}

// Orthonormal analysis low-pass filters, sum = sqrt(2). Haar and db2 are the
// closed forms evaluated to 16+ digits; db4 uses the standard tabulated
// extremal-phase coefficients.
const FilterPair& haar_filters() {
    static const FilterPair fp = make_pair({0.70710678118654752440,
                                            0.70710678118654752440});
    return fp;
}

const FilterPair& db2_filters() {
    // (1+sqrt3)/(4 sqrt2), (3+sqrt3)/(4 sqrt2), (3-sqrt3)/(4 sqrt2), (1-sqrt3)/(4 sqrt2)
    static const FilterPair fp = make_pair({0.48296291314453414337,
                                            0.83651630373780772185,
                                            0.22414386804201338102,
                                            -0.12940952255126038117});
    return fp;
}

const FilterPair& db4_filters() {
    static const FilterPair fp = make_pair({0.23037781330885523,
                                            0.71484657055254150,
                                            0.63088076792959040,
                                            -0.02798376941698385,
                                            -0.18703481171888114,
                                            0.030841381835986965,
                                            0.032883011666982945,
                                            -0.010597401784997278});
    return fp;
}

// Extended-signal accessor for the non-periodic modes. Symmetric mode folds
// the index as often as needed, so extensions longer than the signal work.
double extended_at(const std::vector<double>& x, long long i, Boundary mode) {
    const long long n = static_cast<long long>(x.size());
    if (i >= 0 && i < n) return x[static_cast<std::size_t>(i)];
    if (mode == Boundary::Zero) return 0.0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return x[static_cast<std::size_t>(i)];
}

std::size_t band_length(std::size_t n, std::size_t filter_len, Boundary mode) {
    if (mode == Boundary::Periodic) return (n + 1) / 2;
    return (n + filter_len - 1) / 2;
}

// Single analysis stage. Periodic mode pads odd inputs by repeating the last
// sample, then correlates circularly at even shifts; the resulting square
// transform is orthogonal. The other modes correlate against the extended
// signal at even shifts with offset 2 - F, which keeps every coefficient a
// zero-padded analysis coefficient of the extension and makes the inverse
// exact for any length.
void analyze(const std::vector<double>& input, const FilterPair& fp, Boundary mode,
             std::vector<double>& approx, std::vector<double>& detail) {
    const std::vector<double>& h = fp.lowpass;
    const std::vector<double>& g = fp.highpass;
    const std::size_t flen = h.size();

    if (mode == Boundary::Periodic) {
        const std::vector<double>* x = &input;
        std::vector<double> padded;
        if (input.size() % 2 != 0) {
            padded = input;
            padded.push_back(input.back());
            x = &padded;
        }
        const std::size_t n = x->size();
        const std::size_t half = n / 2;
        approx.assign(half, 0.0);
        detail.assign(half, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            double a = 0.0, d = 0.0;
            for (std::size_t j = 0; j < flen; ++j) {
                double v = (*x)[(2 * k + j) % n];
                a += h[j] * v;
                d += g[j] * v;
            }
            approx[k] = a;
            detail[k] = d;
        }
        return;
    }

    const std::size_t n = input.size();
    const std::size_t out_len = band_length(n, flen, mode);
    const long long offset = 2 - static_cast<long long>(flen);
    approx.assign(out_len, 0.0);
    detail.assign(out_len, 0.0);
    for (std::size_t k = 0; k < out_len; ++k) {
        double a = 0.0, d = 0.0;
        const long long base = 2 * static_cast<long long>(k) + offset;
        for (std::size_t j = 0; j < flen; ++j) {
            double v = extended_at(input, base + static_cast<long long>(j), mode);
            a += h[j] * v;
            d += g[j] * v;
        }
        approx[k] = a;
        detail[k] = d;
    }
}

// Single synthesis stage, inverse of analyze for a stage whose input length
// was n.
std::vector<double> synthesize(const std::vector<double>& approx,
                               const std::vector<double>& detail, std::size_t n,
                               const FilterPair& fp, Boundary mode) {
    const std::vector<double>& h = fp.lowpass;
    const std::vector<double>& g = fp.highpass;
    const std::size_t flen = h.size();

    if (mode == Boundary::Periodic) {
        const std::size_t padded_n = n + (n % 2);
        std::vector<double> out(padded_n, 0.0);
        for (std::size_t k = 0; k < approx.size(); ++k) {
            for (std::size_t j = 0; j < flen; ++j) {
                out[(2 * k + j) % padded_n] += h[j] * approx[k] + g[j] * detail[k];
            }
        }
        out.resize(n);
        return out;
    }

    std::vector<double> out(n, 0.0);
    const long long offset = 2 - static_cast<long long>(flen);
    for (std::size_t k = 0; k < approx.size(); ++k) {
        const long long base = 2 * static_cast<long long>(k) + offset;
        for (std::size_t j = 0; j < flen; ++j) {
            const long long pos = base + static_cast<long long>(j);
            if (pos >= 0 && pos < static_cast<long long>(n)) {
                out[static_cast<std::size_t>(pos)] += h[j] * approx[k] + g[j] * detail[k];
            }
        }
    }
    return out;
}

void validate_config(const WaveletConfig& config) {
    if (config.levels < 1) throw ConfigError("wavelet levels must be >= 1");
    if (config.coeffs_per_band < 1) throw ConfigError("coeffs per band must be >= 1");
    filter_pair(config.family);
}

} // namespace

Boundary boundary_from_string(const std::string& name) {
    if (name == "periodic") return Boundary::Periodic;
    if (name == "symmetric") return Boundary::Symmetric;
    if (name == "zero") return Boundary::Zero;
    throw ConfigError("unknown boundary mode '" + name + "' (periodic, symmetric, zero)");
}

std::string to_string(Boundary mode) {
    switch (mode) {
        case Boundary::Periodic: return "periodic";
        case Boundary::Symmetric: return "symmetric";
        case Boundary::Zero: return "zero";
    }
    return "periodic";
}

const FilterPair& filter_pair(const std::string& family) {
    if (family == "haar" || family == "db1") return haar_filters();
    if (family == "db2") return db2_filters();
    if (family == "db4") return db4_filters();
    throw ConfigError("unknown wavelet family '" + family + "' (haar, db2, db4)");
}

BandSet dwt_decompose(const Signal& signal, const WaveletConfig& config) {
    validate_config(config);
    const FilterPair& fp = filter_pair(config.family);
    const int levels = config.levels;

    if (levels >= 63 || signal.samples.size() < (std::size_t{1} << levels)) {
        throw DataError("signal of length " + std::to_string(signal.samples.size()) +
                        " is too short for " + std::to_string(levels) +
                        " decomposition levels (needs at least 2^L samples)");
    }
    for (double s : signal.samples) {
        if (!std::isfinite(s)) throw DataError("signal contains a non-finite sample");
    }

    BandSet bands;
    bands.sample_rate = signal.sample_rate;
    bands.level_lengths.reserve(levels);
    std::vector<std::vector<double>> details_by_level; // D_1 first
    details_by_level.reserve(levels);

    std::vector<double> current = signal.samples;
    for (int level = 0; level < levels; ++level) {
        bands.level_lengths.push_back(current.size());
        std::vector<double> approx, detail;
        analyze(current, fp, config.boundary, approx, detail);
        details_by_level.push_back(std::move(detail));
        current = std::move(approx);
    }

    bands.approx = std::move(current);
    bands.details.reserve(levels);
    for (int level = levels - 1; level >= 0; --level) {
        bands.details.push_back(std::move(details_by_level[level]));
    }
    return bands;
}

Signal reconstruct(const BandSet& bands, const WaveletConfig& config) {
    validate_config(config);
    const FilterPair& fp = filter_pair(config.family);
    const std::size_t levels = static_cast<std::size_t>(config.levels);
    const std::size_t flen = fp.lowpass.size();

    if (bands.details.size() != levels || bands.level_lengths.size() != levels) {
        throw DataError("band set does not match the configured decomposition depth");
    }
    for (std::size_t level = 0; level < levels; ++level) {
        const std::size_t expected = band_length(bands.level_lengths[level], flen, config.boundary);
        // details[0] is the deepest band, so it pairs with the last stage
        const std::vector<double>& detail = bands.details[levels - 1 - level];
        if (detail.size() != expected) {
            throw DataError("detail band length does not match the configured transform");
        }
        if (level + 1 == levels && bands.approx.size() != expected) {
            throw DataError("approximation band length does not match the configured transform");
        }
    }

    std::vector<double> current = bands.approx;
    for (std::size_t level = levels; level >= 1; --level) {
        current = synthesize(current, bands.details[levels - level],
                             bands.level_lengths[level - 1], fp, config.boundary);
    }

    Signal out;
    out.samples = std::move(current);
    out.sample_rate = bands.sample_rate;
    return out;
}

std::vector<double> build_feature_vector(const BandSet& bands, int coeffs_per_band) {
    if (coeffs_per_band < 1) throw ConfigError("coeffs per band must be >= 1");
    if (bands.approx.empty()) throw DataError("band set has an empty approximation band");

    const std::size_t k = static_cast<std::size_t>(coeffs_per_band);
    std::vector<double> out;
    out.reserve((bands.details.size() + 1) * k);

    auto append_block = [&](const std::vector<double>& band) {
        std::vector<std::size_t> order(band.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ma = std::fabs(band[a]);
            const double mb = std::fabs(band[b]);
            if (ma != mb) return ma > mb;
            return a < b;
        });
        const std::size_t take = std::min(k, band.size());
        for (std::size_t i = 0; i < take; ++i) out.push_back(band[order[i]]);
        for (std::size_t i = take; i < k; ++i) out.push_back(0.0);
    };

    append_block(bands.approx);
    for (const std::vector<double>& detail : bands.details) append_block(detail);
    return out;
}

std::vector<double> extract_features(const Signal& signal, const WaveletConfig& config) {
    validate_config(config);
    if (!config.normalize) {
        return build_feature_vector(dwt_decompose(signal, config), config.coeffs_per_band);
    }
    double peak = 0.0;
    for (double s : signal.samples) peak = std::max(peak, std::fabs(s));
    if (peak == 0.0 || !std::isfinite(peak)) {
        // zero signals stay zero; non-finite peaks are rejected by decompose
        return build_feature_vector(dwt_decompose(signal, config), config.coeffs_per_band);
    }
    Signal scaled;
    scaled.sample_rate = signal.sample_rate;
    scaled.samples.reserve(signal.samples.size());
    for (double s : signal.samples) scaled.samples.push_back(s / peak);
    return build_feature_vector(dwt_decompose(scaled, config), config.coeffs_per_band);
}

std::vector<std::string> band_labels(const WaveletConfig& config) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(config.dim()));
    for (int rank = 1; rank <= config.coeffs_per_band; ++rank) {
        labels.push_back("A" + std::to_string(config.levels) + "#" + std::to_string(rank));
    }
    for (int level = config.levels; level >= 1; --level) {
        for (int rank = 1; rank <= config.coeffs_per_band; ++rank) {
            labels.push_back("D" + std::to_string(level) + "#" + std::to_string(rank));
        }
    }
    return labels;
}

} // namespace protoband
