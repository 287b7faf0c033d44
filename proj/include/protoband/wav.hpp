#pragma once

#include <string>

#include "protoband/wavelet.hpp"

namespace protoband {

// Reads a RIFF/WAVE file with 16-bit PCM or 32-bit IEEE float samples.
// Multi-channel input is downmixed by averaging. 16-bit samples are scaled
// by 1/32768. Throws DataError on anything unsupported or malformed.
Signal read_wav(const std::string& path);

// Writes mono 16-bit PCM; samples are clamped to [-1, 1) at the int16 grid.
void write_wav_pcm16(const std::string& path, const Signal& signal);

} // namespace protoband
