#pragma once

#include <string>

#include "protoband/trainer.hpp"

namespace protoband {

// Versioned, human-inspectable text format. Numbers are written with 17
// significant digits so a save/load round trip reproduces every field
// exactly. Throws DataError on version mismatch or corruption.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

} // namespace protoband
