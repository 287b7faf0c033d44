#pragma once

#include <string>
#include <vector>

#include "protoband/energy.hpp"
#include "protoband/semgraph.hpp"
#include "protoband/wavelet.hpp"

namespace protoband {

// One manifest row: a class-labeled sample given either as an audio file
// path or as an inline feature row (exactly one of the two).
struct ManifestEntry {
    std::string sample_id;
    std::string class_name;
    std::string path;             // set in audio mode
    std::vector<double> features; // set in feature mode
    bool has_path = false;
};

struct LoadedDataset {
    ClassRegistry registry;
    Dataset data;
    std::vector<std::string> sample_ids; // parallel to data.items
};

// Manifest CSV. The header decides the mode:
//   sample_id,class_name,path               audio rows, features extracted here
//   sample_id,class_name,v_0,...,v_{d-1}    inline feature rows
// Class ids are assigned in sorted name order. Errors cite the file row.
LoadedDataset load_manifest(const std::string& path, const WaveletConfig& config);

// Feature CSV produced by `extract` (header sample_id,class_id,v_0,...)
// plus the classes CSV that maps ids back to names.
LoadedDataset load_features(const std::string& features_path, const std::string& classes_path);

// Feature CSV without a registry: rows keep whatever class_id they carry.
// Used by `predict`, which only needs the vectors.
LoadedDataset load_features_unlabeled(const std::string& features_path);

void write_features_csv(const std::string& path, const LoadedDataset& loaded);

// classes CSV: header class_id,class_name, one row per class in id order.
void write_classes_csv(const std::string& path, const ClassRegistry& registry);
ClassRegistry load_classes_csv(const std::string& path);

// Embeddings CSV: header class_name,e_0,...,e_{m-1}.
struct NamedEmbeddings {
    std::vector<std::string> names;
    std::vector<std::vector<double>> vectors;
};
NamedEmbeddings load_embeddings_csv(const std::string& path);

// Reorders named embeddings by registry id; every registered class must be
// present.
EmbeddingTable embeddings_for_registry(const NamedEmbeddings& embeddings,
                                       const ClassRegistry& registry);

// Adjacency CSV: header src_class,dst_class,weight (class names). Weights
// are renormalized per source on load.
SemanticGraph load_adjacency_csv(const std::string& path, const ClassRegistry& registry);
void write_adjacency_csv(const std::string& path, const SemanticGraph& graph,
                         const ClassRegistry& registry);

// Formats a double with 17 significant digits; round-trips exactly.
std::string format_double(double value);

} // namespace protoband
