#pragma once

#include <string>
#include <vector>

namespace protoband {

// Ordered class set. Ids are the indices 0..N-1; make_registry assigns them
// in sorted name order so ids are stable across machines and runs.
struct ClassRegistry {
    std::vector<std::string> names;

    int size() const { return static_cast<int>(names.size()); }
    // Returns the class id or -1 when the name is unknown.
    int id_of(const std::string& name) const;
};

ClassRegistry make_registry(std::vector<std::string> names);

// One embedding vector per class, indexed by class id.
struct EmbeddingTable {
    std::vector<std::vector<double>> vectors;
};

struct GraphEdge {
    int src = 0;
    int dst = 0;
    double weight = 0.0;
};

// Directed weighted adjacency over classes. Edges are sorted by (src, dst)
// and per-source weights sum to 1.
struct SemanticGraph {
    std::vector<GraphEdge> edges;
    int num_classes = 0;
};

// Similarities below this floor are clipped up before normalization so edge
// weights stay positive.
constexpr double kSimilarityFloor = 1e-6;

// e1.e2 / (|e1| |e2|); throws DataError for zero-norm or mismatched vectors.
double cosine_similarity(const std::vector<double>& e1, const std::vector<double>& e2);

// For each class pick the k_neighbors other classes with highest cosine
// similarity (ties toward lower class id) and normalize the clipped
// similarities per source. Requires 1 <= k_neighbors <= N-1.
SemanticGraph build_adjacency(const ClassRegistry& registry, const EmbeddingTable& table,
                              int k_neighbors);

// Rescales weights so each source's out-edges sum to 1; used when loading a
// hand-authored adjacency list. Throws DataError on non-positive totals.
SemanticGraph renormalize_per_source(SemanticGraph graph);

} // namespace protoband
