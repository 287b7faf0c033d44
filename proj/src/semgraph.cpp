#include "protoband/semgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "protoband/errors.hpp"

namespace protoband {

int ClassRegistry::id_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return static_cast<int>(i);
    }
    return -1;
}

ClassRegistry make_registry(std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    ClassRegistry registry;
    registry.names = std::move(names);
    return registry;
}

double cosine_similarity(const std::vector<double>& e1, const std::vector<double>& e2) {
    if (e1.size() != e2.size()) throw DataError("cosine similarity: dimension mismatch");
    double dot = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < e1.size(); ++i) {
        dot += e1[i] * e2[i];
        n1 += e1[i] * e1[i];
        n2 += e2[i] * e2[i];
    }
    if (n1 <= 0.0 || n2 <= 0.0) throw DataError("cosine similarity: zero-norm embedding");
    return dot / (std::sqrt(n1) * std::sqrt(n2));
}

SemanticGraph build_adjacency(const ClassRegistry& registry, const EmbeddingTable& table,
                              int k_neighbors) {
    const int n = registry.size();
    if (n < 2) throw ConfigError("adjacency needs at least two classes");
    if (k_neighbors < 1) throw ConfigError("neighbor count must be >= 1");
    if (k_neighbors >= n) {
        throw ConfigError("neighbor count " + std::to_string(k_neighbors) +
                          " must be below the class count " + std::to_string(n));
    }
    if (static_cast<int>(table.vectors.size()) != n) {
        throw DataError("embedding table does not cover every class");
    }
    const std::size_t dim = table.vectors.front().size();
    for (const auto& v : table.vectors) {
        if (v.size() != dim) throw DataError("embeddings have inconsistent dimensions");
    }

    SemanticGraph graph;
    graph.num_classes = n;
    int clipped = 0;
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> sims; // (similarity, class id)
        sims.reserve(n - 1);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            sims.emplace_back(cosine_similarity(table.vectors[i], table.vectors[j]), j);
        }
        // top-k by raw similarity, ties toward the lower class id
        std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        sims.resize(static_cast<std::size_t>(k_neighbors));
        std::sort(sims.begin(), sims.end(),
                  [](const auto& a, const auto& b) { return a.second < b.second; });

        double total = 0.0;
        for (auto& [sim, j] : sims) {
            if (sim < kSimilarityFloor) {
                sim = kSimilarityFloor;
                ++clipped;
            }
            total += sim;
        }
        if (total <= 0.0) throw DataError("non-positive similarity total for a neighbor set");
        for (const auto& [sim, j] : sims) {
            graph.edges.push_back({i, j, sim / total});
        }
    }
    if (clipped > 0) {
        std::fprintf(stderr,
                     "warning: clipped %d similarit%s up to %.0e before edge normalization\n",
                     clipped, clipped == 1 ? "y" : "ies", kSimilarityFloor);
    }
    return graph;
}

SemanticGraph renormalize_per_source(SemanticGraph graph) {
    std::vector<double> totals(static_cast<std::size_t>(graph.num_classes), 0.0);
    for (const GraphEdge& e : graph.edges) {
        if (e.src < 0 || e.src >= graph.num_classes || e.dst < 0 || e.dst >= graph.num_classes) {
            throw DataError("adjacency edge references an unknown class id");
        }
        if (e.src == e.dst) throw DataError("adjacency contains a self-loop");
        totals[static_cast<std::size_t>(e.src)] += e.weight;
    }
    for (GraphEdge& e : graph.edges) {
        const double total = totals[static_cast<std::size_t>(e.src)];
        if (total <= 0.0) {
            throw DataError("adjacency weights for a source class sum to a non-positive value");
        }
        e.weight /= total;
    }
    std::sort(graph.edges.begin(), graph.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        if (a.src != b.src) return a.src < b.src;
        return a.dst < b.dst;
    });
    return graph;
}

} // namespace protoband
