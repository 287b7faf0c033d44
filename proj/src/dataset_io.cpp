#include "protoband/dataset_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "protoband/errors.hpp"
#include "protoband/wav.hpp"

namespace protoband {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

struct CsvFile {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::pair<int, std::vector<std::string>>> rows; // (line number, fields)
};

CsvFile read_csv(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot open '" + path + "'");
    CsvFile csv;
    csv.path = path;
    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (csv.header.empty()) {
            csv.header = split_csv(line);
        } else {
            csv.rows.emplace_back(line_no, split_csv(line));
        }
    }
    if (csv.header.empty()) throw DataError("'" + path + "' is empty");
    return csv;
}

[[noreturn]] void row_error(const CsvFile& csv, int row, const std::string& msg) {
    throw DataError("'" + csv.path + "' row " + std::to_string(row) + ": " + msg);
}

double parse_double(const CsvFile& csv, int row, const std::string& field) {
    if (field.empty()) row_error(csv, row, "empty numeric field");
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) {
        row_error(csv, row, "'" + field + "' is not a number");
    }
    return value;
}

int parse_int(const CsvFile& csv, int row, const std::string& field) {
    if (field.empty()) row_error(csv, row, "empty integer field");
    char* end = nullptr;
    const long value = std::strtol(field.c_str(), &end, 10);
    if (end != field.c_str() + field.size()) {
        row_error(csv, row, "'" + field + "' is not an integer");
    }
    return static_cast<int>(value);
}

void expect_fields(const CsvFile& csv, int row, const std::vector<std::string>& fields,
                   std::size_t expected) {
    if (fields.size() != expected) {
        row_error(csv, row, "expected " + std::to_string(expected) + " fields, found " +
                                std::to_string(fields.size()));
    }
}

bool header_is(const std::vector<std::string>& header, std::size_t index,
               const std::string& name) {
    return header.size() > index && header[index] == name;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

LoadedDataset load_manifest(const std::string& path, const WaveletConfig& config) {
    const CsvFile csv = read_csv(path);
    if (!header_is(csv.header, 0, "sample_id") || !header_is(csv.header, 1, "class_name")) {
        throw DataError("'" + path + "': manifest header must start with sample_id,class_name");
    }
    const bool audio_mode = csv.header.size() == 3 && csv.header[2] == "path";
    if (!audio_mode && (csv.header.size() < 3 || csv.header[2] != "v_0")) {
        throw DataError("'" + path + "': manifest header must end with `path` or `v_0,...`");
    }
    const std::size_t feature_dim = audio_mode ? 0 : csv.header.size() - 2;
    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::vector<ManifestEntry> entries;
    entries.reserve(csv.rows.size());
    std::vector<std::string> names;
    for (const auto& [row, fields] : csv.rows) {
        ManifestEntry entry;
        if (audio_mode) {
            expect_fields(csv, row, fields, 3);
            entry.has_path = true;
            entry.path = fields[2];
            if (entry.path.empty()) row_error(csv, row, "empty audio path");
        } else {
            if (fields.size() != feature_dim + 2) {
                row_error(csv, row, "expected " + std::to_string(feature_dim) +
                                        " feature values, found " +
                                        std::to_string(fields.size() - 2));
            }
            entry.features.reserve(feature_dim);
            for (std::size_t i = 2; i < fields.size(); ++i) {
                entry.features.push_back(parse_double(csv, row, fields[i]));
            }
        }
        entry.sample_id = fields[0];
        entry.class_name = fields[1];
        if (entry.class_name.empty()) row_error(csv, row, "empty class name");
        names.push_back(entry.class_name);
        entries.push_back(std::move(entry));
    }
    if (entries.empty()) throw DataError("'" + path + "' contains no samples");

    LoadedDataset loaded;
    loaded.registry = make_registry(std::move(names));
    loaded.data.items.reserve(entries.size());
    loaded.sample_ids.reserve(entries.size());
    for (ManifestEntry& entry : entries) {
        DataItem item;
        item.class_id = loaded.registry.id_of(entry.class_name);
        if (entry.has_path) {
            std::filesystem::path wav_path(entry.path);
            if (wav_path.is_relative()) wav_path = base / wav_path;
            item.features = extract_features(read_wav(wav_path.string()), config);
        } else {
            item.features = std::move(entry.features);
        }
        loaded.sample_ids.push_back(std::move(entry.sample_id));
        loaded.data.items.push_back(std::move(item));
    }
    return loaded;
}

ClassRegistry load_classes_csv(const std::string& path) {
    const CsvFile csv = read_csv(path);
    if (!header_is(csv.header, 0, "class_id") || !header_is(csv.header, 1, "class_name")) {
        throw DataError("'" + path + "': header must be class_id,class_name");
    }
    std::map<int, std::string> by_id;
    for (const auto& [row, fields] : csv.rows) {
        expect_fields(csv, row, fields, 2);
        const int id = parse_int(csv, row, fields[0]);
        if (fields[1].empty()) row_error(csv, row, "empty class name");
        if (!by_id.emplace(id, fields[1]).second) {
            row_error(csv, row, "duplicate class id " + std::to_string(id));
        }
    }
    ClassRegistry registry;
    registry.names.reserve(by_id.size());
    int expected = 0;
    for (const auto& [id, name] : by_id) {
        if (id != expected++) {
            throw DataError("'" + path + "': class ids must be contiguous from 0");
        }
        registry.names.push_back(name);
    }
    if (registry.names.empty()) throw DataError("'" + path + "' defines no classes");
    return registry;
}

namespace {

LoadedDataset load_features_impl(const std::string& features_path, ClassRegistry registry,
                                 bool check_ids) {
    const CsvFile csv = read_csv(features_path);
    if (!header_is(csv.header, 0, "sample_id") || !header_is(csv.header, 1, "class_id") ||
        !header_is(csv.header, 2, "v_0")) {
        throw DataError("'" + features_path + "': header must be sample_id,class_id,v_0,...");
    }
    const std::size_t feature_dim = csv.header.size() - 2;

    LoadedDataset loaded;
    loaded.registry = std::move(registry);
    for (const auto& [row, fields] : csv.rows) {
        if (fields.size() != feature_dim + 2) {
            row_error(csv, row, "expected " + std::to_string(feature_dim) +
                                    " feature values, found " + std::to_string(fields.size() - 2));
        }
        DataItem item;
        item.class_id = parse_int(csv, row, fields[1]);
        if (check_ids && (item.class_id < 0 || item.class_id >= loaded.registry.size())) {
            row_error(csv, row, "class id " + std::to_string(item.class_id) +
                                    " is not in the class registry");
        }
        item.features.reserve(feature_dim);
        for (std::size_t i = 2; i < fields.size(); ++i) {
            item.features.push_back(parse_double(csv, row, fields[i]));
        }
        loaded.sample_ids.push_back(fields[0]);
        loaded.data.items.push_back(std::move(item));
    }
    if (loaded.data.items.empty()) throw DataError("'" + features_path + "' contains no samples");
    return loaded;
}

} // namespace

LoadedDataset load_features(const std::string& features_path, const std::string& classes_path) {
    return load_features_impl(features_path, load_classes_csv(classes_path), true);
}

LoadedDataset load_features_unlabeled(const std::string& features_path) {
    return load_features_impl(features_path, ClassRegistry{}, false);
}

void write_features_csv(const std::string& path, const LoadedDataset& loaded) {
    std::ofstream file(path);
    if (!file) throw DataError("cannot write '" + path + "'");
    const std::size_t dim =
        loaded.data.items.empty() ? 0 : loaded.data.items.front().features.size();
    file << "sample_id,class_id";
    for (std::size_t i = 0; i < dim; ++i) file << ",v_" << i;
    file << "\n";
    for (std::size_t row = 0; row < loaded.data.items.size(); ++row) {
        const DataItem& item = loaded.data.items[row];
        file << loaded.sample_ids[row] << "," << item.class_id;
        for (double v : item.features) file << "," << format_double(v);
        file << "\n";
    }
    if (!file) throw DataError("failed writing '" + path + "'");
}

void write_classes_csv(const std::string& path, const ClassRegistry& registry) {
    std::ofstream file(path);
    if (!file) throw DataError("cannot write '" + path + "'");
    file << "class_id,class_name\n";
    for (int id = 0; id < registry.size(); ++id) {
        file << id << "," << registry.names[id] << "\n";
    }
    if (!file) throw DataError("failed writing '" + path + "'");
}

NamedEmbeddings load_embeddings_csv(const std::string& path) {
    const CsvFile csv = read_csv(path);
    if (!header_is(csv.header, 0, "class_name") || !header_is(csv.header, 1, "e_0")) {
        throw DataError("'" + path + "': header must be class_name,e_0,...");
    }
    const std::size_t dim = csv.header.size() - 1;

    NamedEmbeddings emb;
    for (const auto& [row, fields] : csv.rows) {
        expect_fields(csv, row, fields, dim + 1);
        if (fields[0].empty()) row_error(csv, row, "empty class name");
        for (const std::string& existing : emb.names) {
            if (existing == fields[0]) row_error(csv, row, "duplicate class '" + fields[0] + "'");
        }
        std::vector<double> vec;
        vec.reserve(dim);
        for (std::size_t i = 1; i < fields.size(); ++i) {
            vec.push_back(parse_double(csv, row, fields[i]));
        }
        emb.names.push_back(fields[0]);
        emb.vectors.push_back(std::move(vec));
    }
    if (emb.names.empty()) throw DataError("'" + path + "' defines no embeddings");
    return emb;
}

EmbeddingTable embeddings_for_registry(const NamedEmbeddings& embeddings,
                                       const ClassRegistry& registry) {
    EmbeddingTable table;
    table.vectors.resize(static_cast<std::size_t>(registry.size()));
    std::vector<bool> seen(static_cast<std::size_t>(registry.size()), false);
    for (std::size_t i = 0; i < embeddings.names.size(); ++i) {
        const int id = registry.id_of(embeddings.names[i]);
        if (id < 0) continue; // extra classes in the embedding file are fine
        table.vectors[static_cast<std::size_t>(id)] = embeddings.vectors[i];
        seen[static_cast<std::size_t>(id)] = true;
    }
    for (int id = 0; id < registry.size(); ++id) {
        if (!seen[static_cast<std::size_t>(id)]) {
            throw DataError("no embedding for class '" + registry.names[id] + "'");
        }
    }
    return table;
}

SemanticGraph load_adjacency_csv(const std::string& path, const ClassRegistry& registry) {
    const CsvFile csv = read_csv(path);
    if (!header_is(csv.header, 0, "src_class") || !header_is(csv.header, 1, "dst_class") ||
        !header_is(csv.header, 2, "weight")) {
        throw DataError("'" + path + "': header must be src_class,dst_class,weight");
    }
    SemanticGraph graph;
    graph.num_classes = registry.size();
    for (const auto& [row, fields] : csv.rows) {
        expect_fields(csv, row, fields, 3);
        GraphEdge edge;
        edge.src = registry.id_of(fields[0]);
        edge.dst = registry.id_of(fields[1]);
        if (edge.src < 0) row_error(csv, row, "unknown class '" + fields[0] + "'");
        if (edge.dst < 0) row_error(csv, row, "unknown class '" + fields[1] + "'");
        edge.weight = parse_double(csv, row, fields[2]);
        if (!(edge.weight > 0.0)) row_error(csv, row, "edge weight must be positive");
        graph.edges.push_back(edge);
    }
    return renormalize_per_source(std::move(graph));
}

void write_adjacency_csv(const std::string& path, const SemanticGraph& graph,
                         const ClassRegistry& registry) {
    std::ofstream file(path);
    if (!file) throw DataError("cannot write '" + path + "'");
    file << "src_class,dst_class,weight\n";
    for (const GraphEdge& e : graph.edges) {
        file << registry.names[e.src] << "," << registry.names[e.dst] << ","
             << format_double(e.weight) << "\n";
    }
    if (!file) throw DataError("failed writing '" + path + "'");
}

} // namespace protoband
