#include "protoband/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "protoband/dataset_io.hpp"
#include "protoband/errors.hpp"

namespace protoband {

namespace {

constexpr const char* kVersionLine = "protoband-model v1";

struct LineReader {
    std::ifstream file;
    std::string path;
    int line_no = 0;

    explicit LineReader(const std::string& p) : file(p), path(p) {
        if (!file) throw DataError("cannot open model file '" + p + "'");
    }

    std::string next() {
        std::string line;
        while (std::getline(file, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) return line;
        }
        throw DataError("'" + path + "': unexpected end of model file");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw DataError("'" + path + "' line " + std::to_string(line_no) + ": " + msg);
    }
};

std::istringstream expect_keyword(LineReader& reader, const std::string& keyword) {
    std::istringstream in(reader.next());
    std::string word;
    in >> word;
    if (word != keyword) reader.fail("expected '" + keyword + "', found '" + word + "'");
    return in;
}

double read_double(LineReader& reader, std::istringstream& in) {
    double value = 0.0;
    if (!(in >> value)) reader.fail("malformed number");
    return value;
}

int read_int(LineReader& reader, std::istringstream& in) {
    int value = 0;
    if (!(in >> value)) reader.fail("malformed integer");
    return value;
}

void write_vector(std::ofstream& out, const std::vector<double>& values) {
    for (double v : values) out << " " << format_double(v);
    out << "\n";
}

std::vector<double> read_vector(LineReader& reader, std::istringstream& in, int dim) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) values.push_back(read_double(reader, in));
    std::string extra;
    if (in >> extra) reader.fail("trailing data after " + std::to_string(dim) + " values");
    return values;
}

} // namespace

void save_model(const Model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file '" + path + "'");

    out << kVersionLine << "\n";
    out << "family " << model.wavelet.family << "\n";
    out << "levels " << model.wavelet.levels << "\n";
    out << "coeffs_per_band " << model.wavelet.coeffs_per_band << "\n";
    out << "boundary " << to_string(model.wavelet.boundary) << "\n";
    out << "normalize " << (model.wavelet.normalize ? 1 : 0) << "\n";
    out << "lambda1 " << format_double(model.hyperparams.lambda1) << "\n";
    out << "lambda2 " << format_double(model.hyperparams.lambda2) << "\n";
    out << "margin " << format_double(model.hyperparams.margin) << "\n";
    out << "dim " << model.dim() << "\n";

    out << "classes " << model.registry.size() << "\n";
    for (int id = 0; id < model.registry.size(); ++id) {
        out << "class " << id << " " << model.registry.names[id] << "\n";
    }

    out << "theta";
    write_vector(out, model.metric_params.theta);
    for (int id = 0; id < model.prototypes.size(); ++id) {
        out << "prototype " << id;
        write_vector(out, model.prototypes.vectors[id]);
    }

    out << "edges " << model.graph.edges.size() << "\n";
    for (const GraphEdge& e : model.graph.edges) {
        out << "edge " << e.src << " " << e.dst << " " << format_double(e.weight) << "\n";
    }

    out << "trace " << model.energy_trace.size() << "\n";
    for (const TraceRow& row : model.energy_trace) {
        out << "tracepoint " << row.iteration << " " << format_double(row.total) << " "
            << format_double(row.attachment) << " " << format_double(row.tension) << " "
            << format_double(row.repulsion) << "\n";
    }
    out << "end\n";
    if (!out) throw DataError("failed writing model file '" + path + "'");
}

Model load_model(const std::string& path) {
    LineReader reader(path);
    if (reader.next() != kVersionLine) {
        reader.fail(std::string("unsupported model version (expected '") + kVersionLine + "')");
    }

    Model model;
    {
        auto in = expect_keyword(reader, "family");
        if (!(in >> model.wavelet.family)) reader.fail("missing family name");
        filter_pair(model.wavelet.family);
    }
    model.wavelet.levels = [&] {
        auto in = expect_keyword(reader, "levels");
        return read_int(reader, in);
    }();
    model.wavelet.coeffs_per_band = [&] {
        auto in = expect_keyword(reader, "coeffs_per_band");
        return read_int(reader, in);
    }();
    {
        auto in = expect_keyword(reader, "boundary");
        std::string mode;
        if (!(in >> mode)) reader.fail("missing boundary mode");
        model.wavelet.boundary = boundary_from_string(mode);
    }
    {
        auto in = expect_keyword(reader, "normalize");
        model.wavelet.normalize = read_int(reader, in) != 0;
    }
    {
        auto in = expect_keyword(reader, "lambda1");
        model.hyperparams.lambda1 = read_double(reader, in);
    }
    {
        auto in = expect_keyword(reader, "lambda2");
        model.hyperparams.lambda2 = read_double(reader, in);
    }
    {
        auto in = expect_keyword(reader, "margin");
        model.hyperparams.margin = read_double(reader, in);
    }
    const int dim = [&] {
        auto in = expect_keyword(reader, "dim");
        return read_int(reader, in);
    }();
    if (dim < 1) reader.fail("dimension must be positive");

    const int num_classes = [&] {
        auto in = expect_keyword(reader, "classes");
        return read_int(reader, in);
    }();
    if (num_classes < 1) reader.fail("model must have at least one class");
    for (int id = 0; id < num_classes; ++id) {
        auto in = expect_keyword(reader, "class");
        if (read_int(reader, in) != id) reader.fail("class ids must be contiguous from 0");
        std::string name;
        std::getline(in, name);
        while (!name.empty() && name.front() == ' ') name.erase(name.begin());
        if (name.empty()) reader.fail("empty class name");
        model.registry.names.push_back(name);
    }

    {
        auto in = expect_keyword(reader, "theta");
        model.metric_params.theta = read_vector(reader, in, dim);
    }
    for (int id = 0; id < num_classes; ++id) {
        auto in = expect_keyword(reader, "prototype");
        if (read_int(reader, in) != id) reader.fail("prototype ids must be contiguous from 0");
        model.prototypes.vectors.push_back(read_vector(reader, in, dim));
    }

    const int num_edges = [&] {
        auto in = expect_keyword(reader, "edges");
        return read_int(reader, in);
    }();
    model.graph.num_classes = num_classes;
    for (int i = 0; i < num_edges; ++i) {
        auto in = expect_keyword(reader, "edge");
        GraphEdge e;
        e.src = read_int(reader, in);
        e.dst = read_int(reader, in);
        e.weight = read_double(reader, in);
        if (e.src < 0 || e.src >= num_classes || e.dst < 0 || e.dst >= num_classes) {
            reader.fail("edge references an unknown class id");
        }
        model.graph.edges.push_back(e);
    }

    const int trace_len = [&] {
        auto in = expect_keyword(reader, "trace");
        return read_int(reader, in);
    }();
    for (int i = 0; i < trace_len; ++i) {
        auto in = expect_keyword(reader, "tracepoint");
        TraceRow row;
        row.iteration = read_int(reader, in);
        row.total = read_double(reader, in);
        row.attachment = read_double(reader, in);
        row.tension = read_double(reader, in);
        row.repulsion = read_double(reader, in);
        if (!std::isfinite(row.total)) reader.fail("non-finite trace energy");
        if (!model.energy_trace.empty() &&
            row.total > model.energy_trace.back().total + 1e-12) {
            reader.fail("energy trace is not monotone non-increasing");
        }
        model.energy_trace.push_back(row);
    }
    if (reader.next() != "end") reader.fail("missing end marker");

    for (double t : model.metric_params.theta) {
        if (!std::isfinite(t)) reader.fail("non-finite metric parameter");
    }
    for (const auto& proto : model.prototypes.vectors) {
        for (double v : proto) {
            if (!std::isfinite(v)) reader.fail("non-finite prototype value");
        }
    }
    return model;
}

} // namespace protoband
