#include "conres/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace conres {

using ordered_json = nlohmann::ordered_json;

GraphDocument GraphDocument::from_connection_graph(const ConnectionGraph& cg) {
    GraphDocument doc;
    doc.n = cg.num_vertices();
    doc.d = cg.dim();
    for (const Edge& e : cg.graph().edges())
        doc.edges.push_back({e.u + 1, e.v + 1, e.w, cg.sigma(e.u, e.v)});
    return doc;
}

ConnectionGraph GraphDocument::to_connection_graph() const {
    std::vector<Edge> edges;
    edges.reserve(this->edges.size());
    for (const DocEdge& e : this->edges) edges.push_back({e.u - 1, e.v - 1, e.w});
    WeightedGraph g(n, edges);
    Signature sig(d);
    for (const DocEdge& e : this->edges) sig.set(e.u - 1, e.v - 1, e.sigma);
    return ConnectionGraph(std::move(g), std::move(sig));
}

GraphDocument parse_graph_document(const std::string& json_text) {
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", "") != "conres/1")
            throw ParseError("missing or unsupported format tag (want conres/1)");
        GraphDocument doc;
        doc.n = j.at("n").get<int>();
        doc.d = j.at("d").get<int>();
        if (doc.d < 1) throw ParseError("d must be positive");
        for (const auto& je : j.at("edges")) {
            GraphDocument::DocEdge e;
            e.u = je.at("u").get<int>();
            e.v = je.at("v").get<int>();
            e.w = je.at("w").get<double>();
            const auto& rows = je.at("sigma");
            if (!rows.is_array() || static_cast<int>(rows.size()) != doc.d)
                throw ParseError("sigma must be a d x d array");
            e.sigma = Matrix(doc.d, doc.d);
            for (int r = 0; r < doc.d; ++r) {
                if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != doc.d)
                    throw ParseError("sigma must be a d x d array");
                for (int c = 0; c < doc.d; ++c)
                    e.sigma(r, c) = rows[r][c].get<double>();
            }
            doc.edges.push_back(std::move(e));
        }
        if (j.contains("metadata")) {
            const auto& meta = j.at("metadata");
            if (meta.contains("name")) doc.name = meta.at("name").get<std::string>();
            if (meta.contains("description"))
                doc.description = meta.at("description").get<std::string>();
        }
        return doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

GraphDocument load_graph_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_graph_document(buf.str());
}

std::string serialize_graph_document(const GraphDocument& doc) {
    ordered_json j;
    j["format"] = "conres/1";
    j["n"] = doc.n;
    j["d"] = doc.d;
    j["edges"] = ordered_json::array();
    for (const auto& e : doc.edges) {
        ordered_json je;
        je["u"] = e.u;
        je["v"] = e.v;
        je["w"] = e.w;
        ordered_json rows = ordered_json::array();
        for (int r = 0; r < doc.d; ++r) {
            ordered_json row = ordered_json::array();
            for (int c = 0; c < doc.d; ++c) row.push_back(e.sigma(r, c));
            rows.push_back(std::move(row));
        }
        je["sigma"] = std::move(rows);
        j["edges"].push_back(std::move(je));
    }
    if (doc.name || doc.description) {
        ordered_json meta;
        if (doc.name) meta["name"] = *doc.name;
        if (doc.description) meta["description"] = *doc.description;
        j["metadata"] = std::move(meta);
    }
    return j.dump(2) + "\n";
}

void save_graph_document(const GraphDocument& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << serialize_graph_document(doc);
}

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (k) text_ += ',';
        text_ += header[k];
    }
    text_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw InvalidParameter("CSV row width does not match the header");
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) text_ += ',';
        text_ += cells[k];
    }
    text_ += '\n';
}

void CsvWriter::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text_;
}

} // namespace conres
