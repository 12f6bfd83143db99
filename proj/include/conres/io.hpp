#pragma once

#include <optional>
#include <string>

#include "conres/graph.hpp"

namespace conres {

/// Raised for malformed documents (bad JSON, wrong format tag, missing keys).
struct ParseError : Error {
    using Error::Error;
};

/// On-disk description of a connection graph. Vertex ids are 1-based in the
/// document and converted to the library's 0-based ids on parse.
struct GraphDocument {
    int n = 0;
    int d = 0;
    struct DocEdge {
        int u;  // 1-based
        int v;  // 1-based
        double w;
        Matrix sigma;
    };
    std::vector<DocEdge> edges;
    std::optional<std::string> name;
    std::optional<std::string> description;

    static GraphDocument from_connection_graph(const ConnectionGraph& cg);
    ConnectionGraph to_connection_graph() const;
};

/// Parse a "conres/1" JSON document. Structural problems throw ParseError;
/// semantic problems surface as ValidationError when building the graph.
GraphDocument parse_graph_document(const std::string& json_text);
GraphDocument load_graph_document(const std::string& path);

/// Deterministic serialization: fixed key order, round-trip-exact reals.
std::string serialize_graph_document(const GraphDocument& doc);
void save_graph_document(const GraphDocument& doc, const std::string& path);

/// Render a double with round-trip-safe precision (17 significant digits).
std::string format_real(double x);

/// RFC-4180-style CSV with a mandatory header and LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& cells);
    const std::string& text() const { return text_; }
    void write(const std::string& path) const;

private:
    std::size_t columns_;
    std::string text_;
};

} // namespace conres
