#include "conres/builders.hpp"

#include <cmath>

namespace conres {
namespace builders {

Matrix rotation2d(double theta) {
    Matrix r(2, 2);
    const double c = std::cos(theta), s = std::sin(theta);
    r << c, -s, s, c;
    return r;
}

Matrix rotation3d(double theta) {
    Matrix r = Matrix::Identity(3, 3);
    r.bottomRightCorner(2, 2) = rotation2d(theta);
    return r;
}

ConnectionGraph cycle(int n, double theta) {
    if (n < 3) throw InvalidParameter("cycle needs n >= 3");
    std::vector<Edge> edges;
    edges.reserve(n);
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    WeightedGraph g(n, edges);
    Signature sig(2);
    sig.set(0, 1, rotation2d(theta));
    for (int i = 1; i < n; ++i) sig.set(i, (i + 1) % n, Matrix::Identity(2, 2));
    return ConnectionGraph(std::move(g), std::move(sig));
}

ConnectionGraph line(const std::vector<double>& weights,
                     const std::vector<Matrix>& signatures) {
    if (weights.empty() || weights.size() != signatures.size())
        throw InvalidParameter("line needs matching nonempty weight/signature lists");
    const int d = static_cast<int>(signatures.front().rows());
    const int n = static_cast<int>(weights.size()) + 1;
    std::vector<Edge> edges;
    for (int k = 0; k < n - 1; ++k) edges.push_back({k, k + 1, weights[k]});
    WeightedGraph g(n, edges);
    Signature sig(d);
    for (int k = 0; k < n - 1; ++k) sig.set(k, k + 1, signatures[k]);
    return ConnectionGraph(std::move(g), std::move(sig));
}

ConnectionGraph parallel_lines(const std::vector<LineSpec>& lines) {
    if (lines.empty()) throw InvalidParameter("parallel_lines needs at least one line");
    const int d = static_cast<int>(lines.front().signatures.front().rows());
    int n = 2;
    std::vector<Edge> edges;
    Signature sig(d);
    int single_edge_lines = 0;
    for (const LineSpec& ls : lines) {
        if (ls.weights.empty() || ls.weights.size() != ls.signatures.size())
            throw InvalidParameter("each line needs matching nonempty lists");
        const std::size_t len = ls.weights.size();
        if (len == 1 && ++single_edge_lines > 1)
            throw InvalidParameter(
                "at most one single-edge line (multi-edges are excluded; subdivide)");
        int prev = 0;  // glued endpoint i
        for (std::size_t k = 0; k < len; ++k) {
            const int next = (k + 1 == len) ? 1 : n++;
            edges.push_back({prev, next, ls.weights[k]});
            sig.set(prev, next, ls.signatures[k]);
            prev = next;
        }
    }
    WeightedGraph g(n, edges);
    return ConnectionGraph(std::move(g), std::move(sig));
}

ConnectionGraph dumbbell(int m, double theta12, double theta23) {
    if (m < 1) throw InvalidParameter("dumbbell needs m >= 1");
    // 0-based layout: vertex 0 and clique {3..m+1} form the first K_m,
    // vertex 2 and clique {m+2..2m} form the second, vertex 1 is the bridge.
    const int n = 2 * m + 1;
    std::vector<int> cliqueA{0}, cliqueB{2};
    for (int k = 0; k < m - 1; ++k) {
        cliqueA.push_back(3 + k);
        cliqueB.push_back(m + 2 + k);
    }
    std::vector<Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}};
    auto add_clique = [&edges](const std::vector<int>& verts) {
        for (std::size_t a = 0; a < verts.size(); ++a)
            for (std::size_t b = a + 1; b < verts.size(); ++b)
                edges.push_back({verts[a], verts[b], 1.0});
    };
    add_clique(cliqueA);
    add_clique(cliqueB);
    WeightedGraph g(n, edges);
    Signature sig(3);
    sig.set(0, 1, rotation3d(theta12));
    sig.set(1, 2, rotation3d(theta23));
    for (const Edge& e : g.edges())
        if (!sig.has(e.u, e.v)) sig.set(e.u, e.v, Matrix::Identity(3, 3));
    return ConnectionGraph(std::move(g), std::move(sig));
}

ConnectionGraph wheatstone_on_edge(double theta, int u, int v) {
    std::vector<Edge> edges{{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {2, 3, 1.0}};
    WeightedGraph g(4, edges);
    bool found = false;
    for (const Edge& e : edges)
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u)) found = true;
    if (!found) throw InvalidParameter("wheatstone has no such edge");
    Signature sig(3);
    for (const Edge& e : edges) {
        if ((e.u == u && e.v == v) || (e.u == v && e.v == u))
            sig.set(u, v, rotation3d(theta));
        else
            sig.set(e.u, e.v, Matrix::Identity(3, 3));
    }
    return ConnectionGraph(std::move(g), std::move(sig));
}

ConnectionGraph wheatstone(double theta) { return wheatstone_on_edge(theta, 1, 3); }

} // namespace builders
} // namespace conres
