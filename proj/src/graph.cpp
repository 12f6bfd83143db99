#include "conres/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace conres {

namespace {

std::pair<int, int> ordered(int u, int v) {
    return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
}

} // namespace

// ============================================================================
// WeightedGraph
// ============================================================================

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
    if (n_ < 2) throw InvalidParameter("graph needs at least 2 vertices");

    std::set<std::pair<int, int>> seen;
    for (const Edge& e : edges_) {
        if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
            std::ostringstream os;
            os << "edge (" << e.u + 1 << "," << e.v + 1 << ") out of range for n=" << n_;
            throw InvalidParameter(os.str());
        }
        if (e.u == e.v) {
            throw SelfLoop("self-loop at vertex " + std::to_string(e.u + 1));
        }
        if (!(e.w > 0.0)) {
            std::ostringstream os;
            os << "edge (" << e.u + 1 << "," << e.v + 1 << ") has nonpositive weight " << e.w;
            throw NonpositiveWeight(os.str());
        }
        if (!seen.insert(ordered(e.u, e.v)).second) {
            std::ostringstream os;
            os << "duplicate edge (" << e.u + 1 << "," << e.v + 1 << ")";
            throw DuplicateEdge(os.str());
        }
    }

    deg_.assign(n_, 0.0);
    adj_.assign(n_, {});
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const Edge& e = edges_[k];
        deg_[e.u] += e.w;
        deg_[e.v] += e.w;
        adj_[e.u].push_back({e.v, e.w, static_cast<int>(k)});
        adj_[e.v].push_back({e.u, e.w, static_cast<int>(k)});
    }

    // connectivity (BFS from 0)
    std::vector<char> visited(n_, 0);
    std::queue<int> q;
    q.push(0);
    visited[0] = 1;
    int count = 1;
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (const Neighbor& nb : adj_[x]) {
            if (!visited[nb.vertex]) {
                visited[nb.vertex] = 1;
                ++count;
                q.push(nb.vertex);
            }
        }
    }
    if (count != n_) {
        throw DisconnectedGraph("graph is not connected (" + std::to_string(count) +
                                " of " + std::to_string(n_) + " vertices reachable)");
    }
}

bool WeightedGraph::has_edge(int u, int v) const {
    for (const Neighbor& nb : adj_[u])
        if (nb.vertex == v) return true;
    return false;
}

Matrix WeightedGraph::laplacian() const {
    Matrix L = Matrix::Zero(n_, n_);
    for (int i = 0; i < n_; ++i) L(i, i) = deg_[i];
    for (const Edge& e : edges_) {
        L(e.u, e.v) -= e.w;
        L(e.v, e.u) -= e.w;
    }
    return L;
}

WeightedGraph build_graph(int n, const std::vector<Edge>& edges) {
    return WeightedGraph(n, edges);
}

// ============================================================================
// Signature
// ============================================================================

void Signature::set(int u, int v, const Matrix& sigma) {
    if (u == v) throw SelfLoop("signature on a self-loop");
    if (sigma.rows() != d_ || sigma.cols() != d_)
        throw DimensionMismatch("signature block must be d x d");
    const double dev = (sigma.transpose() * sigma - Matrix::Identity(d_, d_))
                           .cwiseAbs()
                           .maxCoeff();
    if (dev > kOrthTol) {
        std::ostringstream os;
        os << "signature on (" << u + 1 << "," << v + 1
           << ") is not orthogonal (deviation " << dev << ")";
        throw NonOrthogonalSwitch(os.str());
    }
    auto key = ordered(u, v);
    if (entries_.count(key)) throw DuplicateEdge("signature already set for edge");
    entries_[key] = (u < v) ? sigma : Matrix(sigma.transpose());
}

Matrix Signature::get(int u, int v) const {
    auto it = entries_.find(ordered(u, v));
    if (it == entries_.end()) {
        std::ostringstream os;
        os << "no signature for edge (" << u + 1 << "," << v + 1 << ")";
        throw EdgeSetMismatch(os.str());
    }
    return (u < v) ? it->second : Matrix(it->second.transpose());
}

bool Signature::has(int u, int v) const {
    return entries_.count(ordered(u, v)) > 0;
}

std::vector<std::pair<int, int>> Signature::keys() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(entries_.size());
    for (const auto& [k, m] : entries_) out.push_back(k);
    return out;
}

Signature direct_sum(const Signature& a, const Signature& b) {
    if (a.keys() != b.keys())
        throw EdgeSetMismatch("direct_sum requires identical edge sets");
    Signature out(a.dim() + b.dim());
    for (const auto& [u, v] : a.keys()) {
        Matrix m = Matrix::Zero(out.dim(), out.dim());
        m.topLeftCorner(a.dim(), a.dim()) = a.get(u, v);
        m.bottomRightCorner(b.dim(), b.dim()) = b.get(u, v);
        out.set(u, v, m);
    }
    return out;
}

Signature identity_signature(const WeightedGraph& g, int d) {
    Signature s(d);
    for (const Edge& e : g.edges()) s.set(e.u, e.v, Matrix::Identity(d, d));
    return s;
}

// ============================================================================
// ConnectionGraph
// ============================================================================

ConnectionGraph::ConnectionGraph(WeightedGraph graph, Signature signature)
    : graph_(std::move(graph)), sig_(std::move(signature)) {
    for (const Edge& e : graph_.edges()) {
        if (!sig_.has(e.u, e.v)) {
            std::ostringstream os;
            os << "edge (" << e.u + 1 << "," << e.v + 1 << ") has no signature";
            throw EdgeSetMismatch(os.str());
        }
    }
    if (sig_.num_edges() != graph_.edges().size())
        throw EdgeSetMismatch("signature has entries for non-edges");
}

Matrix ConnectionGraph::laplacian() const {
    const int n = num_vertices();
    const int d = dim();
    Matrix L = Matrix::Zero(n * d, n * d);
    for (int i = 0; i < n; ++i)
        L.block(i * d, i * d, d, d) = degree(i) * Matrix::Identity(d, d);
    for (const Edge& e : graph_.edges()) {
        const Matrix s = sigma(e.u, e.v);
        L.block(e.u * d, e.v * d, d, d) = -e.w * s;
        L.block(e.v * d, e.u * d, d, d) = -e.w * s.transpose();
    }
    return L;
}

// ============================================================================
// Operations
// ============================================================================

Matrix quadratic_form(const ConnectionGraph& cg, const BlockVector& f) {
    if (f.num_vertices() != cg.num_vertices() || f.dim() != cg.dim())
        throw DimensionMismatch("quadratic_form: BlockVector shape mismatch");
    const int d = cg.dim();
    Matrix out = Matrix::Zero(d, d);
    for (const Edge& e : cg.graph().edges()) {
        const Matrix diff = f.block(e.u) - cg.sigma(e.u, e.v) * f.block(e.v);
        out += e.w * diff.transpose() * diff;
    }
    return out;
}

ConnectionGraph apply_switching(const ConnectionGraph& cg,
                                const std::vector<Matrix>& f) {
    const int n = cg.num_vertices();
    const int d = cg.dim();
    if (static_cast<int>(f.size()) != n)
        throw DimensionMismatch("switching map must have one matrix per vertex");
    for (int i = 0; i < n; ++i) {
        if (f[i].rows() != d || f[i].cols() != d)
            throw DimensionMismatch("switching block must be d x d");
        const double dev =
            (f[i].transpose() * f[i] - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
        if (dev > kOrthTol)
            throw NonOrthogonalSwitch("switching block at vertex " +
                                      std::to_string(i + 1) + " is not orthogonal");
    }
    Signature tau(d);
    for (const Edge& e : cg.graph().edges())
        tau.set(e.u, e.v, f[e.u] * cg.sigma(e.u, e.v) * f[e.v].transpose());
    return ConnectionGraph(cg.graph(), std::move(tau));
}

Matrix path_signature(const ConnectionGraph& cg, int i, int j) {
    const int n = cg.num_vertices();
    const int d = cg.dim();
    if (i == j) return Matrix::Identity(d, d);
    // BFS from i, recording parents.
    std::vector<int> parent(n, -1);
    std::vector<char> visited(n, 0);
    std::queue<int> q;
    q.push(i);
    visited[i] = 1;
    while (!q.empty() && !visited[j]) {
        int x = q.front();
        q.pop();
        for (const auto& nb : cg.graph().neighbors(x)) {
            if (!visited[nb.vertex]) {
                visited[nb.vertex] = 1;
                parent[nb.vertex] = x;
                q.push(nb.vertex);
            }
        }
    }
    std::vector<int> path{j};
    while (path.back() != i) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    Matrix prod = Matrix::Identity(d, d);
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
        prod = prod * cg.sigma(path[k], path[k + 1]);
    return prod;
}

BlockVector apply_laplacian(const ConnectionGraph& cg, const BlockVector& f) {
    if (f.num_vertices() != cg.num_vertices() || f.dim() != cg.dim())
        throw DimensionMismatch("apply_laplacian: BlockVector shape mismatch");
    const int n = cg.num_vertices();
    const int d = cg.dim();
    BlockVector out(n, d);
    for (int i = 0; i < n; ++i) {
        Matrix acc = cg.degree(i) * f.block(i);
        for (const auto& nb : cg.graph().neighbors(i))
            acc -= nb.weight * cg.sigma(i, nb.vertex) * f.block(nb.vertex);
        out.block(i) = acc;
    }
    return out;
}

} // namespace conres
