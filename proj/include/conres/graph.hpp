#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "conres/errors.hpp"

namespace conres {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Orthogonality tolerance for signature matrices and switching maps.
inline constexpr double kOrthTol = 1e-9;

/// Sorted set of distinct block (vertex) indices, 0-based.
using IndexSet = std::vector<int>;

// ============================================================================
// WeightedGraph
// ============================================================================

/// Undirected edge with strictly positive weight. Vertices are 0-based here;
/// the CLI and the JSON document format use 1-based ids.
struct Edge {
    int u;
    int v;
    double w;
};

/// Connected undirected weighted graph without self-loops or multi-edges.
/// Validated on construction; immutable afterwards.
class WeightedGraph {
public:
    WeightedGraph(int n, std::vector<Edge> edges);

    int num_vertices() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }
    double degree(int i) const { return deg_[i]; }
    const std::vector<double>& degrees() const { return deg_; }

    /// Neighbors of i as (vertex, weight, edge index) triples.
    struct Neighbor {
        int vertex;
        double weight;
        int edge;
    };
    const std::vector<Neighbor>& neighbors(int i) const { return adj_[i]; }

    bool has_edge(int u, int v) const;

    /// Classical graph Laplacian L = D - W (n x n).
    Matrix laplacian() const;

private:
    int n_;
    std::vector<Edge> edges_;
    std::vector<double> deg_;
    std::vector<std::vector<Neighbor>> adj_;
};

/// Validating constructor wrapper matching the builder-style call sites.
WeightedGraph build_graph(int n, const std::vector<Edge>& edges);

// ============================================================================
// Signature
// ============================================================================

/// Edge-to-O(d) assignment. Only one orientation per edge is stored (the
/// (min,max) one); the reverse is synthesized as the exact transpose, so
/// sigma(v,u) == sigma(u,v)^T holds bit-exactly.
class Signature {
public:
    explicit Signature(int d) : d_(d) {
        if (d < 1) throw InvalidParameter("signature dimension must be positive");
    }

    int dim() const { return d_; }
    std::size_t num_edges() const { return entries_.size(); }

    /// Store sigma for the oriented edge (u,v). Throws if not orthogonal
    /// within kOrthTol or if the shape is wrong.
    void set(int u, int v, const Matrix& sigma);

    /// Signature of the oriented edge (u,v). Throws EdgeSetMismatch if absent.
    Matrix get(int u, int v) const;

    bool has(int u, int v) const;

    /// Stored (u<v) keys, sorted.
    std::vector<std::pair<int, int>> keys() const;

private:
    int d_;
    std::map<std::pair<int, int>, Matrix> entries_;
};

/// Blockwise diagonal combination of two signatures over the same edge set.
Signature direct_sum(const Signature& a, const Signature& b);

/// d-dimensional all-identity signature over the edges of g.
Signature identity_signature(const WeightedGraph& g, int d);

// ============================================================================
// ConnectionGraph
// ============================================================================

/// A weighted graph together with a matching signature.
class ConnectionGraph {
public:
    ConnectionGraph(WeightedGraph graph, Signature signature);

    const WeightedGraph& graph() const { return graph_; }
    const Signature& signature() const { return sig_; }
    int num_vertices() const { return graph_.num_vertices(); }
    int dim() const { return sig_.dim(); }
    double degree(int i) const { return graph_.degree(i); }
    Matrix sigma(int u, int v) const { return sig_.get(u, v); }

    /// Connection Laplacian: nd x nd, deg(i)*I diagonal blocks and
    /// -w_ij sigma_ij off-diagonal blocks. Symmetric by construction.
    Matrix laplacian() const;

private:
    WeightedGraph graph_;
    Signature sig_;
};

// ============================================================================
// BlockVector
// ============================================================================

/// Function V -> R^{d x d}, stored as an (n*d) x d stacked matrix.
class BlockVector {
public:
    BlockVector(int n, int d) : n_(n), d_(d), data_(Matrix::Zero(n * d, d)) {}
    BlockVector(int n, int d, Matrix data) : n_(n), d_(d), data_(std::move(data)) {
        if (data_.rows() != static_cast<Eigen::Index>(n) * d || data_.cols() != d)
            throw DimensionMismatch("BlockVector data must be (n*d) x d");
    }

    int num_vertices() const { return n_; }
    int dim() const { return d_; }
    const Matrix& data() const { return data_; }
    Matrix& data() { return data_; }

    Eigen::Block<Matrix> block(int i) { return data_.block(i * d_, 0, d_, d_); }
    Eigen::Block<const Matrix> block(int i) const {
        return data_.block(i * d_, 0, d_, d_);
    }

private:
    int n_;
    int d_;
    Matrix data_;
};

// ============================================================================
// Operations
// ============================================================================

/// f^T L f evaluated as the edge sum
/// sum_{ij in E} w_ij (f(i) - sigma_ij f(j))^T (f(i) - sigma_ij f(j)).
Matrix quadratic_form(const ConnectionGraph& cg, const BlockVector& f);

/// Apply a vertexwise switching map: tau_ij = f(i) sigma_ij f(j)^T.
/// Each f(i) must be orthogonal within kOrthTol.
ConnectionGraph apply_switching(const ConnectionGraph& cg,
                                const std::vector<Matrix>& f);

/// Product of edge signatures along the BFS tree path from i to j.
/// For consistent signatures this is the path-independent sigma_ij.
Matrix path_signature(const ConnectionGraph& cg, int i, int j);

/// (L f)(i) for every vertex, returned as a BlockVector.
BlockVector apply_laplacian(const ConnectionGraph& cg, const BlockVector& f);

} // namespace conres
