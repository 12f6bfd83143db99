#include "conres/meanpath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "conres/dirichlet.hpp"
#include "conres/linalg.hpp"

namespace conres {

namespace {

Matrix symmetrized(const Matrix& m, double max_asym, const char* what) {
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > max_asym) {
        std::ostringstream os;
        os << what << ": asymmetry " << asym << " exceeds " << max_asym;
        throw ComputationError(os.str());
    }
    return 0.5 * (m + m.transpose());
}

/// sum over neighbors y of P_{iy} * sigma_{iy} * V(y)
Matrix neighbor_step(const ConnectionGraph& cg, int i, const BlockVector& v) {
    const int d = cg.dim();
    Matrix acc = Matrix::Zero(d, d);
    for (const auto& nb : cg.graph().neighbors(i))
        acc += (nb.weight / cg.degree(i)) * cg.sigma(i, nb.vertex) * v.block(nb.vertex);
    return acc;
}

/// sum over neighbors y of P_{iy} * h(y) for a scalar vertex function h
double neighbor_step_scalar(const WeightedGraph& g, int i, const Vector& h) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(i))
        acc += (nb.weight / g.degree(i)) * h(nb.vertex);
    return acc;
}

/// Classical voltage: h(i) = 1, h(j) = 0, harmonic elsewhere.
Vector classical_voltage(const WeightedGraph& g, int i, int j) {
    const int n = g.num_vertices();
    Vector h = Vector::Zero(n);
    h(i) = 1.0;
    std::vector<int> interior;
    for (int v = 0; v < n; ++v)
        if (v != i && v != j) interior.push_back(v);
    if (interior.empty()) return h;
    const Matrix L = g.laplacian();
    Eigen::VectorXi ii(interior.size());
    for (std::size_t k = 0; k < interior.size(); ++k) ii(k) = interior[k];
    Eigen::VectorXi bi(2);
    bi << i, j;
    Vector phi(2);
    phi << 1.0, 0.0;
    const Vector rhs = -L(ii, bi) * phi;
    Eigen::LLT<Matrix> llt(L(ii, ii));
    const Vector sol = llt.solve(rhs);
    for (std::size_t k = 0; k < interior.size(); ++k) h(interior[k]) = sol(k);
    return h;
}

} // namespace

std::uint64_t default_max_steps(const WeightedGraph& g) {
    double max_deg = 0.0, min_w = std::numeric_limits<double>::infinity();
    for (int v = 0; v < g.num_vertices(); ++v) max_deg = std::max(max_deg, g.degree(v));
    for (const Edge& e : g.edges()) min_w = std::min(min_w, e.w);
    const double n = static_cast<double>(g.num_vertices());
    return static_cast<std::uint64_t>(std::ceil(100.0 * n * n * max_deg / min_w));
}

// ============================================================================
// Exact operations
// ============================================================================

BlockVector omega0_all(const ConnectionGraph& cg, int j) {
    const int d = cg.dim();
    BoundaryData bd;
    bd.boundary = {j};
    bd.values[j] = Matrix::Identity(d, d);
    return solve_dirichlet(cg, bd);
}

MeanPathSignature omega0(const ConnectionGraph& cg, int i, int j) {
    const int d = cg.dim();
    if (i == j) return {Matrix::Identity(d, d), PathKind::endpoint, {}};
    const BlockVector all = omega0_all(cg, j);
    return {all.block(i), PathKind::endpoint, {}};
}

MeanPathSignature omega1_loop(const ConnectionGraph& cg, int i) {
    const int d = cg.dim();
    IndexSet elim;  // eliminate everything except i
    for (int v = 0; v < cg.num_vertices(); ++v)
        if (v != i) elim.push_back(v);
    const Matrix si = linalg::schur_complement(cg.laplacian(), elim, d);
    Matrix om = Matrix::Identity(d, d) - si / cg.degree(i);
    om = symmetrized(om, 1e-10, "omega1_loop");
    return {om, PathKind::loop, {}};
}

MeanPathSignature omega0_conditioned(const ConnectionGraph& cg, int x, int i,
                                     int j) {
    if (i == j) throw SamePair("omega0_conditioned needs distinct i, j");
    const int d = cg.dim();
    if (x == i) return {Matrix::Identity(d, d), PathKind::conditioned, {}};
    const double p = hitting_probability(cg.graph(), x, i, j);
    if (p <= kProbFloor) {
        std::ostringstream os;
        os << "walk from " << x + 1 << " cannot reach " << i + 1 << " before "
           << j + 1 << " (probability " << p << ")";
        throw UnreachableConditioning(os.str());
    }
    const BlockVector v = voltage_function(cg, i, j);
    return {v.block(x) / p, PathKind::conditioned, {}};
}

MeanPathSignature omega0_conditioned_via_doob(const ConnectionGraph& cg, int x,
                                              int i, int j) {
    if (i == j) throw SamePair("omega0_conditioned_via_doob needs distinct i, j");
    const int n = cg.num_vertices();
    const int d = cg.dim();
    if (x == i) return {Matrix::Identity(d, d), PathKind::conditioned, {}};
    const Vector h = [&] {
        Vector hv = Vector::Zero(n);
        for (int v = 0; v < n; ++v)
            hv(v) = (v == i) ? 1.0 : (v == j ? 0.0 : hitting_probability(cg.graph(), v, i, j));
        return hv;
    }();
    if (h(x) <= kProbFloor)
        throw UnreachableConditioning("conditioning event has vanishing probability");

    // Conditioned kernel P~_{vy} = P_{vy} h(y) / h(v) on vertices that can
    // still reach i before j. Solve (I - P~ sigma) U = source, U(i) = I.
    std::vector<int> active;  // unknowns: v != i with h(v) > floor
    std::vector<int> pos(n, -1);
    for (int v = 0; v < n; ++v) {
        if (v == i || h(v) <= kProbFloor) continue;
        pos[v] = static_cast<int>(active.size());
        active.push_back(v);
    }
    const int m = static_cast<int>(active.size());
    Matrix A = Matrix::Identity(m * d, m * d);
    Matrix rhs = Matrix::Zero(m * d, d);
    for (int a = 0; a < m; ++a) {
        const int v = active[a];
        for (const auto& nb : cg.graph().neighbors(v)) {
            const int y = nb.vertex;
            const double p = (nb.weight / cg.degree(v)) * h(y) / h(v);
            if (y == i) {
                rhs.block(a * d, 0, d, d) += p * cg.sigma(v, y);
            } else if (pos[y] >= 0) {
                A.block(a * d, pos[y] * d, d, d) -= p * cg.sigma(v, y);
            }
        }
    }
    const Matrix u = A.partialPivLu().solve(rhs);
    return {u.block(pos[x] * d, 0, d, d), PathKind::conditioned, {}};
}

MeanPathSignature omega1_conditioned_loop(const ConnectionGraph& cg, int i,
                                          int j) {
    if (i == j) throw SamePair("omega1_conditioned_loop needs distinct i, j");
    const Vector h = classical_voltage(cg.graph(), i, j);
    const double return_prob = neighbor_step_scalar(cg.graph(), i, h);
    if (return_prob <= kProbFloor) {
        std::ostringstream os;
        os << "every excursion from " << i + 1 << " hits " << j + 1
           << " before returning (probability " << return_prob << ")";
        throw DegenerateConditioning(os.str());
    }
    const BlockVector v = voltage_function(cg, i, j);
    Matrix om = neighbor_step(cg, i, v) / return_prob;
    om = symmetrized(om, 1e-9, "omega1_conditioned_loop");
    return {om, PathKind::conditioned, {}};
}

MeanPathSignature omega1_conditioned_escape(const ConnectionGraph& cg, int i,
                                            int j) {
    if (i == j) throw SamePair("omega1_conditioned_escape needs distinct i, j");
    const double p = escape_probability(cg.graph(), i, j);
    if (p <= kProbFloor)
        throw DegenerateConditioning("escape probability vanishes");
    const BlockVector v = voltage_function(cg, j, i);
    return {neighbor_step(cg, i, v) / p, PathKind::conditioned, {}};
}

// ============================================================================
// Random walk quantities
// ============================================================================

double hitting_probability(const WeightedGraph& g, int x, int i, int j) {
    if (i == j) throw SamePair("hitting_probability needs distinct i, j");
    const Vector h = classical_voltage(g, i, j);
    return std::clamp(h(x), 0.0, 1.0);
}

double escape_probability(const WeightedGraph& g, int i, int j) {
    if (i == j) throw SamePair("escape_probability needs distinct i, j");
    const Vector h = classical_voltage(g, i, j);  // P^.[T_i < T_j]
    double stay = 0.0;
    for (const auto& nb : g.neighbors(i))
        stay += (nb.weight / g.degree(i)) * h(nb.vertex);
    return std::clamp(1.0 - stay, 0.0, 1.0);
}

// ============================================================================
// Monte Carlo
// ============================================================================

namespace {

struct WalkTable {
    // per-vertex cumulative weights and neighbor data for O(log deg) stepping
    std::vector<std::vector<double>> cum;
    std::vector<std::vector<int>> nbr;
    double total(int v) const { return cum[v].back(); }

    explicit WalkTable(const WeightedGraph& g) {
        const int n = g.num_vertices();
        cum.resize(n);
        nbr.resize(n);
        for (int v = 0; v < n; ++v) {
            double acc = 0.0;
            for (const auto& nb : g.neighbors(v)) {
                acc += nb.weight;
                cum[v].push_back(acc);
                nbr[v].push_back(nb.vertex);
            }
        }
    }

    int step(int v, double u01) const {
        const double target = u01 * total(v);
        const auto& c = cum[v];
        const std::size_t k =
            std::lower_bound(c.begin(), c.end(), target) - c.begin();
        return nbr[v][std::min(k, c.size() - 1)];
    }
};

} // namespace

MeanPathSignature mc_mean_path(const ConnectionGraph& cg, int i, int j, int s,
                               std::optional<int> condition,
                               const WalkConfig& cfg) {
    cfg.validate();
    if (s != 0 && s != 1) throw InvalidParameter("s must be 0 or 1");
    if (condition && (*condition == j))
        throw InvalidParameter("conditioning vertex must differ from the target");
    const int d = cg.dim();
    const std::uint64_t max_steps =
        cfg.max_steps > 0 ? cfg.max_steps : default_max_steps(cg.graph());
    const WalkTable table(cg.graph());

    // Welford accumulation keeps the variance stable when all samples agree.
    Matrix mean = Matrix::Zero(d, d);
    Matrix m2 = Matrix::Zero(d, d);
    MonteCarloInfo info;
    info.samples = cfg.samples;

    for (std::uint64_t sample = 0; sample < cfg.samples; ++sample) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, sample);
        int cur = i;
        Matrix prod = Matrix::Identity(d, d);
        bool accepted = false, rejected = false;

        if (s == 0 && cur == j) {
            accepted = true;  // zero-length walk
        } else if (s == 0 && condition && cur == *condition) {
            rejected = true;  // conditioning vertex hit at time 0
        } else {
            for (std::uint64_t t = 1; t <= max_steps; ++t) {
                const int nxt = table.step(cur, rng.uniform());
                prod = prod * cg.sigma(cur, nxt);
                cur = nxt;
                if (cur == j) {
                    accepted = true;
                    break;
                }
                if (condition && cur == *condition) {
                    rejected = true;
                    break;
                }
            }
        }
        if (accepted) {
            ++info.accepted;
            const Matrix delta = prod - mean;
            mean += delta / static_cast<double>(info.accepted);
            m2 += delta.cwiseProduct(prod - mean);
        } else if (rejected) {
            ++info.rejected;
        } else {
            ++info.censored;
        }
    }

    if (info.accepted == 0) {
        std::ostringstream os;
        os << "no usable samples (" << info.censored << " censored, "
           << info.rejected << " rejected of " << info.samples << ")";
        throw AllCensored(os.str());
    }

    const double m = static_cast<double>(info.accepted);
    if (info.accepted > 1) {
        const Matrix var = m2.cwiseMax(0.0) / (m - 1.0);
        info.stderr_max = std::sqrt(var.maxCoeff() / m);
    } else {
        info.stderr_max = std::numeric_limits<double>::infinity();
    }

    PathKind kind = condition ? PathKind::conditioned
                              : (i == j ? PathKind::loop : PathKind::endpoint);
    return {mean, kind, info};
}

// ============================================================================
// Kernel transport
// ============================================================================

KernelTransportReport kernel_transport_check(const ConnectionGraph& cg,
                                             const BlockVector& f) {
    const int n = cg.num_vertices();
    const BlockVector lf = apply_laplacian(cg, f);
    const double fn = std::max(1.0, f.data().norm());
    const double resid = lf.data().norm();
    if (resid > 1e-9 * fn)
        throw NotInKernel("L f does not vanish (residual " + std::to_string(resid) + ")");

    double max_dev = 0.0;
    for (int j = 0; j < n; ++j) {
        const BlockVector om = omega0_all(cg, j);
        for (int i = 0; i < n; ++i) {
            const Matrix dev = f.block(i) - om.block(i) * f.block(j);
            max_dev = std::max(max_dev, dev.cwiseAbs().maxCoeff());
        }
    }
    return {resid, max_dev};
}

} // namespace conres
