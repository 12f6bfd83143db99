// Command-line interface: graph generation, quantity computation, parameter
// sweeps, and a self-check suite over the identity battery.
//
// Exit codes: 0 ok, 2 document parse error, 3 input validation error,
// 4 computation error, 5 check-suite failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conres/builders.hpp"
#include "conres/conductance.hpp"
#include "conres/decompose.hpp"
#include "conres/dirichlet.hpp"
#include "conres/io.hpp"
#include "conres/linalg.hpp"
#include "conres/meanpath.hpp"
#include "conres/resistance.hpp"

namespace {

using namespace conres;

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitComputation = 4;
constexpr int kExitCheckFailure = 5;

struct Pair1Based {
    int i = 0;  // 1-based from the command line
    int j = 0;
};

void require_vertex_range(int id_1based, int n) {
    if (id_1based < 1 || id_1based > n) {
        std::ostringstream os;
        os << "vertex id " << id_1based << " out of range 1.." << n;
        throw InvalidParameter(os.str());
    }
}

std::pair<int, int> to_internal(const Pair1Based& p, int n) {
    require_vertex_range(p.i, n);
    require_vertex_range(p.j, n);
    if (p.i == p.j) throw SamePair("pair vertices must be distinct");
    return {p.i - 1, p.j - 1};
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(output_path, std::ios::binary);
        if (!out) throw Error("cannot write " + output_path);
        out << text;
    }
}

std::string matrix_csv(const Matrix& m, const std::string& label) {
    std::ostringstream os;
    os << "block,row";
    for (Eigen::Index c = 0; c < m.cols(); ++c) os << ",c" << c;
    os << "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        os << label << "," << r;
        for (Eigen::Index c = 0; c < m.cols(); ++c) os << "," << format_real(m(r, c));
        os << "\n";
    }
    return os.str();
}

std::string pair_matrix_csv(const PairMatrix& pm) {
    std::ostringstream os;
    os << "block,row";
    for (int c = 0; c < pm.d; ++c) os << ",c" << c;
    os << "\n";
    const std::vector<std::pair<std::string, Matrix>> blocks{
        {"ii", pm.ii()}, {"ij", pm.ij()}, {"ji", pm.ji()}, {"jj", pm.jj()}};
    for (const auto& [label, blk] : blocks)
        for (int r = 0; r < pm.d; ++r) {
            os << label << "," << r;
            for (int c = 0; c < pm.d; ++c) os << "," << format_real(blk(r, c));
            os << "\n";
        }
    return os.str();
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

int run_compute(const std::string& input, const Pair1Based& pair,
                const std::string& quantity, const std::string& output) {
    const ConnectionGraph cg = load_graph_document(input).to_connection_graph();
    const auto [i, j] = to_internal(pair, cg.num_vertices());

    if (quantity == "classical-er") {
        emit(format_real(classical_effective_resistance(cg.graph(), i, j)) + "\n",
             output);
    } else if (quantity == "chung-cr") {
        emit(format_real(chung_connection_resistance(cg, i, j)) + "\n", output);
    } else if (quantity == "scalar-cr") {
        emit(format_real(scalar_connection_resistance(cg, i, j)) + "\n", output);
    } else if (quantity == "conductance") {
        emit(pair_matrix_csv(conductance_matrix(cg, i, j)), output);
    } else if (quantity == "resistance") {
        emit(pair_matrix_csv(resistance_matrix(cg, i, j)), output);
    } else if (quantity == "omega0") {
        emit(matrix_csv(omega0(cg, i, j).value, "omega0"), output);
    } else if (quantity == "omega1-loop") {
        emit(matrix_csv(omega1_loop(cg, i).value, "omega1"), output);
    } else if (quantity == "nullity") {
        emit(std::to_string(nullity(cg)) + "\n", output);
    } else if (quantity == "consistent") {
        emit(std::string(is_consistent(cg) ? "true" : "false") + "\n", output);
    } else {
        throw InvalidParameter("unknown quantity: " + quantity);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOptions {
    std::string builder;
    int n = 3;
    int m = 4;
    double theta = 0.0;
    double theta12 = 0.0;
    double theta23 = 0.0;
    std::vector<double> weights;
    std::string output;
};

int run_gen(const GenOptions& opt) {
    std::optional<ConnectionGraph> cg;
    if (opt.builder == "cycle") {
        cg = builders::cycle(opt.n, opt.theta);
    } else if (opt.builder == "wheatstone") {
        cg = builders::wheatstone(opt.theta);
    } else if (opt.builder == "dumbbell") {
        cg = builders::dumbbell(opt.m, opt.theta12, opt.theta23);
    } else if (opt.builder == "line") {
        if (opt.weights.empty()) throw InvalidParameter("line needs --weights");
        std::vector<Matrix> sigs(opt.weights.size(), Matrix::Identity(1, 1));
        cg = builders::line(opt.weights, sigs);
    } else {
        throw InvalidParameter("unknown builder: " + opt.builder);
    }
    GraphDocument doc = GraphDocument::from_connection_graph(*cg);
    doc.name = opt.builder;
    if (opt.output.empty()) {
        std::cout << serialize_graph_document(doc);
    } else {
        save_graph_document(doc, opt.output);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
    std::string builder;
    int n = 3;
    int m = 4;
    double theta12 = 0.0;
    double theta23 = 0.0;
    std::vector<int> edge;  // 1-based swept edge
    std::string grid = "0:6.283185307179586:200";
    Pair1Based pair;
    std::vector<std::string> quantities{"scalar-cr", "classical-er"};
    std::string output;
};

struct ThetaGrid {
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
};

ThetaGrid parse_grid(const std::string& text) {
    ThetaGrid g;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> g.start >> c1 >> g.stop >> c2 >> g.steps) || c1 != ':' || c2 != ':')
        throw InvalidParameter("grid must be start:stop:steps");
    if (g.steps < 2) throw InvalidParameter("grid needs at least 2 steps");
    return g;
}

/// Rebuild the builder graph with the swept edge carrying the rotation of
/// the signature dimension (2x2 plane rotation or the 3x3 block rotation).
ConnectionGraph sweep_instance(const SweepOptions& opt, int u0, int v0,
                               double theta) {
    std::optional<ConnectionGraph> base;
    if (opt.builder == "cycle") {
        base = builders::cycle(opt.n, 0.0);
    } else if (opt.builder == "wheatstone") {
        base = builders::wheatstone(0.0);
    } else if (opt.builder == "dumbbell") {
        base = builders::dumbbell(opt.m, opt.theta12, opt.theta23);
    } else {
        throw InvalidParameter("unknown builder: " + opt.builder);
    }
    const int d = base->dim();
    if (!base->graph().has_edge(u0, v0))
        throw InvalidParameter("swept edge is not in the graph");
    const Matrix rot = (d == 2) ? builders::rotation2d(theta)
                                : builders::rotation3d(theta);
    Signature sig(d);
    for (const Edge& e : base->graph().edges()) {
        if ((e.u == u0 && e.v == v0) || (e.u == v0 && e.v == u0))
            sig.set(u0, v0, rot);
        else
            sig.set(e.u, e.v, base->sigma(e.u, e.v));
    }
    return ConnectionGraph(base->graph(), std::move(sig));
}

int run_sweep(const SweepOptions& opt) {
    // default swept edge per builder: the labeled rotation edge
    int eu = 1, ev = 2;
    if (opt.builder == "wheatstone") {
        eu = 2;
        ev = 4;
    }
    if (opt.edge.size() == 2) {
        eu = opt.edge[0];
        ev = opt.edge[1];
    }
    const ThetaGrid grid = parse_grid(opt.grid);

    // probe one instance to validate inputs and fix the dimension
    ConnectionGraph probe = sweep_instance(opt, eu - 1, ev - 1, grid.start);
    const auto [i, j] = to_internal(opt.pair, probe.num_vertices());
    const int d = probe.dim();

    std::vector<std::string> header{"theta"};
    for (const std::string& q : opt.quantities) {
        if (q == "scalar-cr" || q == "chung-cr" || q == "classical-er") {
            std::string col = q;
            std::replace(col.begin(), col.end(), '-', '_');
            header.push_back(col);
        } else if (q == "conductance" || q == "resistance") {
            const char* tag = (q == "conductance") ? "cond" : "res";
            for (const char* blk : {"ii", "ij", "ji", "jj"})
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c) {
                        std::ostringstream os;
                        os << tag << '_' << blk << '_' << r << '_' << c;
                        header.push_back(os.str());
                    }
        } else {
            throw InvalidParameter("unknown sweep quantity: " + q);
        }
    }

    CsvWriter csv(header);
    bool any_failed = false;
    for (int k = 0; k < grid.steps; ++k) {
        const double theta =
            grid.start + (grid.stop - grid.start) * k / (grid.steps - 1);
        std::vector<std::string> row{format_real(theta)};
        ConnectionGraph cg = sweep_instance(opt, eu - 1, ev - 1, theta);
        for (const std::string& q : opt.quantities) {
            try {
                if (q == "scalar-cr") {
                    row.push_back(format_real(scalar_connection_resistance(cg, i, j)));
                } else if (q == "chung-cr") {
                    row.push_back(format_real(chung_connection_resistance(cg, i, j)));
                } else if (q == "classical-er") {
                    row.push_back(
                        format_real(classical_effective_resistance(cg.graph(), i, j)));
                } else {
                    const PairMatrix pm = (q == "conductance")
                                              ? conductance_matrix(cg, i, j)
                                              : resistance_matrix(cg, i, j);
                    for (const Matrix& blk : {pm.ii(), pm.ij(), pm.ji(), pm.jj()})
                        for (int r = 0; r < d; ++r)
                            for (int c = 0; c < d; ++c)
                                row.push_back(format_real(blk(r, c)));
                }
            } catch (const Error& e) {
                any_failed = true;
                row.push_back(std::string("error:") + e.what());
                // pad matrix quantities to the full column count
                if (q == "conductance" || q == "resistance")
                    row.resize(row.size() + 4 * d * d - 1, "error");
            }
        }
        csv.add_row(row);
    }
    if (opt.output.empty()) {
        std::cout << csv.text();
    } else {
        csv.write(opt.output);
    }
    return any_failed ? kExitComputation : 0;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckResult {
    std::string name;
    double residual;
    double tolerance;
    bool pass;
    std::string note;
};

class CheckSuite {
public:
    explicit CheckSuite(double tol) : tol_(tol) {}

    void record(const std::string& name, double residual, double tol,
                const std::string& note = "") {
        results_.push_back({name, residual, tol, residual <= tol, note});
    }
    void record(const std::string& name, double residual,
                const std::string& note = "") {
        record(name, residual, tol_, note);
    }
    void skip(const std::string& name, const std::string& why) {
        results_.push_back({name, 0.0, 0.0, true, "skipped: " + why});
    }

    int report(std::ostream& os) const {
        int failures = 0;
        for (const CheckResult& r : results_) {
            os << (r.pass ? "ok   " : "FAIL ") << r.name;
            if (r.note.rfind("skipped", 0) != 0)
                os << "  residual=" << format_real(r.residual)
                   << " tol=" << format_real(r.tolerance);
            if (!r.note.empty()) os << "  (" << r.note << ")";
            os << "\n";
            if (!r.pass) ++failures;
        }
        os << (failures ? "FAILED " + std::to_string(failures) + " identities\n"
                        : "all identities pass\n");
        return failures;
    }

private:
    double tol_;
    std::vector<CheckResult> results_;
};

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

void run_identity_battery(const ConnectionGraph& cg, int i, int j,
                          std::uint64_t mc_samples, std::uint64_t seed,
                          CheckSuite& suite) {
    const int n = cg.num_vertices();
    const int d = cg.dim();
    const Matrix eye = Matrix::Identity(d, d);
    const PairMatrix c = conductance_matrix(cg, i, j);

    // quotient identity: eliminate the complement in two stages
    if (n >= 3) {
        int k = 0;
        while (k == i || k == j) ++k;
        IndexSet elim_all;
        for (int v = 0; v < n; ++v)
            if (v != i && v != j && v != k) elim_all.push_back(v);
        const Matrix stage1 = linalg::schur_complement(cg.laplacian(), elim_all, d);
        // stage1 is ordered by remaining vertex id; locate k's block
        std::vector<int> remaining{i, j, k};
        std::sort(remaining.begin(), remaining.end());
        int kpos = 0;
        while (remaining[kpos] != k) ++kpos;
        const Matrix stage2 = linalg::schur_complement(stage1, {kpos}, d);
        // stage2 keeps {i,j} sorted; reorder to (i, j)
        Matrix reordered = stage2;
        if (i > j) {
            reordered.topLeftCorner(d, d) = stage2.bottomRightCorner(d, d);
            reordered.bottomRightCorner(d, d) = stage2.topLeftCorner(d, d);
            reordered.topRightCorner(d, d) = stage2.bottomLeftCorner(d, d);
            reordered.bottomLeftCorner(d, d) = stage2.topRightCorner(d, d);
        }
        suite.record("quotient-identity", max_abs_diff(c.full, reordered));
    } else {
        suite.skip("quotient-identity", "graph has no third vertex");
    }

    // omega0 from the conductance blocks
    const Matrix om_ij = omega0(cg, i, j).value;
    const Matrix om_ji = omega0(cg, j, i).value;
    suite.record("lemma-omega0-blocks",
                 max_abs_diff(om_ij, -c.ii().inverse() * c.ij()));

    // Schur complements of the conductance matrix vs mean loop signatures
    const SchurIdentityReport blocks = schur_block_identities(cg, i, j);
    suite.record("conductance-schur-i", blocks.residual_i);
    suite.record("conductance-schur-j", blocks.residual_j);

    // conditioned transpose symmetry
    suite.record("conditioned-transpose",
                 max_abs_diff(omega1_conditioned_escape(cg, i, j).value,
                              omega1_conditioned_escape(cg, j, i).value.transpose()));

    // voltage factorization vs the conditioned-walk solve
    {
        double resid = 0.0;
        const BlockVector v = voltage_function(cg, i, j);
        for (int x = 0; x < n; ++x) {
            if (x == i || x == j) continue;
            const double p = hitting_probability(cg.graph(), x, i, j);
            if (p <= kProbFloor) continue;
            const Matrix doob = omega0_conditioned_via_doob(cg, x, i, j).value;
            resid = std::max(resid, max_abs_diff(v.block(x), p * doob));
        }
        suite.record("voltage-factorization", resid);
    }

    // escape-probability assembly
    suite.record("escape-assembly",
                 max_abs_diff(conductance_via_escape(cg, i, j).full, c.full));

    // resistance matrix against the normalized sources
    {
        Matrix sources(2 * d, 2 * d);
        sources.topLeftCorner(d, d) = eye;
        sources.topRightCorner(d, d) = -om_ji.transpose();
        sources.bottomLeftCorner(d, d) = -om_ij.transpose();
        sources.bottomRightCorner(d, d) = eye;
        const PairMatrix rm = resistance_matrix(cg, i, j);
        suite.record("resistance-sources", max_abs_diff(c.full * rm.full, sources));
        if (nullity(cg) == 0) {
            suite.record(
                "resistance-two-routes",
                max_abs_diff(rm.full, resistance_matrix_via_poisson(cg, i, j).full));
            Matrix blockdiag = Matrix::Zero(2 * d, 2 * d);
            blockdiag.topLeftCorner(d, d) = c.ii().inverse();
            blockdiag.bottomRightCorner(d, d) = c.jj().inverse();
            suite.record("resistance-absolutely-inconsistent",
                         max_abs_diff(rm.full, blockdiag));
        } else {
            suite.skip("resistance-two-routes", "conductance matrix is singular");
            suite.skip("resistance-absolutely-inconsistent",
                       "signature is not absolutely inconsistent");
        }
    }

    // pseudoinverse quadratic forms of the sources
    {
        const Matrix ldag = linalg::pseudoinverse(cg.laplacian());
        auto source_form = [&](int a, int b) {
            Matrix nab = Matrix::Zero(n * d, d);
            nab.block(a * d, 0, d, d) = eye;
            nab.block(b * d, 0, d, d) = -omega0(cg, a, b).value.transpose();
            return Matrix(nab.transpose() * ldag * nab);
        };
        suite.record("source-form-ii",
                     max_abs_diff(source_form(i, j), c.ii().inverse()));
        suite.record("source-form-jj",
                     max_abs_diff(source_form(j, i), c.jj().inverse()));
    }

    // scalar resistance: decomposition formula, energy route, lower bound
    const DecompositionFormulaReport dec = resistance_decomposition_check(cg, i, j);
    suite.record("scalar-decomposition", dec.residual);
    suite.record("scalar-energy-route",
                 std::abs(scalar_connection_resistance(cg, i, j) -
                          scalar_connection_resistance_energy(cg, i, j)),
                 1e-9);
    {
        const double r_classical = classical_effective_resistance(cg.graph(), i, j);
        const double gap = dec.r_scalar - r_classical;
        suite.record("scalar-lower-bound", std::max(0.0, gap), 1e-10,
                     "r^sigma - r = " + format_real(gap));
    }

    // Monte Carlo cross-check
    if (mc_samples > 0) {
        const MeanPathSignature mc =
            mc_mean_path(cg, i, j, 0, std::nullopt, {mc_samples, seed, 0});
        const double dev = max_abs_diff(mc.value, om_ij);
        std::string note = "within 4 standard errors, N=" + std::to_string(mc_samples);
        if (mc.monte_carlo->censored > 0) {
            note += "; WARNING " + std::to_string(mc.monte_carlo->censored) +
                    " censored walks excluded";
        }
        suite.record("mc-omega0", dev, 4.0 * mc.monte_carlo->stderr_max, note);
    }
}

int run_check(const std::string& input, const Pair1Based& pair,
              std::uint64_t mc_samples, std::uint64_t seed, double tolerance) {
    const ConnectionGraph cg = load_graph_document(input).to_connection_graph();
    const auto [i, j] = to_internal(pair, cg.num_vertices());
    CheckSuite suite(tolerance);
    run_identity_battery(cg, i, j, mc_samples, seed, suite);
    const int failures = suite.report(std::cout);
    return failures ? kExitCheckFailure : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"effective conductance and resistance on connection graphs"};
    app.require_subcommand(1);

    // compute
    auto* compute = app.add_subcommand("compute", "evaluate one quantity for a pair");
    std::string in_path, out_path, quantity;
    Pair1Based pair;
    compute->add_option("-i,--input", in_path, "graph document (JSON)")->required();
    compute->add_option("--pair", [&pair](const std::vector<std::string>& vals) {
        pair.i = std::stoi(vals.at(0));
        pair.j = std::stoi(vals.at(1));
        return true;
    }, "vertex pair (1-based)")->expected(2)->required();
    compute->add_option("--quantity", quantity,
                        "classical-er | chung-cr | scalar-cr | conductance | "
                        "resistance | omega0 | omega1-loop | nullity | consistent")
        ->required();
    compute->add_option("-o,--output", out_path, "output file (default stdout)");

    // gen
    auto* gen = app.add_subcommand("gen", "generate a builder graph document");
    GenOptions gopt;
    gen->add_option("builder", gopt.builder, "cycle | wheatstone | dumbbell | line")
        ->required();
    gen->add_option("--n", gopt.n, "cycle length");
    gen->add_option("--m", gopt.m, "dumbbell clique size");
    gen->add_option("--theta", gopt.theta, "rotation angle (cycle, wheatstone)");
    gen->add_option("--theta12", gopt.theta12, "dumbbell edge (1,2) angle");
    gen->add_option("--theta23", gopt.theta23, "dumbbell edge (2,3) angle");
    gen->add_option("--weights", gopt.weights, "line edge weights")->delimiter(',');
    gen->add_option("-o,--output", gopt.output, "output file (default stdout)");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "sweep a rotation angle over a grid");
    SweepOptions sopt;
    sweep->add_option("--builder", sopt.builder, "cycle | wheatstone | dumbbell")
        ->required();
    sweep->add_option("--n", sopt.n, "cycle length");
    sweep->add_option("--m", sopt.m, "dumbbell clique size");
    sweep->add_option("--theta12", sopt.theta12, "dumbbell edge (1,2) base angle");
    sweep->add_option("--theta23", sopt.theta23, "dumbbell edge (2,3) angle");
    sweep->add_option("--edge", sopt.edge, "swept edge (1-based, default per builder)")
        ->expected(2);
    sweep->add_option("--theta-grid", sopt.grid, "start:stop:steps");
    sweep->add_option("--pair", [&sopt](const std::vector<std::string>& vals) {
        sopt.pair.i = std::stoi(vals.at(0));
        sopt.pair.j = std::stoi(vals.at(1));
        return true;
    }, "vertex pair (1-based)")->expected(2)->required();
    sweep->add_option("--quantities", sopt.quantities,
                      "comma list: scalar-cr,chung-cr,classical-er,conductance,resistance")
        ->delimiter(',');
    sweep->add_option("-o,--output", sopt.output, "output CSV (default stdout)");

    // check
    auto* check = app.add_subcommand("check", "run the identity suite");
    std::string check_in;
    Pair1Based check_pair;
    std::uint64_t mc_samples = 0, seed = 0;
    double tolerance = 1e-8;
    check->add_option("-i,--input", check_in, "graph document (JSON)")->required();
    check->add_option("--pair", [&check_pair](const std::vector<std::string>& vals) {
        check_pair.i = std::stoi(vals.at(0));
        check_pair.j = std::stoi(vals.at(1));
        return true;
    }, "vertex pair (1-based)")->expected(2)->required();
    check->add_option("--mc-samples", mc_samples, "Monte Carlo samples (0 = skip)");
    check->add_option("--seed", seed, "Monte Carlo seed");
    check->add_option("--tolerance", tolerance, "default identity tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    try {
        if (*compute) return run_compute(in_path, pair, quantity, out_path);
        if (*gen) return run_gen(gopt);
        if (*sweep) return run_sweep(sopt);
        if (*check) return run_check(check_in, check_pair, mc_samples, seed, tolerance);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        std::cerr << "computation error: " << e.what() << "\n";
        return kExitComputation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return 0;
}
