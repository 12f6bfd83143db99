#include <doctest.h>

#include "conres/builders.hpp"
#include "conres/conductance.hpp"
#include "conres/dirichlet.hpp"
#include "conres/linalg.hpp"
#include "test_support.hpp"

using namespace conres;
using namespace conres::test;

TEST_CASE("conductance matrix") {
    Rng rng(101);

    SUBCASE("classical 3-cycle") {
        WeightedGraph g = build_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
        ConnectionGraph cg(g, identity_signature(g, 1));
        Matrix expect(2, 2);
        expect << 1.5, -1.5, -1.5, 1.5;
        CHECK(max_abs(conductance_matrix(cg, 0, 1).full - expect) < 1e-12);
    }
    SUBCASE("rotated 3-cycle blocks") {
        const double theta = 1.1;
        ConnectionGraph cg = builders::cycle(3, theta);
        const PairMatrix c = conductance_matrix(cg, 0, 1);
        const Matrix r = builders::rotation2d(theta);
        const Matrix i2 = Matrix::Identity(2, 2);
        CHECK(max_abs(c.ii() - 1.5 * i2) < 1e-12);
        CHECK(max_abs(c.jj() - 1.5 * i2) < 1e-12);
        CHECK(max_abs(c.ij() + (r + 0.5 * i2)) < 1e-12);
        CHECK(max_abs(c.ji() + (r.transpose() + 0.5 * i2)) < 1e-12);
    }
    SUBCASE("two-vertex line is its own conductance") {
        Rng local(3);
        const Matrix s = random_orthogonal(3, local);
        ConnectionGraph cg = builders::line({2.5}, {s});
        const PairMatrix c = conductance_matrix(cg, 0, 1);
        CHECK(max_abs(c.ii() - 2.5 * Matrix::Identity(3, 3)) == 0.0);
        CHECK(max_abs(c.ij() + 2.5 * s) == 0.0);
    }
    SUBCASE("pair order is respected") {
        ConnectionGraph cg = builders::cycle(4, 0.7);
        const PairMatrix a = conductance_matrix(cg, 0, 2);
        const PairMatrix b = conductance_matrix(cg, 2, 0);
        CHECK(max_abs(a.ij() - b.ji()) == 0.0);
        CHECK(max_abs(a.ii() - b.jj()) == 0.0);
    }
    SUBCASE("PSD with strictly positive diagonal blocks") {
        for (int trial = 0; trial < 8; ++trial) {
            ConnectionGraph cg = random_connection_graph(7, 2, 5, rng);
            const PairMatrix c = conductance_matrix(cg, 1, 5);
            CHECK(sorted_eigenvalues(c.full).minCoeff() > -1e-10);
            const double cij =
                classical_effective_conductance(cg.graph(), 1, 5);
            CHECK(sorted_eigenvalues(c.ii()).minCoeff() >= cij - 1e-9);
            CHECK(sorted_eigenvalues(c.jj()).minCoeff() >= cij - 1e-9);
        }
    }
    SUBCASE("classical reduction to c [[1,-1],[-1,1]]") {
        for (int trial = 0; trial < 5; ++trial) {
            WeightedGraph g = random_connected_graph(7, 4, rng);
            ConnectionGraph cg(g, identity_signature(g, 1));
            const PairMatrix c = conductance_matrix(cg, 0, 6);
            const double cij = classical_effective_conductance(g, 0, 6);
            Matrix expect(2, 2);
            expect << cij, -cij, -cij, cij;
            CHECK(max_abs(c.full - expect) < 1e-10);
        }
    }
    SUBCASE("same pair is rejected") {
        ConnectionGraph cg = builders::cycle(3, 0.5);
        CHECK_THROWS_AS(conductance_matrix(cg, 1, 1), SamePair);
    }
}

TEST_CASE("current balance of the voltage function") {
    Rng rng(103);
    ConnectionGraph cg = random_connection_graph(7, 3, 5, rng);
    const BlockVector v = voltage_function(cg, 0, 6);
    const BlockVector lv = apply_laplacian(cg, v);
    for (int k = 1; k < 6; ++k) CHECK(max_abs(lv.block(k)) < 1e-9);
    // the boundary rows reproduce the first conductance column
    const PairMatrix c = conductance_matrix(cg, 0, 6);
    CHECK(max_abs(lv.block(0) - c.ii()) < 1e-9);
    CHECK(max_abs(lv.block(6) - c.ji()) < 1e-9);
}

TEST_CASE("escape probability assembly") {
    Rng rng(107);

    SUBCASE("consistent signatures") {
        ConnectionGraph cg = consistent_connection_graph(6, 2, 4, rng);
        const Matrix a = conductance_matrix(cg, 0, 4).full;
        const Matrix b = conductance_via_escape(cg, 0, 4).full;
        CHECK(max_abs(a - b) < 1e-8);
    }
    SUBCASE("cycle diagonals are scalar") {
        ConnectionGraph cg = builders::cycle(5, 2.2);
        const PairMatrix c = conductance_via_escape(cg, 0, 2);
        const double cij = classical_effective_conductance(cg.graph(), 0, 2);
        CHECK(max_abs(c.ii() - cij * Matrix::Identity(2, 2)) < 1e-9);
        CHECK(max_abs(c.jj() - cij * Matrix::Identity(2, 2)) < 1e-9);
    }
    SUBCASE("random instances match the Schur route") {
        for (int trial = 0; trial < 10; ++trial) {
            std::uniform_int_distribution<int> nd(4, 6);
            ConnectionGraph cg = random_connection_graph(nd(rng), 2, 3, rng);
            const int j = cg.num_vertices() - 1;
            const Matrix a = conductance_matrix(cg, 0, j).full;
            const Matrix b = conductance_via_escape(cg, 0, j).full;
            CHECK(max_abs(a - b) < 1e-8);
        }
    }
    SUBCASE("two-vertex line works despite the empty loop term") {
        Rng local(9);
        const Matrix s = random_orthogonal(2, local);
        ConnectionGraph cg = builders::line({1.7}, {s});
        const Matrix a = conductance_matrix(cg, 0, 1).full;
        const Matrix b = conductance_via_escape(cg, 0, 1).full;
        CHECK(max_abs(a - b) < 1e-10);
    }
}

TEST_CASE("series law") {
    Rng rng(109);
    for (int trial = 0; trial < 6; ++trial) {
        std::uniform_int_distribution<int> len(1, 5), dd(1, 3);
        std::uniform_real_distribution<double> wd(0.5, 2.0);
        const int k = len(rng), d = dd(rng);
        std::vector<double> ws;
        std::vector<Matrix> sigs;
        double harmonic = 0.0;
        Matrix prod = Matrix::Identity(d, d);
        for (int e = 0; e < k; ++e) {
            ws.push_back(wd(rng));
            sigs.push_back(random_orthogonal(d, rng));
            harmonic += 1.0 / ws.back();
            prod = prod * sigs.back();
        }
        ConnectionGraph cg = builders::line(ws, sigs);
        const PairMatrix c = conductance_matrix(cg, 0, k);
        const double ctot = 1.0 / harmonic;
        CHECK(max_abs(c.ii() - ctot * Matrix::Identity(d, d)) < 1e-9);
        CHECK(max_abs(c.ij() + ctot * prod) < 1e-9);
        CHECK(max_abs(c.ji() + ctot * prod.transpose()) < 1e-9);
    }
}

TEST_CASE("parallel law") {
    Rng rng(113);

    SUBCASE("a single line is its own combination") {
        Rng local(1);
        ConnectionGraph line = builders::line(
            {1.0, 2.0}, {random_orthogonal(2, local), random_orthogonal(2, local)});
        const Matrix a = parallel_sum({line}).full;
        const Matrix b = conductance_matrix(line, 0, 2).full;
        CHECK(max_abs(a - b) == 0.0);
    }
    SUBCASE("branches sum to the glued conductance") {
        for (int trial = 0; trial < 6; ++trial) {
            std::uniform_int_distribution<int> md(2, 4), len(1, 4), dd(1, 3);
            std::uniform_real_distribution<double> wd(0.5, 2.0);
            const int m = md(rng), d = dd(rng);
            std::vector<builders::LineSpec> specs;
            std::vector<ConnectionGraph> lines;
            bool used_single = false;
            for (int l = 0; l < m; ++l) {
                int k = len(rng);
                if (k == 1) {
                    if (used_single) k = 2;
                    else used_single = true;
                }
                builders::LineSpec spec;
                for (int e = 0; e < k; ++e) {
                    spec.weights.push_back(wd(rng));
                    spec.signatures.push_back(random_orthogonal(d, rng));
                }
                lines.push_back(builders::line(spec.weights, spec.signatures));
                specs.push_back(std::move(spec));
            }
            const ConnectionGraph glued = builders::parallel_lines(specs);
            const Matrix sum = parallel_sum(lines).full;
            const Matrix direct = conductance_matrix(glued, 0, 1).full;
            CHECK(max_abs(sum - direct) < 1e-9);
        }
    }
    SUBCASE("non-path branches are rejected") {
        ConnectionGraph tri = builders::cycle(3, 0.4);
        CHECK_THROWS_AS(parallel_sum({tri}), NotInternallyDisjoint);
    }
}

TEST_CASE("Schur block identities") {
    Rng rng(127);

    SUBCASE("consistent graphs") {
        ConnectionGraph cg = consistent_connection_graph(6, 2, 4, rng);
        CHECK(schur_block_identities(cg, 0, 3).pass());
    }
    SUBCASE("cycle with a non-adjacent pair") {
        ConnectionGraph cg = builders::cycle(4, 0.9);
        CHECK(schur_block_identities(cg, 0, 2).pass());
    }
    SUBCASE("random instances") {
        for (int trial = 0; trial < 8; ++trial) {
            ConnectionGraph cg = random_connection_graph(7, 3, 5, rng);
            CHECK(schur_block_identities(cg, 1, 6).pass());
        }
    }
}

TEST_CASE("conductance under switching and direct sum") {
    Rng rng(131);

    SUBCASE("switching equivariance") {
        ConnectionGraph cg = random_connection_graph(6, 3, 4, rng);
        std::vector<Matrix> f;
        for (int v = 0; v < 6; ++v) f.push_back(random_orthogonal(3, rng));
        ConnectionGraph tau = apply_switching(cg, f);
        const int i = 1, j = 4, d = 3;
        Matrix fij = Matrix::Zero(2 * d, 2 * d);
        fij.topLeftCorner(d, d) = f[i];
        fij.bottomRightCorner(d, d) = f[j];
        const Matrix lhs = fij * conductance_matrix(cg, i, j).full;
        const Matrix rhs = conductance_matrix(tau, i, j).full * fij;
        CHECK(max_abs(lhs - rhs) < 1e-9);
    }
    SUBCASE("direct sum similarity via the canonical permutation") {
        WeightedGraph g = random_connected_graph(6, 4, rng);
        Signature a(1), b(2);
        for (const Edge& e : g.edges()) {
            Matrix s(1, 1);
            s << ((e.u + e.v) % 2 ? -1.0 : 1.0);
            a.set(e.u, e.v, s);
            b.set(e.u, e.v, random_orthogonal(2, rng));
        }
        ConnectionGraph cga(g, a), cgb(g, b), cgab(g, direct_sum(a, b));
        const int i = 0, j = 5, d1 = 1, d2 = 2, D = d1 + d2;
        const Matrix ca = conductance_matrix(cga, i, j).full;
        const Matrix cb = conductance_matrix(cgb, i, j).full;
        const Matrix cab = conductance_matrix(cgab, i, j).full;
        // permute [i-dims | j-dims] into sigma and tau parts
        Eigen::VectorXi p(2 * D);
        for (int slot = 0; slot < 2; ++slot)
            for (int k = 0; k < D; ++k)
                p(slot * D + k) =
                    (k < d1) ? slot * d1 + k : 2 * d1 + slot * d2 + (k - d1);
        Matrix blk = Matrix::Zero(2 * D, 2 * D);
        blk.topLeftCorner(2 * d1, 2 * d1) = ca;
        blk.bottomRightCorner(2 * d2, 2 * d2) = cb;
        double dev = 0.0;
        for (int r = 0; r < 2 * D; ++r)
            for (int c = 0; c < 2 * D; ++c)
                dev = std::max(dev, std::abs(cab(r, c) - blk(p(r), p(c))));
        CHECK(dev < 1e-10);
    }
}

TEST_CASE("conductance is continuous in the signature") {
    // finite-difference sweep over one edge rotation
    const int steps = 60;
    const double h = 2 * M_PI / steps;
    double max_jump = 0.0, max_norm = 0.0;
    Matrix prev;
    for (int k = 0; k <= steps; ++k) {
        ConnectionGraph cg = builders::wheatstone(k * h);
        const Matrix c = conductance_matrix(cg, 0, 3).full;
        if (k > 0) max_jump = std::max(max_jump, max_abs(c - prev));
        max_norm = std::max(max_norm, max_abs(c));
        prev = c;
    }
    // Lipschitz-style bound: jumps vanish with the step size
    CHECK(max_jump < 2.0 * h * max_norm);
}
