// End-to-end tests driving the installed CLI binary through std::system.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef CONRES_CLI_PATH
#error "CONRES_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string out_file = "/tmp/conres_cli_test_out.txt";
    const std::string cmd =
        std::string(CONRES_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return {WEXITSTATUS(status), buf.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("gen then compute round trip") {
    REQUIRE(run_cli("gen cycle --n 3 --theta 0 -o /tmp/cli_c3.json").exit_code == 0);

    SUBCASE("classical effective resistance of the unit 3-cycle") {
        const RunResult r =
            run_cli("compute -i /tmp/cli_c3.json --pair 1 2 --quantity classical-er");
        CHECK(r.exit_code == 0);
        CHECK(std::stod(r.stdout_text) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("edge resistance on the quarter-turn signature") {
        REQUIRE(run_cli("gen cycle --n 3 --theta 1.5707963267948966 -o /tmp/cli_c3q.json")
                    .exit_code == 0);
        const RunResult r =
            run_cli("compute -i /tmp/cli_c3q.json --pair 1 2 --quantity chung-cr");
        CHECK(r.exit_code == 0);
        CHECK(std::stod(r.stdout_text) == doctest::Approx(5.0).epsilon(1e-9));
    }
    SUBCASE("scalar resistance ignores the rotation") {
        REQUIRE(run_cli("gen cycle --n 3 --theta 2.2 -o /tmp/cli_c3r.json").exit_code == 0);
        const RunResult r =
            run_cli("compute -i /tmp/cli_c3r.json --pair 1 2 --quantity scalar-cr");
        CHECK(r.exit_code == 0);
        CHECK(std::stod(r.stdout_text) == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    }
    SUBCASE("matrix output carries labeled blocks") {
        const RunResult r =
            run_cli("compute -i /tmp/cli_c3.json --pair 1 2 --quantity conductance");
        CHECK(r.exit_code == 0);
        CHECK(r.stdout_text.rfind("block,row", 0) == 0);
        CHECK(r.stdout_text.find("\nii,0,") != std::string::npos);
        CHECK(r.stdout_text.find("\njj,1,") != std::string::npos);
    }
}

TEST_CASE("gen output is byte-stable under reserialization") {
    REQUIRE(run_cli("gen wheatstone --theta 0.75 -o /tmp/cli_w1.json").exit_code == 0);
    REQUIRE(run_cli("gen wheatstone --theta 0.75 -o /tmp/cli_w2.json").exit_code == 0);
    CHECK(slurp("/tmp/cli_w1.json") == slurp("/tmp/cli_w2.json"));
    CHECK_FALSE(slurp("/tmp/cli_w1.json").empty());
}

TEST_CASE("gen wheatstone at zero rotation is consistent") {
    REQUIRE(run_cli("gen wheatstone --theta 0 -o /tmp/cli_wc.json").exit_code == 0);
    const RunResult r =
        run_cli("compute -i /tmp/cli_wc.json --pair 1 2 --quantity consistent");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text == "true\n");
}

TEST_CASE("gen dumbbell produces a valid 3-dimensional document") {
    REQUIRE(run_cli("gen dumbbell --m 4 --theta12 0.7 --theta23 1.5707963267948966 "
                    "-o /tmp/cli_db.json")
                .exit_code == 0);
    const RunResult r =
        run_cli("compute -i /tmp/cli_db.json --pair 1 3 --quantity nullity");
    CHECK(r.exit_code == 0);
    CHECK(std::stoi(r.stdout_text) == 3);
}

TEST_CASE("check subcommand") {
    SUBCASE("clean document passes") {
        REQUIRE(run_cli("gen cycle --n 5 --theta 1.0 -o /tmp/cli_c5.json").exit_code == 0);
        const RunResult r = run_cli("check -i /tmp/cli_c5.json --pair 1 3");
        CHECK(r.exit_code == 0);
        CHECK(r.stdout_text.find("all identities pass") != std::string::npos);
    }
    SUBCASE("consistent document passes trivially") {
        REQUIRE(run_cli("gen wheatstone --theta 0 -o /tmp/cli_w0.json").exit_code == 0);
        CHECK(run_cli("check -i /tmp/cli_w0.json --pair 1 4").exit_code == 0);
    }
}

TEST_CASE("exit codes") {
    SUBCASE("parse error on malformed JSON") {
        std::ofstream("/tmp/cli_bad.json") << "{broken";
        CHECK(run_cli("compute -i /tmp/cli_bad.json --pair 1 2 --quantity scalar-cr")
                  .exit_code == 2);
    }
    SUBCASE("validation error on a corrupted signature") {
        std::ofstream("/tmp/cli_nonorth.json") << R"({
            "format": "conres/1", "n": 2, "d": 1,
            "edges": [{"u": 1, "v": 2, "w": 1.0, "sigma": [[0.5]]}]
        })";
        CHECK(run_cli("compute -i /tmp/cli_nonorth.json --pair 1 2 --quantity scalar-cr")
                  .exit_code == 3);
    }
    SUBCASE("validation error on an out-of-range pair") {
        CHECK(run_cli("compute -i /tmp/cli_c3.json --pair 1 9 --quantity scalar-cr")
                  .exit_code == 3);
        CHECK(run_cli("compute -i /tmp/cli_c3.json --pair 0 2 --quantity scalar-cr")
                  .exit_code == 3);
        CHECK(run_cli("compute -i /tmp/cli_c3.json --pair 2 2 --quantity scalar-cr")
                  .exit_code == 3);
    }
    SUBCASE("validation error on bad builder parameters") {
        CHECK(run_cli("gen cycle --n 2 -o /tmp/cli_never.json").exit_code == 3);
    }
    SUBCASE("computation error on an inconsistent non-edge") {
        REQUIRE(run_cli("gen cycle --n 5 --theta 1.0 -o /tmp/cli_c5b.json").exit_code == 0);
        // vertices 1 and 3 are not adjacent and the signature is inconsistent
        CHECK(run_cli("compute -i /tmp/cli_c5b.json --pair 1 3 --quantity chung-cr")
                  .exit_code == 3);
    }
}

TEST_CASE("sweep") {
    SUBCASE("deterministic CSV with the requested grid") {
        const std::string args =
            "sweep --builder wheatstone --pair 2 4 --theta-grid 0:6.283185307179586:25 "
            "--quantities scalar-cr,classical-er,chung-cr -o ";
        REQUIRE(run_cli(args + "/tmp/cli_sweep1.csv").exit_code == 0);
        REQUIRE(run_cli(args + "/tmp/cli_sweep2.csv").exit_code == 0);
        const std::string csv = slurp("/tmp/cli_sweep1.csv");
        CHECK(csv == slurp("/tmp/cli_sweep2.csv"));
        CHECK(csv.rfind("theta,scalar_cr,classical_er,chung_cr\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);  // header + 25 rows
    }
    SUBCASE("failing grid points are annotated and the run continues") {
        // pair (1,4) is not an edge, so chung-cr fails off the consistent
        // points while the other columns keep evaluating
        const RunResult r = run_cli(
            "sweep --builder wheatstone --pair 1 4 --theta-grid 0:6.283185307179586:9 "
            "--quantities scalar-cr,chung-cr -o /tmp/cli_sweep_err.csv");
        CHECK(r.exit_code == 4);
        const std::string csv = slurp("/tmp/cli_sweep_err.csv");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);  // full grid kept
        CHECK(csv.find("error:") != std::string::npos);
    }
    SUBCASE("edge-based resistance shows its discontinuity at zero rotation") {
        REQUIRE(run_cli("sweep --builder wheatstone --pair 2 4 "
                        "--theta-grid 0:6.283185307179586:9 "
                        "--quantities chung-cr,classical-er -o /tmp/cli_sweep_cc.csv")
                    .exit_code == 0);
        std::ifstream in("/tmp/cli_sweep_cc.csv");
        std::string line;
        std::getline(in, line);
        std::vector<double> chung, classical;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string theta, cc, ce;
            std::getline(ls, theta, ',');
            std::getline(ls, cc, ',');
            std::getline(ls, ce, ',');
            chung.push_back(std::stod(cc));
            classical.push_back(std::stod(ce));
        }
        REQUIRE(chung.size() == 9);
        // consistent endpoints collapse to the classical value, interior
        // grid points jump away from it
        CHECK(std::abs(chung.front() - classical.front()) < 1e-9);
        CHECK(std::abs(chung.back() - classical.back()) < 1e-9);
        CHECK(chung[1] - chung[0] > 1.0);
        CHECK(chung[7] - chung[8] > 1.0);
    }
    SUBCASE("scalar resistance never exceeds the classical value") {
        REQUIRE(run_cli("sweep --builder wheatstone --pair 1 4 "
                        "--theta-grid 0:6.283185307179586:40 "
                        "--quantities scalar-cr,classical-er -o /tmp/cli_sweep3.csv")
                    .exit_code == 0);
        std::ifstream in("/tmp/cli_sweep3.csv");
        std::string line;
        std::getline(in, line);  // header
        int rows = 0;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            std::string theta, scr, cer;
            std::getline(ls, theta, ',');
            std::getline(ls, scr, ',');
            std::getline(ls, cer, ',');
            CHECK(std::stod(scr) <= std::stod(cer) + 1e-10);
            ++rows;
        }
        CHECK(rows == 40);
    }
}
