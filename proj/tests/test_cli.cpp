#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "crested/spec_io.hpp"

// Drives the installed binary end to end: spawns it, captures stdout and the
// exit code, and checks formats, exit codes and determinism.

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(CLI_BINARY) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    RunResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), n);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

int count_lines_with(const std::string& text, const std::string& needle) {
    int count = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.find(needle) != std::string::npos) ++count;
    return count;
}

}  // namespace

TEST_CASE("build: diamond insect emits a symmetric stochastic 8x8 CSV") {
    const auto r = run("build " + fixture("diamond_insect.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.rfind("# crested-markov v", 0) == 0);
    CHECK(r.out.find("hash=") != std::string::npos);
    std::istringstream is(r.out);
    const crested::Matrix m = crested::read_matrix_csv(is);
    REQUIRE(m.rows() == 8);
    REQUIRE(m.cols() == 8);
    for (long i = 0; i < 8; ++i)
        CHECK(m.row(i).sum() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("build: n=1 document reproduces the component matrix at full precision") {
    const auto r = run("build " + fixture("singleton.json"));
    REQUIRE(r.exit_code == 0);
    std::istringstream is(r.out);
    const crested::Matrix m = crested::read_matrix_csv(is);
    REQUIRE(m.rows() == 3);
    CHECK(m(0, 0) == 0.5);
    CHECK(m(1, 1) == 0.45);
    CHECK(m(2, 0) == 0.2);
}

TEST_CASE("build: missing p0 in crested mode is a schema error (exit 2)") {
    const auto r = run("build " + fixture("missing_p0.json"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("CSV round trip preserves every bit") {
    const std::string path = "/tmp/crested_cli_roundtrip.csv";
    const auto r = run("build " + fixture("crested_diamond.json") + " -o " + path);
    REQUIRE(r.exit_code == 0);
    std::ifstream in(path);
    REQUIRE(in.good());
    const crested::Matrix reparsed = crested::read_matrix_csv(in);

    const auto doc = crested::SpecDocument::load(fixture("crested_diamond.json"));
    const crested::Matrix direct = crested::assemble(doc.to_crested_spec()).P;
    REQUIRE(reparsed.rows() == direct.rows());
    CHECK((reparsed - direct).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("spectrum: diamond insect lists 5 eigenspaces with dims 1,1,2,2,2") {
    const auto r = run("spectrum " + fixture("diamond_insect.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines_with(r.out, "S=") == 5);
    CHECK(count_lines_with(r.out, "dim=1") == 2);
    CHECK(count_lines_with(r.out, "dim=2") == 3);
    CHECK(r.out.find("(OK)") != std::string::npos);
}

TEST_CASE("spectrum: singleton lists the component spectrum") {
    const auto r = run("spectrum " + fixture("singleton.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines_with(r.out, "S={}") == 1);
    CHECK(count_lines_with(r.out, "lambda=1 ") == 1);
}

TEST_CASE("spectrum: nonreversible document names the violating component") {
    const auto r = run("spectrum " + fixture("nonreversible.json"));
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("not reversible: component 2") != std::string::npos);
    CHECK(count_lines_with(r.out, "dim=") == 0);
}

TEST_CASE("kstep") {
    SUBCASE("k=0 from a state to itself is 1") {
        const auto r = run("kstep " + fixture("crested_diamond.json") +
                           " --from 0,1,2 --to 0,1,2 --k 0");
        REQUIRE(r.exit_code == 0);
        const auto eq = r.out.rfind("= ");
        REQUIRE(eq != std::string::npos);
        CHECK(std::stod(r.out.substr(eq + 2)) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("k=8 passes the power oracle") {
        const auto r = run("kstep " + fixture("crested_diamond.json") +
                           " --from 0,0,0 --to 1,1,2 --k 8 --verify");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("(OK)") != std::string::npos);
    }
    SUBCASE("k=1 equals the matrix entry") {
        const auto r = run("kstep " + fixture("diamond_insect.json") +
                           " --from 0,0,0 --to 0,1,0 --k 1 --verify");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("(OK)") != std::string::npos);
        // analytic row of the diamond insect: p(000,010) = 5/24
        CHECK(r.out.find("0.2083333333333") != std::string::npos);
    }
}

TEST_CASE("insect report lists levels, coefficients and eigenvalues") {
    const auto r = run("insect " + fixture("diamond_insect.json"));
    REQUIRE(r.exit_code == 0);
    CHECK(count_lines_with(r.out, "level ") == 4);
    CHECK(count_lines_with(r.out, "S=") == 5);
    CHECK(r.out.find("alpha=0.5") != std::string::npos);
    CHECK(r.out.find("alpha=0.33333333333333") != std::string::npos);
}

TEST_CASE("simulate") {
    SUBCASE("deterministic: identical invocations give identical bytes") {
        const auto a = run("simulate " + fixture("diamond_insect.json") +
                           " --trials 20000 --seed 42 --start 0,0,0");
        const auto b = run("simulate " + fixture("diamond_insect.json") +
                           " --trials 20000 --seed 42 --start 0,0,0");
        REQUIRE(a.exit_code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out.find("state,count,frequency") != std::string::npos);
    }
    SUBCASE("zero trials yield an empty histogram and exit 0") {
        const auto r = run("simulate " + fixture("diamond_insect.json") + " --trials 0");
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("state,count,frequency") != std::string::npos);
        std::istringstream is(r.out);
        std::string line;
        int data_lines = 0;
        while (std::getline(is, line))
            if (!line.empty() && line[0] != '#' && line != "state,count,frequency") ++data_lines;
        CHECK(data_lines == 0);
    }
    SUBCASE("frequencies approach the analytic row") {
        const auto r = run("simulate " + fixture("diamond_insect.json") +
                           " --trials 100000 --seed 7 --start 0,0,0");
        REQUIRE(r.exit_code == 0);
        // p(000,000) = 3/8; 3 sigma at 1e5 trials is about 0.0046
        std::istringstream is(r.out);
        std::string line;
        double freq0 = -1.0;
        while (std::getline(is, line))
            if (line.rfind("0-0-0,", 0) == 0)
                freq0 = std::stod(line.substr(line.rfind(',') + 1));
        REQUIRE(freq0 >= 0.0);
        CHECK(std::abs(freq0 - 0.375) < 0.005);
    }
}

TEST_CASE("verify") {
    SUBCASE("diamond insect passes the full battery") {
        const auto r = run("verify " + fixture("diamond_insect.json"));
        REQUIRE(r.exit_code == 0);
        CHECK(count_lines_with(r.out, "[PASS]") >= 10);
        CHECK(count_lines_with(r.out, "[FAIL]") == 0);
        CHECK(r.out.find("verdict: PASS") != std::string::npos);
    }
    SUBCASE("tampered matrix fails naming the row") {
        const auto r = run("verify " + fixture("tampered.json"));
        CHECK(r.exit_code == 3);
        CHECK(r.out.find("[FAIL] component 2: row 1") != std::string::npos);
        CHECK(r.out.find("verdict: FAIL") != std::string::npos);
    }
    SUBCASE("first-crested-eligible poset reports the partition") {
        const auto r = run("verify " + fixture("first_crested.json"));
        REQUIRE(r.exit_code == 0);
        CHECK(r.out.find("first crested reduction: C={3} N={1,2}") != std::string::npos);
    }
}

TEST_CASE("unknown files and malformed documents") {
    CHECK(run("build /nonexistent.json").exit_code == 2);
    const std::string bad = "/tmp/crested_cli_bad.json";
    std::ofstream(bad) << "{ not json";
    CHECK(run("build " + bad).exit_code == 2);
    std::remove(bad.c_str());
}

TEST_CASE("documents over the dense cap exit 4") {
    CHECK(run("build " + fixture("size_cap.json")).exit_code == 4);
}
