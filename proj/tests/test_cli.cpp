#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fairsched/cli.hpp"
#include "fairsched/errors.hpp"

using namespace fairsched;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

/// Writes a file and removes it when the test block ends.
struct TempFile {
    std::string path;
    TempFile(std::string name, const std::string& content) : path(std::move(name)) {
        std::ofstream f(path);
        f << content;
    }
    explicit TempFile(std::string name) : path(std::move(name)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

const std::string kPairTrace = "id,release,size,estimate,weight\n0,0,4,4,1\n1,1,1,1,1\n";

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("run emits per-job rows and a summary") {
    TempFile trace("cli_pair.csv", kPairTrace);
    const CliResult ps = cli({"run", trace.path, "--policy", "ps"});
    REQUIRE(ps.code == 0);
    const auto lines = lines_of(ps.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "id,release,size,estimate,weight,completion,sojourn");
    CHECK(lines[1] == "0,0,4,4,1,5,5");
    CHECK(lines[2] == "1,1,1,1,1,3,2");
    CHECK(lines[3] == "# mst=3.5 makespan=5");

    const CliResult fsp = cli({"run", trace.path, "--policy", "fsp"});
    REQUIRE(fsp.code == 0);
    CHECK(lines_of(fsp.out)[2] == "1,1,1,1,1,2,1");
}

TEST_CASE("unknown policy exits 2 and lists the registered names") {
    TempFile trace("cli_pair2.csv", kPairTrace);
    const CliResult r = cli({"run", trace.path, "--policy", "nosuch"});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown policy") != std::string::npos);
    CHECK(r.err.find("psbs") != std::string::npos);
    CHECK(r.err.find("srpte") != std::string::npos);
}

TEST_CASE("missing and malformed traces exit 3") {
    CHECK(cli({"run", "does_not_exist.csv", "--policy", "ps"}).code == 3);
    TempFile bad("cli_bad.csv", "id,release\n0,0\n");
    const CliResult r = cli({"run", bad.path, "--policy", "ps"});
    CHECK(r.code == 3);
    CHECK(r.err.find("line 1") != std::string::npos);
}

TEST_CASE("usage errors exit 2 and help exits 0") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"run"}).code == 2); // missing required trace/policy
    const CliResult help = cli({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("generate") != std::string::npos);
    CHECK(help.out.find("sweep") != std::string::npos);
}

TEST_CASE("generate is byte-deterministic and round-trips") {
    const std::vector<std::string> args{"generate", "--n-jobs", "5", "--seed", "9",
                                        "--sigma",  "0.5"};
    const CliResult a = cli(args);
    const CliResult b = cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(lines_of(a.out).size() == 6); // header + 5 jobs

    const CliResult one = cli({"generate", "--n-jobs", "1"});
    CHECK(lines_of(one.out).size() == 2);

    TempFile trace("cli_gen.csv");
    CHECK(cli({"generate", "--n-jobs", "5", "--seed", "9", "--out", trace.path}).code == 0);
    const CliResult run_res = cli({"run", trace.path, "--policy", "srpt"});
    CHECK(run_res.code == 0);
    CHECK(lines_of(run_res.out).size() == 7);
}

TEST_CASE("generate rejects bad parameters with exit 2") {
    CHECK(cli({"generate", "--load", "1.5"}).code == 2);
    CHECK(cli({"generate", "--shape", "-1"}).code == 2);
    CHECK(cli({"generate", "--weights", "junk"}).code == 2);
}

TEST_CASE("run accepts a key=value config file") {
    TempFile trace("cli_pair3.csv", kPairTrace);
    TempFile cfg("cli_run.cfg", "policy=fsp\n");
    const CliResult r = cli({"run", trace.path, "--config", cfg.path});
    REQUIRE(r.code == 0);
    CHECK(lines_of(r.out)[2] == "1,1,1,1,1,2,1");
}

TEST_CASE("run writes an event log on request") {
    TempFile trace("cli_pair4.csv", kPairTrace);
    TempFile log("cli_events.csv");
    const CliResult r =
        cli({"run", trace.path, "--policy", "ps", "--log-events", log.path});
    REQUIRE(r.code == 0);
    std::ifstream in(log.path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "time,kind,job_id");
    std::size_t arrivals = 0, completions = 0;
    while (std::getline(in, line)) {
        if (line.find("arrival") != std::string::npos) ++arrivals;
        if (line.find("completion") != std::string::npos) ++completions;
    }
    CHECK(arrivals == 2);
    CHECK(completions == 2);
}

TEST_CASE("compare prints a dominance verdict") {
    TempFile trace("cli_pair5.csv", kPairTrace);
    const CliResult yes = cli({"compare", trace.path, "fsp", "ps"});
    REQUIRE(yes.code == 0);
    CHECK(yes.out.find("dominates: yes, 0 violations") != std::string::npos);

    const CliResult no = cli({"compare", trace.path, "ps", "fsp"});
    REQUIRE(no.code == 0);
    CHECK(no.out.find("dominates: no, 1 violations") != std::string::npos);
    CHECK(no.out.find("job 1:") != std::string::npos);

    const CliResult same = cli({"compare", trace.path, "ps", "ps"});
    CHECK(same.out.find("dominates: yes, 0 violations") != std::string::npos);
}

TEST_CASE("sweep subcommand emits the grid csv deterministically") {
    const std::vector<std::string> args{"sweep",      "--shapes", "1",  "--sigmas", "0,0.5",
                                        "--reps",     "2",        "--n-jobs", "40",
                                        "--policies", "ps,fsp",   "--seed",   "5"};
    const CliResult a = cli(args);
    REQUIRE(a.code == 0);
    const auto lines = lines_of(a.out);
    REQUIRE(lines.size() == 1 + 2 * 2 * 2);
    CHECK(lines[0] == "shape,sigma,seed,policy,mst,mst_norm_ps");

    std::vector<std::string> threaded = args;
    threaded.push_back("--threads");
    threaded.push_back("3");
    const CliResult b = cli(threaded);
    CHECK(a.out == b.out);
}

TEST_CASE("weight models parse or reject") {
    CHECK(parse_weights("uniform").is_uniform());
    const WeightModel m = parse_weights("1:0.5,2:0.5");
    REQUIRE(m.values.size() == 2);
    CHECK(m.values[1] == 2.0);
    CHECK(m.probs[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(parse_weights("1"), ParamError);
    CHECK_THROWS_AS(parse_weights("x:1"), ParamError);
    CHECK_THROWS_AS(parse_weights("1:-2"), ParamError);
    CHECK_THROWS_AS(parse_weights("1:0.5,,2:0.5"), ParamError);
}

TEST_CASE("output files are written when requested") {
    TempFile trace("cli_pair6.csv", kPairTrace);
    TempFile out("cli_out.csv");
    const CliResult r = cli({"run", trace.path, "--policy", "ps", "--out", out.path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out.path);
    std::string first;
    std::getline(in, first);
    CHECK(first == "id,release,size,estimate,weight,completion,sojourn");

    CHECK(cli({"run", trace.path, "--policy", "ps", "--out", "no_dir/x.csv"}).code == 3);
}
