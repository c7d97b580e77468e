#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "test_support.hpp"

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run(std::string const& args) {
    std::string command = std::string("\"") + THREADRANK_CLI_PATH + "\" " + args + " 2>/dev/null";
    Result result;
    FILE* pipe = ::popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), n);
    int status = ::pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(std::filesystem::path const& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(std::filesystem::path const& path, std::string const& text) {
    std::ofstream(path, std::ios::binary) << text;
}

std::string q(std::filesystem::path const& p) {
    return "\"" + p.string() + "\"";
}

// Run records without comments, with the tag column dropped.
std::vector<std::string> records_without_tag(std::string const& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(line.substr(0, line.rfind(' ')));
    }
    return out;
}

// A small synthetic collection and its index, shared by the tests below.
struct Workspace {
    test_support::TempDir dir;
    Workspace() {
        REQUIRE(run("synth --seed 5 --threads 40 --queries 6 --out " + q(dir / "data")).code == 0);
        REQUIRE(run("index --corpus " + q(dir / "data/corpus.jsonl") + " --out " + q(dir / "index") + " --virtual-docs")
                    .code
                == 0);
    }
    std::string index() const { return q(dir / "index"); }
    std::string queries() const { return q(dir / "data/queries.tsv"); }
    std::string qrels() const { return q(dir / "data/qrels.txt"); }
};

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("search --index x").code == 1);
    CHECK(run("--help").code == 0);
    CHECK(run("--version").out.find('.') != std::string::npos);

    Workspace ws;
    auto base = "search --index " + ws.index() + " --queries " + ws.queries() + " --mu 1000 --pool 100 --out -";
    CHECK(run(base + " --method combfoo --k 2").code == 1);
    CHECK(run(base + " --method combsum --k 0").code == 1);
    CHECK(run(base + " --method combsum --k lots").code == 1);
    CHECK(run("search --index " + ws.index() + " --queries " + ws.queries()
              + " --method combsum --k 2 --mu 0 --pool 100 --out -")
              .code
          == 1);
}

TEST_CASE("data errors exit with 2") {
    test_support::TempDir dir;
    CHECK(run("index --corpus " + q(dir / "missing.jsonl") + " --out " + q(dir / "idx")).code == 2);
    spit(dir / "bad.jsonl", "{\"thread_id\": \"t\", \"message_id\": \"m\"}\n");
    CHECK(run("index --corpus " + q(dir / "bad.jsonl") + " --out " + q(dir / "idx")).code == 2);
    spit(dir / "queries.tsv", "q1\tapple\n");
    CHECK(run("search --index " + q(dir / "nowhere") + " --queries " + q(dir / "queries.tsv")
              + " --method combsum --k 2 --mu 1000 --pool 10 --out -")
              .code
          == 2);
}

TEST_CASE("eval reports the expected MAP") {
    test_support::TempDir dir;
    spit(dir / "run.txt", "q1 Q0 T3 1 3.0 x\nq1 Q0 T1 2 2.0 x\nq1 Q0 T2 3 1.0 x\n");
    spit(dir / "qrels.txt", "q1 0 T1 1\nq1 0 T2 2\nq1 0 T3 0\n");
    auto result = run("eval --run " + q(dir / "run.txt") + " --qrels " + q(dir / "qrels.txt"));
    CHECK(result.code == 0);
    CHECK(result.out.find("all\tmap\t0.583333") != std::string::npos);
    CHECK(result.out.find("all\tp10\t0.200000") != std::string::npos);
    CHECK(result.out.find("all\tndcg10\t0.693426") != std::string::npos);
    CHECK(result.out.rfind("# threadrank ", 0) == 0);

    CHECK(run("eval --run " + q(dir / "run.txt") + " --qrels " + q(dir / "qrels.txt") + " --out " + q(dir / "r.tsv"))
              .code
          == 0);
    CHECK(slurp(dir / "r.tsv") == result.out);
}

TEST_CASE("combsum with k = 1 produces the combmax run") {
    Workspace ws;
    auto base = "search --index " + ws.index() + " --queries " + ws.queries() + " --mu 1000 --pool 500 --out -";
    auto sum = run(base + " --method combsum --k 1");
    auto max = run(base + " --method combmax --k unlimited");
    REQUIRE(sum.code == 0);
    REQUIRE(max.code == 0);
    CHECK(!records_without_tag(sum.out).empty());
    CHECK(records_without_tag(sum.out) == records_without_tag(max.out));
    CHECK(sum.out.find(" combsum_k1\n") != std::string::npos);
}

TEST_CASE("repeated invocations are byte-identical") {
    Workspace ws;
    auto search = "search --index " + ws.index() + " --queries " + ws.queries()
                  + " --method expcombmnz --k 3 --mu 1500 --pool 300 --out ";
    REQUIRE(run(search + q(ws.dir / "a.txt")).code == 0);
    REQUIRE(run(search + q(ws.dir / "b.txt")).code == 0);
    CHECK(slurp(ws.dir / "a.txt") == slurp(ws.dir / "b.txt"));

    test_support::TempDir other;
    REQUIRE(run("synth --seed 5 --threads 40 --queries 6 --out " + q(other.path())).code == 0);
    for (auto name : {"corpus.jsonl", "queries.tsv", "qrels.txt"}) {
        CHECK(slurp(other / name) == slurp(ws.dir / "data" / name));
    }
}

TEST_CASE("vd-search, ttest and sweep") {
    Workspace ws;
    REQUIRE(run("vd-search --index " + ws.index() + " --queries " + ws.queries() + " --mu 1000 --out "
                + q(ws.dir / "vd.txt"))
                .code
            == 0);
    REQUIRE(run("search --index " + ws.index() + " --queries " + ws.queries()
                + " --method combsum --k 2 --mu 1000 --pool 500 --out " + q(ws.dir / "sum.txt"))
                .code
            == 0);
    CHECK(slurp(ws.dir / "vd.txt").find(" vd\n") != std::string::npos);

    auto ttest = run("ttest --run-a " + q(ws.dir / "sum.txt") + " --run-b " + q(ws.dir / "vd.txt") + " --qrels "
                     + ws.qrels() + " --metric map");
    CHECK(ttest.code == 0);
    CHECK(ttest.out.find("\ndf\t5\n") != std::string::npos);
    CHECK(ttest.out.find("\np\t") != std::string::npos);

    auto same = run("ttest --run-a " + q(ws.dir / "vd.txt") + " --run-b " + q(ws.dir / "vd.txt") + " --qrels "
                    + ws.qrels() + " --metric ndcg10");
    CHECK(same.out.find("\np\t1\n") != std::string::npos);
    CHECK(run("ttest --run-a " + q(ws.dir / "vd.txt") + " --run-b " + q(ws.dir / "vd.txt") + " --qrels " + ws.qrels()
              + " --metric recall")
              .code
          == 1);

    auto sweep = run("sweep --index " + ws.index() + " --queries " + ws.queries() + " --qrels " + ws.qrels()
                     + " --method combsum --mu 1000 --pool 500 --k-min 2 --k-max 4 --out -");
    CHECK(sweep.code == 0);
    CHECK(sweep.out.find("k,map,p10,ndcg10\n2,") != std::string::npos);
    CHECK(sweep.out.find("\nbasic,") != std::string::npos);

    // Without --virtual-docs there is no baseline index.
    test_support::TempDir plain;
    REQUIRE(run("index --corpus " + q(ws.dir / "data/corpus.jsonl") + " --out " + q(plain / "index")).code == 0);
    CHECK(run("vd-search --index " + q(plain / "index") + " --queries " + ws.queries() + " --mu 1000 --out -").code
          == 2);
}

TEST_CASE("single-point grid search") {
    Workspace ws;
    auto grid = run("gridsearch --index " + ws.index() + " --queries " + ws.queries() + " --qrels " + ws.qrels()
                    + " --method combsum --mu-min 1000 --mu-max 1000 --pool-min 500 --pool-max 500 --k-min 2 --k-max 2"
                      " --folds 3");
    CHECK(grid.code == 0);
    REQUIRE(run("search --index " + ws.index() + " --queries " + ws.queries()
                + " --method combsum --k 2 --mu 1000 --pool 500 --out " + q(ws.dir / "run.txt"))
                .code
            == 0);
    auto direct = run("eval --run " + q(ws.dir / "run.txt") + " --qrels " + ws.qrels());
    auto map = direct.out.substr(direct.out.find("all\tmap\t") + 8, 8);
    CAPTURE(grid.out);
    CHECK(grid.out.find("\ncv\t-\t-\t-\t-\t" + map + "\t") != std::string::npos);

    auto full = run("gridsearch --index " + ws.index() + " --queries " + ws.queries() + " --qrels " + ws.qrels()
                    + " --method vd --mu-min 500 --mu-max 1500 --mu-step 500 --report full");
    CHECK(full.code == 0);
    CHECK(run("gridsearch --index " + ws.index() + " --queries " + ws.queries() + " --qrels " + ws.qrels()
              + " --method combsum --folds 10")
              .code
          == 2);
}
