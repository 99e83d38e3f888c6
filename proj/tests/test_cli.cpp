#include "doctest.h"
#include "lpq/cli.hpp"
#include "lpq/seqio.hpp"

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace lpq;

namespace {

int run(std::initializer_list<std::string> args) {
    std::vector<const char*> argv{"lpq"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
    std::filesystem::path dir;
    TempDir() {
        dir = std::filesystem::temp_directory_path() / "lpq_cli_test";
        std::filesystem::create_directories(dir);
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("cli exit codes for usage and malformed input") {
    CHECK(run({"no-such-command"}) == 64);
    TempDir tmp;
    write_text_file(tmp.path("bad.json"), "{not json");
    CHECK(run({"efun", "--seq", tmp.path("bad.json"), "--q", "1"}) == 65);
    write_text_file(tmp.path("incr.json"), R"({"prefix": [1, 2], "tail": {"kind": "zero"}})");
    CHECK(run({"efun", "--seq", tmp.path("incr.json"), "--q", "1"}) == 65);
}

TEST_CASE("cli kfun on (l^0, l^1) writes the curve CSV") {
    TempDir tmp;
    write_text_file(tmp.path("x.json"),
                    seq_to_json(Seq({1, 1})).dump());
    std::string out = tmp.path("k.csv");
    CHECK(run({"kfun", "--seq", tmp.path("x.json"), "--couple", "0,1", "--grid", "dyadic:4",
               "--out", out}) == 0);
    std::string csv = read_text_file(out);
    CHECK(csv.rfind("t,K,method,lo,hi\n", 0) == 0);
    CHECK(csv.find("from-E") != std::string::npos);
}

TEST_CASE("cli majorize exit codes carry the verdict") {
    TempDir tmp;
    write_text_file(tmp.path("x.json"), seq_to_json(Seq({1, 1})).dump());
    write_text_file(tmp.path("y.json"), seq_to_json(Seq({0.5, 0.5})).dump());
    write_text_file(tmp.path("z.json"), seq_to_json(Seq({1.5, 0.2})).dump());
    CHECK(run({"majorize", "--x", tmp.path("x.json"), "--y", tmp.path("y.json"), "--mode", "head",
               "--p", "1", "--horizon", "8"}) == 0);
    CHECK(run({"majorize", "--x", tmp.path("x.json"), "--y", tmp.path("z.json"), "--mode", "head",
               "--p", "1", "--horizon", "8"}) == 2);
}

TEST_CASE("cli witness prints N = 11 for the reference parameters") {
    TempDir tmp;
    std::string out = tmp.path("w.json");
    CHECK(run({"witness", "--p", "0", "--q", "0.5", "--C", "10", "--out", out}) == 0);
    auto j = nlohmann::json::parse(read_text_file(out));
    CHECK(j["N"] == 11);
    CHECK(j["bound"].get<double>() == doctest::Approx(11.0));
}

TEST_CASE("cli split writes operators and report") {
    TempDir tmp;
    write_text_file(tmp.path("x.json"), seq_to_json(Seq({2, 1, 1, 1, 1, 1})).dump());
    write_text_file(tmp.path("y.json"), seq_to_json(Seq({1.9, 1.2, 1.2, 0, 0, 0})).dump());
    CHECK(run({"split", "--x", tmp.path("x.json"), "--y", tmp.path("y.json"), "--couple", "1,2",
               "--horizon", "8", "--out-prefix", tmp.path("split")}) == 0);
    auto rep = nlohmann::json::parse(read_text_file(tmp.path("split_report.json")));
    CHECK(rep["residual"].get<double>() <= 1e-10);
}

TEST_CASE("cli counterexample produces deterministic trace JSON") {
    TempDir tmp;
    std::string out1 = tmp.path("t1.json"), out2 = tmp.path("t2.json");
    CHECK(run({"counterexample", "--p", "0", "--q", "0.5", "--r", "inf", "--steps", "5", "--out",
               out1, "--ratios", tmp.path("r1.csv")}) == 0);
    CHECK(run({"counterexample", "--p", "0", "--q", "0.5", "--r", "inf", "--steps", "5", "--out",
               out2, "--ratios", tmp.path("r2.csv")}) == 0);
    CHECK(read_text_file(out1) == read_text_file(out2));
    CHECK(read_text_file(tmp.path("r1.csv")) == read_text_file(tmp.path("r2.csv")));
}

TEST_CASE("cli tab and sqcheck round trip") {
    TempDir tmp;
    write_text_file(tmp.path("h.json"), seq_to_json(Seq({1, 1})).dump());
    CHECK(run({"tab", "--seq", tmp.path("h.json"), "--a", "1", "--b", "2", "--q", "1", "--out",
               tmp.path("img.json")}) == 0);
    Seq img = seq_from_json(nlohmann::json::parse(read_text_file(tmp.path("img.json"))));
    CHECK(img.at(2) == doctest::Approx(0.5));

    write_text_file(tmp.path("x.json"), seq_to_json(Seq({1, 0.8, 0.3})).dump());
    write_text_file(tmp.path("yflat.json"), seq_to_json(Seq({0.9, 0.7, 0.5})).dump());
    int code = run({"sqcheck", "--x", tmp.path("x.json"), "--y", tmp.path("yflat.json"), "--q",
                    "1", "--r", "2"});
    CHECK(code == 2);  // masses differ: certified failure
}
