#include "gv/cli.hpp"
#include "gv/doubleverify.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

using namespace gv;
using gv::cli::json;

namespace {

struct Run {
    int code;
    std::string out;
    json report;
};

std::string data_path(const std::string& name) { return std::string(GV_DATA_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Run gv_run(const std::string& args, const std::string& env = "") {
    const std::string report = ::testing::TempDir() + "gv_report.json";
    std::remove(report.c_str());
    const std::string cmd = env + " " + GV_CLI_PATH + " " + args + " --report " + report + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Run r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(report), {}};
    if (!r.out.empty()) r.report = json::parse(r.out);
    return r;
}

std::size_t residual_count(const json& rep) {
    std::size_t n = 0;
    for (const auto& c : rep["checks"]) n += c["residuals"].size();
    return n;
}

const json* check(const json& rep, const std::string& name) {
    for (const auto& c : rep["checks"])
        if (c["name"] == name) return &c;
    return nullptr;
}

} // namespace

TEST(Cli, CommuteOnZeroDocumentPassesWithNoResiduals) {
    const auto r = gv_run("check-double --conditions commute " + data_path("zero_double.json"));
    EXPECT_EQ(r.code, 0);
    ASSERT_EQ(r.report["checks"].size(), 1u);
    EXPECT_EQ(r.report["checks"][0]["name"], "commute");
    EXPECT_EQ(residual_count(r.report), 0u);
}

TEST(Cli, CheckDoubleRunsSelectedConditions) {
    const auto r = gv_run("check-double --conditions II,III " + data_path("tangent_double.json"));
    EXPECT_EQ(r.code, 0);
    ASSERT_EQ(r.report["checks"].size(), 2u);
    EXPECT_EQ(r.report["checks"][0]["name"], "II");
    EXPECT_EQ(r.report["checks"][1]["name"], "III");
    EXPECT_TRUE(r.report.contains("correspondence"));
    const auto bad = gv_run("check-double --conditions IV " + data_path("tangent_double.json"));
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(bad.report["error"]["kind"], "usage");
}

TEST(Cli, BrokenDoubleFailsWithResiduals) {
    const auto r = gv_run("check-double " + data_path("broken_double.json"));
    EXPECT_EQ(r.code, 1);
    EXPECT_GT(residual_count(r.report), 0u);
}

TEST(Cli, CotangentDoubleOfAxPlusBPasses) {
    const auto r = gv_run("cotangent-double " + data_path("axb_bialgebra.json"));
    EXPECT_EQ(r.code, 0);
    for (const char* name : {"I", "II", "III", "commute", "hamiltonian"}) {
        const json* c = check(r.report, name);
        ASSERT_NE(c, nullptr) << name;
        EXPECT_TRUE((*c)["pass"].get<bool>()) << name;
    }
}

TEST(Cli, CotangentDoubleOfBrokenCocycleFailsInCommutativity) {
    const auto r = gv_run("cotangent-double " + data_path("broken_bialgebra.json"));
    EXPECT_EQ(r.code, 1);
    const json* c = check(r.report, "commute");
    ASSERT_NE(c, nullptr);
    EXPECT_FALSE((*c)["residuals"].empty());
    EXPECT_FALSE((*check(r.report, "III"))["pass"].get<bool>());
    EXPECT_TRUE(r.report["implications"]["consistent"].get<bool>());
}

TEST(Cli, NeighborsListsTwelveNodesFiveStructured) {
    for (const char* file : {"zero_double.json", "neighbors_double.json"}) {
        const auto r = gv_run(std::string("neighbors ") + data_path(file));
        EXPECT_EQ(r.code, 0);
        EXPECT_EQ(r.report["nodes"].size(), 12u);
        std::size_t flagged = 0;
        for (const auto& n : r.report["nodes"]) flagged += n["structure_bearing"].get<bool>() ? 1 : 0;
        EXPECT_EQ(flagged, 5u);
    }
    const auto r = gv_run("neighbors " + data_path("neighbors_double.json"));
    for (const auto& n : r.report["nodes"]) EXPECT_TRUE(n.contains("transition")) << n["label"];
}

TEST(Cli, CheckAntialgebroid) {
    EXPECT_EQ(gv_run("check-antialgebroid " + data_path("so3.json")).code, 0);
    EXPECT_EQ(gv_run("check-antialgebroid " + data_path("tangent_r2.json")).code, 0);
    const auto bad = gv_run("check-antialgebroid " + data_path("not_lie.json"));
    EXPECT_EQ(bad.code, 1);
    EXPECT_GT(residual_count(bad.report), 0u);
}

TEST(Cli, NFoldCheckOnThreeFoldWithZeroThirdField) {
    const auto r = gv_run("nfold-check " + data_path("nfold3.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(residual_count(r.report), 0u);
}

TEST(Cli, ValidateListsEveryTensorBlock) {
    const auto r = gv_run("validate " + data_path("tangent_double.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.report["diagnostics"].empty());
    ASSERT_EQ(r.report["blocks"].size(), 12u);
    EXPECT_EQ(r.report["blocks"][0]["key"], "Qia");
    EXPECT_EQ(r.report["blocks"][0]["display"], "Q[a|i]");
    EXPECT_EQ(r.report["blocks"][0]["shape"], json::parse("[2,1]"));
    EXPECT_EQ(r.report["blocks"][1]["display"], "Q[k|j,i]");
    EXPECT_EQ(r.report["blocks"][3]["display"], "Q[beta|mu]");
    EXPECT_EQ(r.report["blocks"][6]["display"], "Q[a|alpha]");
}

TEST(Cli, ParseErrorsCarryLineAndColumn) {
    const auto j = gv_run("validate " + data_path("bad_json.json"));
    EXPECT_EQ(j.code, 2);
    EXPECT_EQ(j.report["error"]["kind"], "parse");
    EXPECT_EQ(j.report["error"]["line"], 5);
    const auto e = gv_run("validate " + data_path("bad_expression.json"));
    EXPECT_EQ(e.code, 2);
    EXPECT_EQ(e.report["error"]["line"], 7);
    EXPECT_EQ(e.report["error"]["column"], 20);
}

TEST(Cli, ShapeErrorNamesTheTensorKey) {
    const auto r = gv_run("validate " + data_path("bad_shape.json"));
    EXPECT_EQ(r.code, 3);
    EXPECT_EQ(r.report["error"]["key"], "Qia");
    EXPECT_NE(r.report["error"]["message"].get<std::string>().find("[2x1]"), std::string::npos);
}

TEST(Cli, OddSquareIsANormalizationError) {
    const auto r = gv_run("validate " + data_path("odd_square.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.report["error"]["kind"], "normalization");
    EXPECT_EQ(r.report["error"]["expression"], "c^2");
}

TEST(Cli, MissingInputIsReported) {
    const auto r = gv_run("validate " + data_path("no_such_file.json"));
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(r.report["error"]["kind"], "io");
}

TEST(Cli, ReportsAreByteIdentical) {
    for (const char* args : {"equivalence", "cotangent-double", "neighbors"}) {
        const std::string file = std::string(args) == "cotangent-double" ? "broken_bialgebra.json" : "tangent_double.json";
        const auto a = gv_run(std::string(args) + " " + data_path(file) + " --seed 3");
        const auto b = gv_run(std::string(args) + " " + data_path(file) + " --seed 3");
        EXPECT_EQ(a.out, b.out) << args;
    }
}

TEST(Cli, EnvironmentFallbacksAndFlags) {
    const auto env = gv_run("equivalence " + data_path("tangent_double.json"), "GV_SAMPLES=2 GV_SEED=9 GV_DEGREE=3");
    EXPECT_EQ(env.report["config"]["samples"], 2);
    EXPECT_EQ(env.report["config"]["seed"], 9);
    EXPECT_EQ(env.report["config"]["degree"], 3);
    EXPECT_EQ(env.report["frame_invariance"]["samples"], 2);
    const auto flag = gv_run("equivalence " + data_path("tangent_double.json") + " --samples 1", "GV_SAMPLES=2");
    EXPECT_EQ(flag.report["config"]["samples"], 1);
}

TEST(Cli, ExitZeroIffEveryResidualIsZero) {
    for (const char* args : {"check-double zero_double.json", "check-double tangent_double.json", "check-double broken_double.json",
                             "cotangent-double axb_bialgebra.json", "cotangent-double broken_bialgebra.json",
                             "check-antialgebroid so3.json", "check-antialgebroid not_lie.json", "nfold-check nfold3.json"}) {
        std::istringstream in(args);
        std::string cmd, file;
        in >> cmd >> file;
        const auto r = gv_run(cmd + " " + data_path(file));
        bool all_zero = true;
        for (const auto& c : r.report["checks"])
            for (const auto& x : c["residuals"]) all_zero = all_zero && x["value"] == "0";
        EXPECT_EQ(r.code == 0, all_zero) << args;
    }
}

TEST(Cli, ResidualPolynomialsReparse) {
    const auto sf = cotangent_double(broken_bialgebra()).sf;
    const auto e = equivalence_report(sf);
    std::size_t seen = 0;
    for (const auto* rep : {&e.I, &e.II, &e.III, &e.commute})
        for (const auto& x : rep->residuals) {
            EXPECT_EQ(parse_poly(x.value.str(), x.value.chart()), x.value);
            ++seen;
        }
    EXPECT_GT(seen, 0u);
}

TEST(Cli, InProcessRunMatchesBinary) {
    cli::Options o;
    o.command = "check-double";
    o.input = data_path("broken_double.json");
    const auto out = cli::run(o, slurp(o.input));
    EXPECT_EQ(out.exit_code, 1);
    const auto bin = gv_run("check-double " + o.input);
    EXPECT_EQ(out.report["checks"], bin.report["checks"]);
}

TEST(Cli, SparseAndDenseBlocksAgree) {
    const std::string dense = R"({"base":["x1"],"A":1,"B":1,"core":1,"Q1":{"Qia":[["x1"]]}})";
    const std::string sparse = R"({"base":["x1"],"A":1,"B":1,"core":1,"Q1":{"Qia":{"1,1":"x1"}}})";
    const auto a = cli::parse_double(cli::Document::parse(dense));
    const auto b = cli::parse_double(cli::Document::parse(sparse));
    EXPECT_EQ(a.get("Qia", {0, 0}).str(), "x1");
    EXPECT_EQ(b.get("Qia", {0, 0}).str(), "x1");
}

TEST(Cli, TensorInTheWrongFieldIsAShapeError) {
    const std::string doc = R"({"base":["x1"],"A":1,"B":1,"core":1,"Q2":{"Qia":[["x1"]]}})";
    try {
        cli::parse_double(cli::Document::parse(doc));
        FAIL() << "expected a shape error";
    } catch (const ShapeError& e) {
        EXPECT_EQ(e.key(), "Qia");
    }
}

TEST(Cli, MissingTransitionBlockIsAShapeError) {
    const std::string doc =
        R"({"base":["x1"],"nfold":{"n":2,"families":{"1":1,"2":1,"12":1},"transition":{"1":[["1"]],"2":[["1"]],"12":[["1"]]}}})";
    try {
        cli::parse_nfold(cli::Document::parse(doc));
        FAIL() << "expected a shape error";
    } catch (const ShapeError& e) {
        EXPECT_EQ(e.key(), "T[1|2]");
    }
}
