#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "opsw/cli.hpp"
#include "support.hpp"

using namespace opsw;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return (fs::path(OPSW_TEST_DATA) / name).string(); }

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("opsw_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string random_json(std::uint64_t seed, std::size_t n, double L, const fs::path& dir) {
    const auto inst = make_random_instance(seed, n, L);
    const auto file = dir / ("inst" + std::to_string(seed) + ".json");
    write_text_file(file, write_instance_json(inst));
    return file.string();
}

}  // namespace

TEST(Cli, HelpDocumentsFlags) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    for (const char* flag : {"--instance", "--L", "--alpha", "--theta", "--theta-grid", "--scenarios", "--seed",
                             "--model", "--relax", "--out", "--limit-nodes", "--config"})
        EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
    EXPECT_NE(r.out.find("length units"), std::string::npos);
    EXPECT_NE(r.out.find("dimensionless"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"solve", "--bogus"}).code, 2);
    EXPECT_EQ(run({"solve", "--instance", data("toy2.txt"), "--L", "10", "--theta", "2"}).code, 2);
    EXPECT_EQ(run({"solve", "--instance", data("toy2.txt")}).code, 2);  // --L missing
    EXPECT_EQ(run({"solve", "--instance", data("toy2.txt"), "--L", "10", "--model", "nonsense"}).code, 2);
    EXPECT_EQ(run({"export-lp", "--instance", data("toy2.txt"), "--L", "10", "--model", "two-stage-seq"}).code, 2);
}

TEST(Cli, MissingAndMalformedFiles) {
    const auto r = run({"solve", "--instance", "/nonexistent/x.txt", "--L", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("cannot open"), std::string::npos);
    const auto dir = scratch("bad");
    write_text_file(dir / "bad.txt", "0 0 0\nbad\n");
    const auto b = run({"solve", "--instance", (dir / "bad.txt").string(), "--L", "10"});
    EXPECT_EQ(b.code, 1);
    EXPECT_NE(b.err.find("line 2"), std::string::npos);
}

TEST(Cli, SolveToy) {
    const auto r = run({"solve", "--instance", data("toy2.txt"), "--L", "10", "--model", "one-stage", "--theta", "0.3"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("seed=42"), std::string::npos);
    EXPECT_NE(r.out.find("kind=one-stage theta=0.3 objective=10 optimal=true"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("path=1\n"), std::string::npos);

    const auto limited = run({"solve", "--instance", data("toy3.txt"), "--L", "20", "--limit-nodes", "1"});
    EXPECT_EQ(limited.code, 0);
    EXPECT_NE(limited.out.find("optimal=false"), std::string::npos);
}

TEST(Cli, SolveMatchesExhaustive) {
    const auto dir = scratch("solve8");
    const auto file = random_json(3, 8, 20.0, dir);
    const auto r = run({"solve", "--instance", file, "--alpha", "0.5", "--model", "static-concurrent", "--theta", "1.0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto inst = make_random_instance(3, 8, 20.0);
    const auto w = apply_deviation(euclidean_weights(inst), 0.5);
    auto expect = solve_exhaustive(inst, BoxUncertainty(w, 1.0), Formulation::StaticConcurrent);
    const auto got = parse_solution(r.out.substr(r.out.find("kind=")));
    EXPECT_EQ(got.objective, expect.objective);
    EXPECT_EQ(got.path, expect.path);
}

TEST(Cli, ExportGoldenAndIdempotent) {
    const auto dir = scratch("export");
    const auto r = run({"export-lp", "--instance", data("toy2.txt"), "--L", "10", "--model", "dop", "--out", dir.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto file = dir / "dop_alpha0_L10.lp";
    ASSERT_TRUE(fs::exists(file));
    const auto text = read_text_file(file);
    EXPECT_EQ(text, read_text_file(data("dop_toy_cli.lp")));
    EXPECT_EQ(export_lp(parse_lp(text)), text);

    const auto g = run({"export-lp", "--instance", data("toy3.txt"), "--L", "20", "--alpha", "0.2", "--model",
                        "static-seq", "--theta-grid", "0,1", "--relax", "--out", dir.string()});
    ASSERT_EQ(g.code, 0) << g.err;
    for (const char* name : {"static-seq_theta0_alpha0.2_L20_relax.lp", "static-seq_theta1_alpha0.2_L20_relax.lp"}) {
        const auto t = read_text_file(dir / name);
        EXPECT_EQ(export_lp(parse_lp(t)), t);
        EXPECT_NE(t.find("\\ relax: true"), std::string::npos);
    }
}

TEST(Cli, ImportRoundTrip) {
    const auto dir = scratch("import");
    const auto inst_file = random_json(5, 7, 18.0, dir);
    const auto solved = run({"solve", "--instance", inst_file, "--alpha", "0.2", "--model", "one-stage", "--theta", "0.5"});
    ASSERT_EQ(solved.code, 0);
    const auto sol = parse_solution(solved.out.substr(solved.out.find("kind=")));
    ASSERT_FALSE(sol.path.empty());

    std::string arcs = "# solver output\n";
    int prev = 0;
    for (int v : sol.path.nodes) {
        arcs += "x_" + std::to_string(prev) + "_" + std::to_string(v) + " 1\n";
        prev = v;
    }
    arcs += "x_" + std::to_string(prev) + "_0 = 1\nx_1_2 0\nu_1 3\n";
    write_text_file(dir / "arcs.txt", arcs);
    const auto store = (dir / "solutions.txt").string();
    const auto r = run({"import-solution", "--instance", inst_file, "--alpha", "0.2", "--model", "one-stage", "--theta",
                        "0.5", "--solution", (dir / "arcs.txt").string(), "--solutions", store});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto stored = cli::read_solutions(store);
    ASSERT_EQ(stored.size(), 1u);
    EXPECT_EQ(stored[0].path, sol.path);
    EXPECT_EQ(stored[0].objective, sol.objective);

    write_text_file(dir / "split.txt", "x_0_1 1\nx_1_0 1\nx_2_3 1\nx_3_2 1\n");
    const auto bad = run({"import-solution", "--instance", inst_file, "--model", "dop", "--solution",
                          (dir / "split.txt").string(), "--solutions", store});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.err.find("more than one cycle"), std::string::npos) << bad.err;

    write_text_file(dir / "deg.txt", "x_0_1 1\nx_0_2 1\n");
    const auto deg = run({"import-solution", "--instance", inst_file, "--model", "dop", "--solution",
                          (dir / "deg.txt").string(), "--solutions", store});
    EXPECT_EQ(deg.code, 1);
    EXPECT_NE(deg.err.find("two outgoing"), std::string::npos);
}

TEST(Cli, TableDeterministicAndFlat) {
    const auto dir = scratch("table");
    const auto file = random_json(9, 8, 20.0, dir);
    std::vector<std::string> args{"table", "--instance", file, "--alpha", "0.5", "--scenarios", "200",
                                  "--seed", "7", "--out", (dir / "a").string()};
    ASSERT_EQ(run(args).code, 0);
    args.back() = (dir / "b").string();
    args.insert(args.end(), {"--threads", "3"});
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(read_text_file(dir / "a" / "table.csv"), read_text_file(dir / "b" / "table.csv"));
    EXPECT_EQ(read_text_file(dir / "a" / "table_long.csv"), read_text_file(dir / "b" / "table_long.csv"));
    const auto rows = parse_table_csv(read_text_file(dir / "a" / "table.csv"));
    ASSERT_EQ(rows.size(), 11u);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LE(rows[i].one_stage.obj, rows[i - 1].one_stage.obj);

    const auto flat = run({"table", "--instance", file, "--scenarios", "20", "--theta-grid", "0,0.5,1", "--out",
                           (dir / "flat").string()});
    ASSERT_EQ(flat.code, 0);
    const auto f = parse_table_csv(read_text_file(dir / "flat" / "table.csv"));
    for (const auto& r : f) EXPECT_EQ(r.one_stage, f[0].one_stage);
}

TEST(Cli, TableFromImportedSolutions) {
    const auto dir = scratch("table_import");
    const auto file = random_json(11, 6, 16.0, dir);
    const auto store = (dir / "sol.txt").string();
    std::string records;
    for (const char* model : {"one-stage", "static-conc"})
        for (const char* theta : {"0", "1"}) {
            const auto r = run({"solve", "--instance", file, "--alpha", "0.2", "--model", model, "--theta", theta});
            records += r.out.substr(r.out.find("kind="));
        }
    write_text_file(store, records);
    const auto a = run({"table", "--instance", file, "--alpha", "0.2", "--theta-grid", "0,1", "--scenarios", "50",
                        "--solutions", store, "--out", (dir / "i").string()});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto b = run({"table", "--instance", file, "--alpha", "0.2", "--theta-grid", "0,1", "--scenarios", "50",
                        "--out", (dir / "s").string()});
    EXPECT_EQ(read_text_file(dir / "i" / "table.csv"), read_text_file(dir / "s" / "table.csv"));
}

TEST(Cli, SimulateEchoesSeed) {
    const auto r = run({"simulate", "--instance", data("toy3.txt"), "--L", "20", "--alpha", "0.2", "--path", "1,2",
                        "--scenarios", "100", "--seed", "5"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("seed=5"), std::string::npos);
    EXPECT_NE(r.out.find("policy=sequential"), std::string::npos);
    EXPECT_NE(r.out.find("policy=concurrent"), std::string::npos);
    EXPECT_EQ(run({"simulate", "--instance", data("toy3.txt"), "--L", "20", "--policy", "odd"}).code, 2);
    EXPECT_EQ(run({"simulate", "--instance", data("toy3.txt"), "--L", "20", "--path", "1,1"}).code, 1);
}

TEST(Cli, VerifySuiteAndFault) {
    const auto dir = scratch("verify");
    const auto file = random_json(2, 6, 18.0, dir);
    const auto ok = run({"verify", "--instance", file, "--alpha", "0.5", "--theta-grid", "0,0.5,1"});
    EXPECT_EQ(ok.code, 0) << ok.out;
    EXPECT_NE(ok.out.find("result=PASS"), std::string::npos);
    const auto zero = run({"verify", "--instance", file, "--theta-grid", "0"});
    EXPECT_EQ(zero.code, 0);
    const auto fault = run({"verify", "--instance", file, "--alpha", "0.5", "--theta-grid", "1", "--big-m", "1"});
    EXPECT_EQ(fault.code, 1);
    EXPECT_NE(fault.out.find("witness"), std::string::npos);
    const auto big = random_json(4, 10, 18.0, dir);
    EXPECT_EQ(run({"verify", "--instance", big}).code, 2);
}

TEST(Cli, ConfigFileFlagsWin) {
    const auto dir = scratch("config");
    write_text_file(dir / "run.ini", "instance=" + data("toy2.txt") + "\nL=7\nmodel=dop\nseed=11\n");
    const auto from_file = run({"solve", "--config", (dir / "run.ini").string()});
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    EXPECT_NE(from_file.out.find("seed=11"), std::string::npos);
    EXPECT_NE(from_file.out.find("objective=0 "), std::string::npos) << from_file.out;
    const auto flag = run({"solve", "--config", (dir / "run.ini").string(), "--L", "10"});
    EXPECT_NE(flag.out.find("objective=10 "), std::string::npos) << flag.out;
}
