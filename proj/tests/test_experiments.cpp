#include <gtest/gtest.h>

#include <filesystem>

#include "opsw/experiments.hpp"
#include "support.hpp"

using namespace opsw;

namespace {

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("opsw_exp_" + name);
    std::filesystem::remove_all(dir);
    return dir;
}

}  // namespace

TEST(PairwiseSum, MatchesSmallSums) {
    std::vector<double> v;
    for (int i = 1; i <= 1000; ++i) v.push_back(i);
    EXPECT_EQ(pairwise_sum(v), 500500.0);
    EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(Simulate, DeterministicWeights) {
    const auto inst = fixtures::toy3();
    const auto w = euclidean_weights(inst);
    const Path p{{2, 1}};
    for (auto policy : {Policy::Sequential, Policy::Concurrent}) {
        const auto s = simulate(inst, p, w, 100, 42, policy);
        EXPECT_EQ(s.n_scenarios, 100u);
        EXPECT_EQ(s.mean, 15.0);
        EXPECT_EQ(s.std, 0.0);
    }
}

TEST(Simulate, DominanceAndBounds) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = make_random_instance(seed, 9, 24.0);
        const auto w = apply_deviation(euclidean_weights(inst), 0.5);
        CounterRng rng(seed, 9);
        const auto p = fixtures::random_path(rng, 9, 8);
        const ScenarioPool pool(w, 500, seed);
        const SimulationOptions keep{1, false, true};
        const auto seq = simulate(inst, p, w, pool, Policy::Sequential, keep);
        const auto conc = simulate(inst, p, w, pool, Policy::Concurrent, keep);
        for (std::size_t i = 0; i < pool.size(); ++i)
            ASSERT_GE(conc.per_scenario_objectives[i], seq.per_scenario_objectives[i]);
        EXPECT_GE(conc.mean, seq.mean);
        const double score = p.score(inst.scores());
        for (const auto* s : {&seq, &conc}) {
            EXPECT_LE(s->mean, score);
            const bool all_full = std::all_of(s->per_scenario_objectives.begin(), s->per_scenario_objectives.end(),
                                              [&](double v) { return v == score; });
            EXPECT_EQ(s->mean == score, all_full);
            const auto [lo, hi] = std::minmax_element(s->per_scenario_objectives.begin(), s->per_scenario_objectives.end());
            EXPECT_EQ(s->std == 0.0, *lo == *hi);
        }
    }
}

TEST(Simulate, ThreadIndependentAndSampleStd) {
    const auto inst = make_random_instance(77, 10, 26.0);
    const auto w = apply_deviation(euclidean_weights(inst), 0.5);
    const Path p{{1, 2, 3, 4, 5, 6}};
    const auto a = simulate(inst, p, w, 1000, 42, Policy::Sequential, {1, false, true});
    const auto b = simulate(inst, p, w, 1000, 42, Policy::Sequential, {4, false, true});
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std, b.std);
    EXPECT_EQ(a.per_scenario_objectives, b.per_scenario_objectives);
    const auto c = simulate(inst, p, w, 1000, 42, Policy::Sequential, {3, true, false});
    EXPECT_EQ(c.mean, a.mean);
    ASSERT_GT(a.std, 0.0);
    EXPECT_NEAR(c.std, a.std * std::sqrt(1000.0 / 999.0), 1e-12 * c.std);
    EXPECT_TRUE(c.per_scenario_objectives.empty());
}

TEST(Table, DegenerateIsFlat) {
    const auto inst = make_random_instance(5, 7, 20.0);
    const auto w = euclidean_weights(inst);
    TableConfig cfg;
    cfg.n_scenarios = 50;
    const auto rows = run_table(inst, w, cfg);
    ASSERT_EQ(rows.size(), 11u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.one_stage, rows[0].one_stage);
        EXPECT_EQ(r.two_stage, rows[0].two_stage);
        EXPECT_EQ(r.one_stage.seq_std, 0.0);
        EXPECT_EQ(r.two_stage.conc_std, 0.0);
        EXPECT_EQ(r.one_stage.obj, r.one_stage.seq_mean);
    }
}

TEST(Table, MonotoneDominantDeterministic) {
    const auto inst = make_random_instance(12, 8, 20.0);
    const auto w = apply_deviation(euclidean_weights(inst), 0.5);
    TableConfig cfg;
    cfg.n_scenarios = 300;
    const auto rows = run_table(inst, w, cfg);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_TRUE(rows[i].one_stage_optimal && rows[i].two_stage_optimal);
        EXPECT_GE(rows[i].two_stage.obj, rows[i].one_stage.obj);
        EXPECT_GE(rows[i].one_stage.conc_mean, rows[i].one_stage.seq_mean);
        EXPECT_GE(rows[i].two_stage.conc_mean, rows[i].two_stage.seq_mean);
        if (i) {
            EXPECT_LE(rows[i].one_stage.obj, rows[i - 1].one_stage.obj);
            EXPECT_LE(rows[i].two_stage.obj, rows[i - 1].two_stage.obj);
        }
    }
    cfg.threads = 4;
    EXPECT_EQ(table_csv(run_table(inst, w, cfg)), table_csv(rows));
    EXPECT_EQ(table_long_csv(run_table(inst, w, cfg)), table_long_csv(rows));
}

TEST(Table, ImportedSolutions) {
    const auto inst = make_random_instance(13, 7, 18.0);
    const auto w = apply_deviation(euclidean_weights(inst), 0.2);
    std::vector<RobustSolution> imported;
    for (double theta : {0.0, 1.0})
        for (auto f : {Formulation::OneStageRO, Formulation::StaticConcurrent}) {
            auto s = branch_and_bound(inst, BoxUncertainty(w, theta), f);
            s.objective = -1;  // recomputed on import
            imported.push_back(s);
        }
    TableConfig cfg;
    cfg.theta_grid = {0.0, 1.0};
    cfg.n_scenarios = 100;
    cfg.imported = &imported;
    const auto a = run_table(inst, w, cfg);
    cfg.imported = nullptr;
    const auto b = run_table(inst, w, cfg);
    EXPECT_EQ(table_csv(a), table_csv(b));
    cfg.imported = &imported;
    cfg.theta_grid = {0.5};
    EXPECT_THROW(run_table(inst, w, cfg), DomainError);
}

TEST(Csv, EmptyAndRoundTrip) {
    EXPECT_EQ(table_csv({}), std::string(kTableHeader) + "\n");
    EXPECT_TRUE(parse_table_csv(table_csv({})).empty());

    const auto dir = scratch("empty");
    emit_csv({}, dir);
    EXPECT_EQ(read_text_file(dir / "table.csv"), std::string(kTableHeader) + "\n");
    EXPECT_EQ(read_text_file(dir / "table_long.csv"), std::string(kLongHeader) + "\n");

    std::vector<TableRow> rows{{0.0, {710, 710, 0, 710, 0}, {710, 710, 0, 710, 0}, true, true},
                               {0.5, {660, 660, 0, 660, 0}, {660, 679.9, 11.25, 683.45, 9.5}, true, false}};
    EXPECT_EQ(parse_table_csv(table_csv(rows)), rows);
    EXPECT_EQ(table_csv(rows).substr(0, table_csv(rows).find('\n')),
              "theta,one_stage_obj,one_stage_seq_mean,one_stage_seq_std,one_stage_conc_mean,one_stage_conc_std,"
              "two_stage_obj,two_stage_seq_mean,two_stage_seq_std,two_stage_conc_mean,two_stage_conc_std,"
              "one_stage_optimal,two_stage_optimal");

    rows[1].two_stage.seq_mean = 679.9 + 1.0 / 3.0;
    EXPECT_EQ(parse_table_long_csv(table_long_csv(rows)), rows);
    EXPECT_THROW(parse_table_csv("bad header\n"), ParseError);
    EXPECT_THROW(emit_csv(rows, "/proc/opsw_cannot_write"), IoError);
}

TEST(Verify, RandomSuitePasses) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto inst = make_random_instance(seed, 6, 16.0 + static_cast<double>(seed));
        const auto w = apply_deviation(euclidean_weights(inst), 0.5);
        const auto report = verify_equivalences(inst, w, {0.0, 0.25, 0.5, 0.75, 1.0});
        EXPECT_TRUE(report.passed()) << report.text();
        EXPECT_EQ(report.max_discrepancy(), 0.0);
        ASSERT_EQ(report.checks.size(), 5u);
        ASSERT_TRUE(report.checks[0].dop);
        EXPECT_EQ(*report.checks[0].dop, report.checks[0].static_conc);
        ASSERT_TRUE(report.checks[2].static_seq_relaxed);
        EXPECT_EQ(*report.checks[2].static_seq_relaxed, report.checks[2].static_seq);
        EXPECT_NE(report.text().find("result=PASS"), std::string::npos);
    }
}

TEST(Verify, CompactPathForLargerInstances) {
    const auto inst = make_random_instance(40, 8, 18.0);
    const auto w = apply_deviation(euclidean_weights(inst), 0.2);
    const auto report = verify_equivalences(inst, w, {0.0, 1.0});
    EXPECT_TRUE(report.passed()) << report.text();
}

TEST(Verify, FaultInjectionIsCaught) {
    const auto inst = make_random_instance(3, 6, 20.0);
    const auto w = apply_deviation(euclidean_weights(inst), 0.5);
    VerifyOptions bad;
    bad.build.big_m = 1.0;
    const auto report = verify_equivalences(inst, w, {1.0}, bad);
    EXPECT_FALSE(report.passed());
    ASSERT_TRUE(report.checks[0].witness);
    EXPECT_NE(report.text().find("witness"), std::string::npos);
    EXPECT_NE(report.text().find("result=FAIL"), std::string::npos);
}

TEST(Verify, CapacityCap) {
    const auto inst = make_random_instance(3, 10, 20.0);
    const auto w = euclidean_weights(inst);
    EXPECT_THROW(verify_equivalences(inst, w, {0.0}), CapacityError);
}
