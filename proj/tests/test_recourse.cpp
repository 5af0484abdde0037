#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "opsw/recourse.hpp"
#include "opsw/uncertainty.hpp"
#include "support.hpp"

using namespace opsw;

namespace {

struct Toy {
    Instance inst = fixtures::toy3();
    WeightModel w = euclidean_weights(inst);
    std::vector<double> scores = inst.scores();
    Path path{{1, 2}};

    Scenario realized(double d01, double d12) const {
        Scenario s{w.dbar, 0};
        s.d(0, 1) = s.d(1, 0) = d01;
        s.d(1, 2) = s.d(2, 1) = d12;
        return s;
    }
    RecourseOutcome seq(const Scenario& s) const { return sequential_recourse(path, s.d, w.dbar, scores, 20.0); }
    RecourseOutcome conc(const Scenario& s) const { return concurrent_recourse(path, s.d, w.dbar, scores, 20.0); }
};

}  // namespace

TEST(Sequential, ToyTrace) {
    const Toy t;
    const auto s = t.realized(11, 7);
    EXPECT_EQ(t.seq(s), (RecourseOutcome{0, 15.0}));
    EXPECT_EQ(t.seq(s).objective(), -15.0);
    EXPECT_EQ(step_executor(t.path, s.d, t.w.dbar, t.scores, 20.0), t.seq(s));
}

TEST(Concurrent, ToyTraces) {
    const Toy t;
    EXPECT_EQ(t.conc(t.realized(11, 7)), (RecourseOutcome{0, 15.0}));

    const auto tie = t.realized(10, 7);
    EXPECT_EQ(t.conc(tie), (RecourseOutcome{2, 0.0}));
    EXPECT_EQ(t.seq(tie), (RecourseOutcome{2, 0.0}));

    const auto info = t.realized(10.5, 6);
    EXPECT_EQ(t.seq(info).loss, 15.0);
    EXPECT_EQ(t.conc(info), (RecourseOutcome{2, 0.0}));
    EXPECT_EQ(brute_force_cut(t.path, info.d, t.w.dbar, t.scores, 20.0), t.conc(info));
}

TEST(Recourse, EmptyPath) {
    const Toy t;
    const Path empty;
    const auto s = t.realized(50, 50);
    using Fn = RecourseOutcome (*)(const Path&, const Matrix&, const Matrix&, std::span<const double>, double);
    for (Fn f : {Fn(sequential_recourse), Fn(concurrent_recourse), Fn(brute_force_cut), Fn(step_executor)})
        EXPECT_EQ(f(empty, s.d, t.w.dbar, t.scores, 20.0), (RecourseOutcome{0, 0.0}));
}

TEST(Recourse, RobustFeasiblePathAtOptimisticWeights) {
    const Toy t;
    const auto w = apply_deviation(t.w, 0.2);
    const Path p{{2}};
    ASSERT_LE(p.tour_length(worst_case_weights(BoxUncertainty(w, 1.0)).d), 20.0);
    const auto low = optimistic_weights(w).d;
    EXPECT_EQ(sequential_recourse(p, low, w.dbar, t.scores, 20.0).loss, 0.0);
    EXPECT_EQ(concurrent_recourse(p, low, w.dbar, t.scores, 20.0).loss, 0.0);
}

TEST(Recourse, SingleNodePaths) {
    const Toy t;
    const Path p{{1}};
    const auto ok = t.realized(10, 7);
    EXPECT_EQ(brute_force_cut(p, ok.d, t.w.dbar, t.scores, 20.0).loss, 0.0);
    const auto bad = t.realized(10.5, 7);
    EXPECT_EQ(brute_force_cut(p, bad.d, t.w.dbar, t.scores, 20.0), (RecourseOutcome{0, 10.0}));
    EXPECT_EQ(concurrent_recourse(p, bad.d, t.w.dbar, t.scores, 20.0), (RecourseOutcome{0, 10.0}));
    EXPECT_EQ(step_executor(p, bad.d, t.w.dbar, t.scores, 20.0), (RecourseOutcome{0, 10.0}));
}

TEST(Recourse, ZeroScores) {
    Toy t;
    const std::vector<double> zero(3, 0.0);
    const auto s = t.realized(30, 30);
    EXPECT_EQ(step_executor(t.path, s.d, t.w.dbar, zero, 20.0).loss, 0.0);
    EXPECT_EQ(sequential_recourse(t.path, s.d, t.w.dbar, zero, 20.0).loss, 0.0);
    EXPECT_EQ(concurrent_recourse(t.path, s.d, t.w.dbar, zero, 20.0).objective(), 0.0);
}

TEST(Path, ValidateAndMeasure) {
    EXPECT_THROW(Path({1, 1}).validate(3), DomainError);
    EXPECT_THROW(Path({0}).validate(3), DomainError);
    EXPECT_THROW(Path({3}).validate(3), DomainError);
    EXPECT_NO_THROW(Path({2, 1}).validate(3));
    const Toy t;
    EXPECT_EQ(t.path.tour_length(t.w.dbar), 20.0);
    EXPECT_EQ(t.path.score(t.scores), 15.0);
    EXPECT_EQ(t.path.to_string(), "0 1 2 0");
}

TEST(RecourseProperty, OraclesDominanceMonotonicity) {
    CounterRng rng(77, 0);
    for (int trial = 0; trial < 20'000; ++trial) {
        const std::size_t n = 2 + rng.below(10);
        const auto inst = make_random_instance(rng.next(), n, 5.0 + 30.0 * rng.uniform());
        const auto w = apply_deviation(euclidean_weights(inst), rng.uniform());
        const auto scores = inst.scores();
        const auto path = fixtures::random_path(rng, n, n);
        const auto s = sample_scenario(w, rng.next(), trial);
        const double L = inst.length_limit;

        const auto seq = sequential_recourse(path, s.d, w.dbar, scores, L);
        const auto conc = concurrent_recourse(path, s.d, w.dbar, scores, L);
        ASSERT_EQ(seq, step_executor(path, s.d, w.dbar, scores, L));
        ASSERT_EQ(conc, brute_force_cut(path, s.d, w.dbar, scores, L));
        ASSERT_LE(conc.loss, seq.loss);
        ASSERT_LE(seq.objective(), 0.0);

        Scenario up = s;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) up.d(i, j) += (i != j) * rng.uniform();
        ASSERT_GE(sequential_recourse(path, up.d, w.dbar, scores, L).loss, seq.loss);
        ASSERT_GE(concurrent_recourse(path, up.d, w.dbar, scores, L).loss, conc.loss);
    }
}

TEST(RecourseProperty, OffPathArcsUnread) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CounterRng rng(5, 1);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = 3 + rng.below(8);
        const auto inst = make_random_instance(rng.next(), n, 25.0);
        const auto w = apply_deviation(euclidean_weights(inst), 0.5);
        const auto scores = inst.scores();
        const auto path = fixtures::random_path(rng, n, n);
        const auto s = sample_scenario(w, 3, trial);

        std::vector<char> on(n * n, 0);
        int prev = 0;
        for (int v : path.nodes) {
            on[static_cast<std::size_t>(prev) * n + static_cast<std::size_t>(v)] = 1;
            prev = v;
        }
        Scenario poisoned = s;
        WeightModel expected = w;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (!on[i * n + j]) poisoned.d(i, j) = nan;
                if (j != 0) expected.dbar(i, j) = nan;
            }
        const double L = inst.length_limit;
        ASSERT_EQ(sequential_recourse(path, poisoned.d, expected.dbar, scores, L),
                  sequential_recourse(path, s.d, w.dbar, scores, L));
        ASSERT_EQ(concurrent_recourse(path, poisoned.d, expected.dbar, scores, L),
                  concurrent_recourse(path, s.d, w.dbar, scores, L));
    }
}
