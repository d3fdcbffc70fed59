#include <gtest/gtest.h>

#include "fixtures.hpp"

using namespace vbs;
using namespace vbs::testing;

TEST(Joint, ExampleObjective) {
  const auto factors = example_problem().valuations();
  const auto f = joint(std::span<const Valuation>(factors), MinSum{});
  EXPECT_EQ(f.domain(), (VariableSet{A, B, C, D, E}));
  EXPECT_EQ(f.size(), 32u);
  EXPECT_EQ(evaluate(f, config({A, B, C, D, E}, {1, 0, 0, 0, 0})), 2);
  EXPECT_EQ(evaluate(f, config({A, B, C, D, E}, {0, 0, 0, 0, 0})), 5);
}

TEST(Joint, SingleFactorAndFoldOrder) {
  const std::vector<Valuation> one{example_f2()};
  EXPECT_EQ(joint(std::span<const Valuation>(one), MinSum{}), example_f2());
  const std::vector<Valuation> fwd{example_f1(), example_f2(), example_f3()};
  const std::vector<Valuation> rev{example_f3(), example_f2(), example_f1()};
  EXPECT_EQ(joint(std::span<const Valuation>(fwd), MinSum{}),
            joint(std::span<const Valuation>(rev), MinSum{}));
}

TEST(Joint, Errors) {
  EXPECT_THROW(joint(std::span<const Valuation>{}, MinSum{}), DomainError);
  const auto factors = example_problem().valuations();
  EXPECT_THROW(joint(std::span<const Valuation>(factors), MinSum{}, 31), LimitError);
  EXPECT_NO_THROW(joint(std::span<const Valuation>(factors), MinSum{}, 32));
}

TEST(BruteSolve, ExampleProblem) {
  const auto r = brute_solve(example_problem());
  EXPECT_EQ(r.optimum, 2);
  EXPECT_EQ(r.joint_size, 32u);
  EXPECT_EQ(r.argopt, (std::vector<Configuration>{config({A, B, C, D, E}, {1, 0, 0, 0, 0}),
                                                 config({A, B, C, D, E}, {1, 0, 1, 0, 0})}));
}

TEST(BruteSolve, SingleFactorF1) {
  Problem p;
  p.variables = {binary("A", "a"), binary("C", "c"), binary("E", "e")};
  p.factors = {{"F1", Valuation({0, 1, 2}, {2, 2, 2}, {1, 3, 5, 8, 2, 6, 2, 4})}};
  const auto r = brute_solve(p);
  EXPECT_EQ(r.optimum, 1);
  EXPECT_EQ(r.argopt, std::vector<Configuration>{config({0, 1, 2}, {0, 0, 0})});
}

TEST(BruteSolve, AllVacuous) {
  Problem p;
  p.variables = {binary("A", "a")};
  p.factors = {{"V", vacuous({0}, std::vector<std::size_t>{2}, MinSum{})}};
  const auto r = brute_solve(p);
  EXPECT_EQ(r.optimum, 0);
  EXPECT_EQ(r.argopt.size(), 2u);
}

TEST(BruteSolve, SizeCap) {
  EXPECT_THROW(brute_solve(example_problem(), 16), LimitError);
}

TEST(BruteSolve, ArgoptIsExactAndComplete) {
  Rng rng(41);
  for (int i = 0; i < 200; ++i) {
    const Problem p = random_problem(rng, 5, 3, 4, i % 2 ? Sense::maximize : Sense::minimize);
    const auto r = brute_solve(p);
    ASSERT_FALSE(r.argopt.empty());
    EXPECT_TRUE(std::is_sorted(r.argopt.begin(), r.argopt.end()));
    std::size_t hits = 0;
    for_each_assignment(p.cards(), [&](const std::vector<StateId>& full) {
      const Configuration z(p.universe(), full);
      const Value v = evaluate_objective(p, z);
      if (p.sense == Sense::minimize) {
        EXPECT_GE(v, r.optimum);
      } else {
        EXPECT_LE(v, r.optimum);
      }
      if (v == r.optimum) ++hits;
    });
    EXPECT_EQ(hits, r.argopt.size());
    for (const auto& z : r.argopt) EXPECT_EQ(evaluate_objective(p, z), r.optimum);
  }
}
