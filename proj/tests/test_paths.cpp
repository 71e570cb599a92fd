#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace tge;
using tge::test::e_pq;
using tge::test::two_loops;

TEST(Paths, SourceAndRangeCountsOfSingleLoops) {
  EXPECT_EQ(count_source_paths(e_pq(2, 3), 3, 0), 8);
  EXPECT_EQ(count_range_paths(e_pq(2, 3), 2, 0), 9);
  EXPECT_EQ(count_range_paths(e_pq(1, -2), 1, 0), 2);
  EXPECT_EQ(count_source_paths(two_loops(), 3, "v"), 27);
  EXPECT_EQ(count_range_paths(two_loops(), 3, "v"), 64);
}

TEST(Paths, CountErrors) {
  EXPECT_THROW(count_source_paths(e_pq(2, 3), 1, 1), LookupError);
  EXPECT_THROW(count_range_paths(e_pq(2, 3), 1, "w"), LookupError);
  EXPECT_THROW(count_source_paths(e_pq(2, 3), 0, 0), PreconditionError);
}

TEST(Paths, LengthOneIsFiberCount) {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 20; ++t) {
    auto g = tge::test::random_graph(rng, 3, 5, 5);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      BigInt sum = 0;
      for (auto e : g.edges_from(v)) sum += g.edge(e).p;
      EXPECT_EQ(count_source_paths(g, 1, v), sum);
    }
  }
}

TEST(Paths, CountsMatchWordSums) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 25; ++t) {
    auto g = tge::test::random_graph(rng, 3, 4, 4);
    for (unsigned k = 1; k <= 6; ++k)
      for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        ASSERT_EQ(count_source_paths(g, k, v), tge::test::source_paths_by_words(g, k, v));
        ASSERT_EQ(count_range_paths(g, k, v), tge::test::range_paths_by_words(g, k, v));
      }
  }
}

TEST(Paths, LoopWeightExamples) {
  auto g = e_pq(2, 3);
  EXPECT_EQ(loop_weight(g, DiscreteWord{{0, 0}}).value, 5);
  auto h = two_loops();
  EXPECT_EQ(loop_weight(h, DiscreteWord{{0, 1}}).value, 1);
  EXPECT_TRUE(loop_weight(e_pq(1, 1), DiscreteWord{{0}}).degenerate);
  CircleGraph open({"x", "y"}, std::vector<EdgeSpec>{{"f", "x", "y", 1, 1}, {"g", "y", "x", 1, 1}});
  EXPECT_THROW(loop_weight(open, DiscreteWord{{0}}), PreconditionError);
}

TEST(Paths, SignedQDiscrepancy) {
  auto g = e_pq(2, -3);
  auto w = loop_weight(g, DiscreteWord{{0}});
  EXPECT_EQ(w.value, 5);        // |2 - (-3)|
  EXPECT_EQ(w.abs_q_value, 1);  // |2 - 3|
  auto t = loop_table(g, 2);
  EXPECT_TRUE(t.at(1).sign_discrepancy());
  EXPECT_FALSE(t.at(2).sign_discrepancy());  // q^2 = |q|^2
}

TEST(Paths, TorusOracleExamples) {
  EXPECT_EQ(torus_solutions_bruteforce(ExactMatrix{{2, 0}, {0, 3}}), 6);
  EXPECT_EQ(torus_solutions_bruteforce(ExactMatrix{{2, -3}, {-3, 2}}), 5);
  EXPECT_EQ(torus_solutions_bruteforce(ExactMatrix{{1}}), 1);
  EXPECT_THROW(torus_solutions_bruteforce(ExactMatrix{{1, 1}, {1, 1}}), PreconditionError);
  EXPECT_THROW(torus_solutions_bruteforce(ExactMatrix{{50, 0}, {0, 50}}, 1000), ResourceError);
}

TEST(Paths, WordWeightOracleForSingleLoop) {
  auto g = e_pq(2, 3);
  auto m = cyclic_exponent_matrix(g, DiscreteWord{{0, 0}});
  EXPECT_EQ(torus_solutions_bruteforce(m), 5);
}

TEST(Paths, LoopWeightIsCyclicInvariant) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 30; ++t) {
    auto g = tge::test::random_graph(rng, 3, 5, 4);
    for (const auto& w : enumerate_words(g, 4, true)) {
      auto base = loop_weight(g, w);
      DiscreteWord r = w;
      std::rotate(r.edges.begin(), r.edges.begin() + 1, r.edges.end());
      auto rotated = loop_weight(g, r);
      EXPECT_EQ(rotated.value, base.value);
      EXPECT_EQ(rotated.degenerate, base.degenerate);
    }
  }
}

TEST(Paths, SinglePathLoopClosedForms) {
  for (std::int64_t p = 1; p <= 5; ++p)
    for (std::int64_t q = -5; q <= 5; ++q) {
      if (q == 0 || std::gcd(p, q < 0 ? -q : q) != 1 || p == q) continue;
      auto g = e_pq(p, q);
      auto t = loop_table(g, 8);
      for (unsigned k = 1; k <= 8; ++k) {
        BigInt pk = ipow(BigInt(p), k), qk = ipow(BigInt(q), k), aqk = ipow(BigInt(q < 0 ? -q : q), k);
        EXPECT_EQ(t.at(k).loops, tge::abs(BigInt(pk - qk)));
        EXPECT_EQ(t.at(k).abs_q_loops, tge::abs(BigInt(pk - aqk)));
      }
    }
}

TEST(Paths, TwoLoopsFormula) {
  auto t = loop_table(two_loops(), 12);
  const BigInt expected[] = {3, 13, 57, 245};
  for (unsigned m = 1; m <= 4; ++m) EXPECT_EQ(t.at(m).loops, expected[m - 1]);
  for (unsigned m = 1; m <= 12; ++m) EXPECT_EQ(t.at(m).loops, tge::test::two_loops_formula(m));
  EXPECT_EQ(loop_count(two_loops(), 2), 13);
  EXPECT_EQ(loop_count(two_loops(), 1), 3);
}

TEST(Paths, LoopTableMatchesDirectWordSums) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 30; ++t) {
    auto g = tge::test::random_graph(rng, 3, 4, 4);
    auto table = loop_table(g, 6);
    for (unsigned k = 1; k <= 6; ++k) {
      std::size_t degenerate = 0;
      EXPECT_EQ(table.at(k).loops, tge::test::loops_by_words(g, k, &degenerate));
      EXPECT_EQ(table.at(k).degenerate_word.has_value(), degenerate > 0);
    }
  }
}

TEST(Paths, TraceIdentitiesAndSandwich) {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 30; ++t) {
    auto g = tge::test::random_graph(rng, 3, 3, 4);
    auto table = loop_table(g, 10);
    for (unsigned k = 1; k <= 10; ++k) {
      const auto& row = table.at(k);
      EXPECT_EQ(row.trace_P, power_trace(mat_P(g), k));
      EXPECT_EQ(row.trace_Q_abs, power_trace(mat_Q_abs(g), k));
      EXPECT_LE(tge::abs(BigInt(row.trace_P - row.trace_Q_abs)), row.loops);
      EXPECT_LE(row.loops, row.trace_P + row.trace_Q_abs);
    }
  }
}

TEST(Paths, LoopWeightMatchesTorusOracle) {
  std::mt19937_64 rng(61);
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    auto g = tge::test::random_graph(rng, 2, 3, 3, 3);
    for (unsigned k = 1; k <= 3; ++k)
      for (const auto& w : enumerate_words(g, k, true)) {
        auto lw = loop_weight(g, w);
        if (lw.degenerate || lw.value > 60) continue;
        EXPECT_EQ(torus_solutions_bruteforce(cyclic_exponent_matrix(g, w)), lw.value);
        ++checked;
      }
  }
  EXPECT_GT(checked, 50);
}

TEST(Paths, DegenerateWordsAbortLoopCount) {
  try {
    loop_count(e_pq(1, 1), 3);
    FAIL() << "expected DegenerateLoopError";
  } catch (const DegenerateLoopError& e) {
    EXPECT_EQ(e.word(), "e e e");
    EXPECT_EQ(e.length(), 3u);
  }
  // The table itself flags rather than throws.
  EXPECT_TRUE(loop_table(e_pq(1, 1), 2).has_degenerate());
}

TEST(Paths, FixedPointsAreLoops) {
  auto g = two_loops();
  for (unsigned k = 1; k <= 6; ++k) EXPECT_EQ(fixed_point_count(g, k), loop_count(g, k));
}

TEST(Paths, ThreadCountDoesNotChangeResults) {
  auto g = CircleGraph({"x", "y"}, std::vector<EdgeSpec>{{"a", "x", "y", 2, 1},
                                                         {"b", "y", "x", 1, 3},
                                                         {"c", "x", "x", 3, -2},
                                                         {"d", "y", "y", 1, 2}});
  LoopOptions one, many;
  one.threads = 1;
  many.threads = 4;
  auto a = loop_table(g, 9, one), b = loop_table(g, 9, many);
  for (unsigned k = 1; k <= 9; ++k) {
    EXPECT_EQ(a.at(k).loops, b.at(k).loops);
    EXPECT_EQ(a.at(k).degenerate_word, b.at(k).degenerate_word);
  }
}

TEST(Paths, WordCapRaisesResourceError) {
  LoopOptions opt;
  opt.word_cap = 100;
  EXPECT_THROW(loop_table(two_loops(), 10, opt), ResourceError);
}
