#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace tge;
using tge::test::e_pq;
using tge::test::fixture;
using tge::test::two_loops;

namespace {

VertexFunction unit_at(std::size_t v) { return LaurentPoly::unit(v); }

BimoduleVector xi(const CircleGraph& g, std::size_t edge, std::int64_t k) {
  (void)g;
  return BimoduleVector::on_edge(edge, Laurent::monomial(k - 1), true);
}

/// Random vector with unnormalized monomial components.
BimoduleVector random_vector(std::mt19937_64& rng, const CircleGraph& g) {
  std::uniform_int_distribution<std::size_t> edge(0, g.edge_count() - 1);
  std::uniform_int_distribution<int> exp(-4, 4), c(-3, 3);
  BimoduleVector v;
  for (int i = 0; i < 3; ++i) {
    int coef = c(rng);
    if (coef != 0) v += BimoduleVector::on_edge(edge(rng), Laurent::monomial(exp(rng), Gauss(coef)));
  }
  return v;
}

}  // namespace

TEST(Bimodule, StandardBasisShape) {
  auto g = e_pq(2, 3);
  auto b = std_basis(g);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1], BimoduleVector::on_edge(0, Laurent::monomial(1), true));
  auto h = two_loops();
  auto c = std_basis(h);
  ASSERT_EQ(c.size(), 3u);
  // Third vector is the constant on the second edge; p = 1 so its flag resolves away.
  EXPECT_EQ(resolve_flags(h, c[2]), BimoduleVector::on_edge(1, Laurent::constant(1)));
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    auto r = tge::test::random_graph(rng, 3, 5, 4);
    EXPECT_EQ(std_basis(r).size(), r.total_degree());
  }
}

TEST(Bimodule, OrthonormalityExamples) {
  auto g = e_pq(2, 3);
  EXPECT_TRUE(inner(g, xi(g, 0, 1), xi(g, 0, 2)).is_zero());
  EXPECT_EQ(inner(g, xi(g, 0, 1), xi(g, 0, 1)), unit_at(0));
  auto sum = xi(g, 0, 1) + xi(g, 0, 2);
  EXPECT_EQ(inner(g, sum, sum), VertexFunction(LaurentPoly{0, Laurent::constant(2)}));
}

TEST(Bimodule, UnresolvedNormalizerIsAnError) {
  auto g = e_pq(2, 3);
  auto plain = BimoduleVector::on_edge(0, Laurent::constant(1));
  EXPECT_THROW(inner(g, xi(g, 0, 1), plain), PreconditionError);
}

TEST(Bimodule, LeftActionExamples) {
  auto g = two_loops();
  auto u = LaurentPoly::generator(0);
  EXPECT_EQ(act_left(g, u, xi(g, 0, 1)), xi(g, 0, 2));
  EXPECT_EQ(act_left(g, u, xi(g, 1, 1)), act_right(g, xi(g, 1, 1), LaurentPoly::generator(0, 3)));
  auto v = xi(g, 0, 2) + xi(g, 1, 1);
  EXPECT_EQ(act_right(g, v, LaurentPoly::unit(0)), v);
}

TEST(Bimodule, WrapRuleOracle) {
  for (std::int64_t p = 1; p <= 5; ++p)
    for (std::int64_t q = -5; q <= 5; ++q) {
      if (q == 0) continue;
      auto g = e_pq(p, q);
      auto u = LaurentPoly::generator(0);
      for (std::int64_t k = 1; k <= p; ++k) {
        auto w = tge::test::wrap_rule(p, q, k);
        ASSERT_GE(w.k, 1);
        ASSERT_LE(w.k, p);
        EXPECT_EQ(act_left(g, u, xi(g, 0, k)),
                  act_right(g, xi(g, 0, w.k), LaurentPoly::generator(0, w.power)))
            << "p=" << p << " q=" << q << " k=" << k;
      }
    }
}

TEST(Bimodule, ActionAdjointnessAndRightLinearity) {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 40; ++t) {
    auto g = tge::test::random_graph(rng, 2, 4, 3);
    auto a = random_vector(rng, g), b = random_vector(rng, g);
    std::uniform_int_distribution<std::size_t> vd(0, g.vertex_count() - 1);
    LaurentPoly f{vd(rng), Laurent::monomial(1, Gauss(2)) + Laurent::monomial(-2, Gauss(0, 1))};
    EXPECT_EQ(inner(g, act_left(g, f, a), b), inner(g, a, act_left(g, f.adjoint(), b)));
    EXPECT_EQ(inner(g, a, act_right(g, b, f)), inner(g, a, b) * VertexFunction(f));
  }
}

TEST(Bimodule, VerifyBasisPasses) {
  for (std::int64_t p = 1; p <= 5; ++p)
    for (std::int64_t q : {-3, 1, 2, 3}) EXPECT_TRUE(verify_basis(e_pq(p, q)).pass) << p << "," << q;
  EXPECT_TRUE(verify_basis(two_loops()).pass);
  std::mt19937_64 rng(97);
  for (int t = 0; t < 20; ++t) {
    auto g = tge::test::random_graph(rng, 3, 4, 3);
    if (g.total_degree() > 12) continue;
    auto r = verify_basis(g);
    EXPECT_TRUE(r.pass) << r.failed_identity;
  }
}

TEST(Bimodule, CorruptedBasisFailsOnZ) {
  auto g = e_pq(2, 3);
  auto basis = std_basis(g);
  basis.erase(basis.begin() + 1);
  auto r = verify_basis(g, basis);
  EXPECT_FALSE(r.pass);
  EXPECT_NE(r.failed_identity.find("z^1"), std::string::npos) << r.failed_identity;
  EXPECT_NE(r.lhs, r.rhs);
}

TEST(Bimodule, LeftActionMatrices) {
  auto g = two_loops();
  const auto golden = nlohmann::json::parse(read_file(fixture("golden/left_action_two_loops.json")));
  EXPECT_EQ(nlohmann::json::parse(laurent_matrix_json(g, left_action_matrix(g, "v")).dump()), golden);

  auto e23 = e_pq(2, 3);
  const auto golden23 = nlohmann::json::parse(read_file(fixture("golden/left_action_e23.json")));
  EXPECT_EQ(nlohmann::json::parse(laurent_matrix_json(e23, left_action_matrix(e23, 0)).dump()), golden23);

  auto m = left_action_matrix(e_pq(1, -4), 0);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m(0, 0), VertexFunction(LaurentPoly::generator(0, -4)));
}

TEST(Bimodule, LeftActionIsPartialIsometry) {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 20; ++t) {
    auto g = tge::test::random_graph(rng, 3, 4, 3);
    SymbolGraph sg(g);
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
      auto m = left_action_matrix(g, v);
      auto prod = m * m.adjoint();
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
          const std::size_t e = sg.symbol(i).edge;
          if (i == j && g.edge(e).range == v)
            EXPECT_EQ(prod(i, j), unit_at(g.edge(e).source));
          else
            EXPECT_TRUE(prod(i, j).is_zero());
        }
    }
  }
}

TEST(Bimodule, PsiEmbedLevelZero) {
  auto g = two_loops();
  SymbolGraph sg(g);
  auto u = LaurentMatrix::scalar(LaurentPoly::generator(0));
  EXPECT_EQ(psi_embed(g, u), left_action_matrix(g, 0));
  EXPECT_EQ(psi_embed(g, sg, LaurentMatrix::identity(g, sg, 1)), LaurentMatrix::identity(g, sg, 2));
  EXPECT_EQ(psi_embed(g, sg, LaurentMatrix::identity(g, sg, 0)), LaurentMatrix::identity(g, sg, 1));
}

TEST(Bimodule, PsiEmbedTwiceOnSingleLoop) {
  // Substituting the 2x2 matrix ((0,u^2),(u,0)) into itself entrywise.
  auto g = e_pq(2, 3);
  SymbolGraph sg(g);
  auto m2 = psi_embed(g, sg, psi_embed(g, sg, LaurentMatrix::scalar(LaurentPoly::generator(0))));
  ASSERT_EQ(m2.size(), 4u);
  auto u2 = left_action_matrix(g, sg, VertexFunction(LaurentPoly::generator(0, 2)));
  auto u1 = left_action_matrix(g, 0);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) {
      const auto outer = u1(r, c);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
          const auto& entry = m2(2 * r + i, 2 * c + j);
          if (outer.is_zero())
            EXPECT_TRUE(entry.is_zero());
          else if (outer == VertexFunction(LaurentPoly::generator(0, 2)))
            EXPECT_EQ(entry, u2(i, j));
          else
            EXPECT_EQ(entry, u1(i, j));
        }
    }
}

TEST(Bimodule, PsiEmbedIsUnitalStarHomomorphism) {
  std::mt19937_64 rng(103);
  for (int t = 0; t < 20; ++t) {
    auto g = tge::test::random_graph(rng, 2, 3, 2);
    SymbolGraph sg(g);
    if (sg.size() > 3) continue;
    // Random level-1 matrices with entries localized at the index sources.
    auto make = [&] {
      LaurentMatrix m(1, symbol_paths(sg, 1));
      std::uniform_int_distribution<int> c(-2, 2), e(-2, 2);
      for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) {
          const std::size_t vi = g.edge(sg.symbol(i).edge).source;
          const std::size_t vj = g.edge(sg.symbol(j).edge).source;
          const int coef = c(rng);
          if (vi == vj && coef != 0)
            m(i, j) = LaurentPoly{vi, Laurent::monomial(e(rng), Gauss(coef))};
        }
      return m;
    };
    auto a = make(), b = make();
    EXPECT_EQ(psi_embed(g, sg, a * b), psi_embed(g, sg, a) * psi_embed(g, sg, b));
    EXPECT_EQ(psi_embed(g, sg, a.adjoint()), psi_embed(g, sg, a).adjoint());
  }
}

TEST(Bimodule, PsiEmbedRejectsMislocalizedEntries) {
  CircleGraph g({"x", "y"}, std::vector<EdgeSpec>{{"f", "x", "y", 1, 1}, {"g", "y", "x", 1, 1}});
  SymbolGraph sg(g);
  LaurentMatrix m(1, symbol_paths(sg, 1));
  // Symbol (f,1) has source x; put an entry at y.
  m(0, 0) = LaurentPoly::unit(1);
  EXPECT_THROW(psi_embed(g, sg, m), VertexMismatch);
}
