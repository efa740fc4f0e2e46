#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "sfsgrp/presentation.hpp"

using namespace sfsgrp;

namespace {
  std::vector<long> torsion(Presentation const& P) {
    return abelianization(P).torsion_as_longs();
  }
}  // namespace

TEST(Word, ReduceExamples) {
  EXPECT_TRUE(reduce_word({{0, 1}, {0, -1}}, 1).empty());
  EXPECT_EQ(reduce_word({{0, 2}, {0, 3}}, 1), Word::gen(0, 5));
  EXPECT_EQ(reduce_word({{0, 1}, {1, 1}, {1, -1}, {0, 1}}, 2), Word::gen(0, 2));
  EXPECT_THROW(reduce_word({{3, 1}}, 2), InvalidArgument);
}

TEST(Word, ReductionIsAssociative) {
  std::mt19937                       rng(11);
  std::uniform_int_distribution<int> g(0, 2), e(-2, 2), len(0, 8);
  auto random_word = [&] {
    std::vector<Syllable> raw;
    for (int i = len(rng); i > 0; --i) {
      raw.push_back({static_cast<std::size_t>(g(rng)), e(rng)});
    }
    return Word(raw);
  };
  for (int t = 0; t < 500; ++t) {
    Word a = random_word(), b = random_word(), c = random_word();
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_TRUE((a * a.inverse()).empty());
    ASSERT_EQ(Word(a.syllables()), a);
  }
}

TEST(Word, Commutator) {
  auto c = commutator(Word::gen(0), Word::gen(1));
  EXPECT_EQ(c.letters(), (std::vector<int>{-1, -2, 1, 2}));
}

TEST(Parse, CommutatorAndPowers) {
  auto P = parse_presentation(
      "< a,b,c,z | a^4*z, b^4*z, c^4*z, a*b*c*z^1, [z,a], [z,b], [z,c] >");
  EXPECT_EQ(P.num_generators(), 4u);
  EXPECT_EQ(P.relators().size(), 7u);
  EXPECT_EQ(P.word_to_string(P.relators()[4]), "z^-1*a^-1*z*a");
  auto Q = parse_presentation("<a,b,c,z|a^4*z,b^4*z,c^4*z,a*b*c*z,[z,a],[z,b],[z,c]>");
  EXPECT_EQ(P, Q);
}

TEST(Parse, NestedAndParentheses) {
  auto P = parse_presentation("< x, y | [[x,y],x], (x*y)^-2, x = y^3 >");
  EXPECT_EQ(P.relators()[1], (Word::gen(1, -1) * Word::gen(0, -1)).pow(2));
  EXPECT_EQ(P.relators()[2], Word::gen(0) * Word::gen(1, -3));
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_presentation("< a, b |\n a^2, q >");
    FAIL();
  } catch (ParseError const& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 7u);
  }
  EXPECT_THROW(parse_presentation("< a, a | >"), InvalidArgument);
  EXPECT_THROW(parse_presentation("< a | a^ >"), ParseError);
  EXPECT_THROW(parse_presentation("< a | a > x"), ParseError);
}

TEST(Parse, RoundTrip) {
  auto P = parse_presentation("< a,b | a^3, b^-2*a*b, [a,b]^2 >");
  EXPECT_EQ(parse_presentation(P.to_string()), P);
}

TEST(Presentation, RelatorsCyclicallyReduced) {
  Presentation P({"a", "b"}, {Word::gen(1) * Word::gen(0, 2) * Word::gen(1, -1),
                              Word::gen(0) * Word::gen(0, -1)});
  ASSERT_EQ(P.relators().size(), 1u);
  EXPECT_EQ(P.relators()[0], Word::gen(0, 2));
}

TEST(Abelianization, TriangleGroups) {
  EXPECT_EQ(torsion(parse_presentation("<a,b,c|a^3,b^3,c^4,a*b*c>")),
            (std::vector<long>{3}));
  EXPECT_EQ(torsion(parse_presentation("<a,b,c|a^4,b^4,c^4,a*b*c>")),
            (std::vector<long>{4, 4}));
  auto Z = abelianization(parse_presentation("<x|>"));
  EXPECT_EQ(Z.free_rank, 1u);
  EXPECT_TRUE(Z.torsion.empty());
  EXPECT_EQ(Z.to_string(), "Z");
}

TEST(Abelianization, MatchesMinorOracle) {
  std::mt19937                       rng(5);
  std::uniform_int_distribution<int> ng(1, 4), nr(0, 5), g(0, 3), e(-4, 4),
      len(1, 5);
  for (int t = 0; t < 300; ++t) {
    std::size_t       n = ng(rng);
    std::vector<Word> rels;
    for (int r = nr(rng); r > 0; --r) {
      std::vector<Syllable> raw;
      for (int i = len(rng); i > 0; --i) {
        raw.push_back({static_cast<std::size_t>(g(rng)) % n, e(rng)});
      }
      rels.push_back(Word(raw));
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
      names.push_back("g" + std::to_string(i));
    }
    Presentation P(names, rels);
    auto         inv = abelianization(P);
    auto         M   = P.relation_matrix();
    auto         div = elementary_divisors_oracle(M);
    std::vector<Int> nontrivial;
    for (auto const& d : div) {
      if (d > 1) {
        nontrivial.push_back(d);
      }
    }
    ASSERT_EQ(inv.torsion, nontrivial);
    ASSERT_EQ(inv.free_rank, n - div.size());
  }
}

TEST(Abelianization, TietzeStability) {
  std::mt19937 rng(99);
  auto P = parse_presentation("<a,b,c,z|a^3*z,b^3*z,c^4*z,a*b*c,[z,a],[z,b],[z,c]>");
  auto base = abelianization(P);
  for (int t = 0; t < 200; ++t) {
    auto rels = P.relators();
    std::shuffle(rels.begin(), rels.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, rels.size() - 1);
    std::size_t i = pick(rng);
    Word conj = Word::gen(pick(rng) % 4, 1 + static_cast<int>(t % 3));
    rels[i] = conj * rels[i] * conj.inverse();
    std::size_t k = pick(rng);
    rels[k] = rels[k].inverse();
    std::vector<std::size_t> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::string> names(4);
    for (std::size_t g = 0; g < 4; ++g) {
      names[perm[g]] = "x" + std::to_string(g);
    }
    for (auto& r : rels) {
      r = r.relabelled(perm);
    }
    ASSERT_EQ(abelianization(Presentation(names, rels)), base);
  }
}

TEST(Semidirect, InfiniteDihedral) {
  auto P = parse_presentation("<z|>");
  auto L = semidirect_presentation(P, {Word::gen(0, -1)}, 2);
  EXPECT_EQ(L.to_string(), "< z,t | t^2, t*z*t^-1*z >");
  EXPECT_EQ(torsion(L), (std::vector<long>{2, 2}));
}

TEST(Semidirect, IdentityActionAddsCyclicFactor) {
  auto P = parse_presentation("<x|>");
  auto L = semidirect_presentation(P, {Word::gen(0)}, 3);
  auto A = abelianization(L);
  EXPECT_EQ(A.free_rank, 1u);
  EXPECT_EQ(A.torsion_as_longs(), (std::vector<long>{3}));
  auto Q  = parse_presentation("<a,b|a^6,b^4,[a,b]^2>");
  auto L2 = semidirect_presentation(Q, {Word::gen(0), Word::gen(1)}, 5);
  auto expect = abelian_invariants_from_cyclic({6, 4, 5});
  EXPECT_EQ(abelianization(L2), expect);
  EXPECT_THROW(semidirect_presentation(Q, {Word::gen(0)}, 2), InvalidArgument);
}

TEST(DirectProduct, Examples) {
  auto A = direct_product_presentation(parse_presentation("<x|x^2>"),
                                       parse_presentation("<y|y^3>"));
  EXPECT_EQ(torsion(A), (std::vector<long>{6}));
  auto F = parse_presentation("<x,y|>");
  auto FF = direct_product_presentation(F, F);
  EXPECT_EQ(abelianization(FF).free_rank, 4u);
  EXPECT_EQ(FF.relators().size(), 4u);
  EXPECT_EQ(FF.generators(), (std::vector<std::string>{"x1", "y1", "x2", "y2"}));
  auto T = parse_presentation("<a,b,c|a^3,b^3,c^4,a*b*c>");
  auto TT = direct_product_presentation(T, T);
  auto M  = TT.relation_matrix();
  auto snf = smith_normal_form(M).nonzero_divisors();
  std::vector<long> nontriv;
  for (auto const& d : snf) {
    if (d > 1) {
      nontriv.push_back(d.get_si());
    }
  }
  EXPECT_EQ(torsion(TT), nontriv);
  EXPECT_EQ(torsion(TT), (std::vector<long>{3, 3}));
}
