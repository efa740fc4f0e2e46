#include <gtest/gtest.h>

#include <cmath>

#include "sfsgrp/catalog.hpp"
#include "sfsgrp/hom_search.hpp"

using namespace sfsgrp;

namespace {
  // Plain enumeration over all generator tuples.
  std::pair<std::uint64_t, std::uint64_t> brute(Presentation const& P,
                                                FiniteGroup const&  G) {
    std::size_t       n = P.num_generators();
    std::vector<Elem> im(n, 0);
    std::uint64_t     homs = 0, epis = 0;
    while (true) {
      bool ok = true;
      for (auto const& r : P.relators()) {
        ok = ok && G.evaluate(r, im) == G.identity();
      }
      if (ok) {
        ++homs;
        epis += G.subgroup_closure(im).size() == G.order();
      }
      std::size_t i = 0;
      while (i < n && ++im[i] == G.order()) {
        im[i++] = 0;
      }
      if (i == n) {
        break;
      }
    }
    return {homs, epis};
  }

  std::uint64_t brute_product(Presentation const& P, FiniteGroup const& G) {
    std::size_t       n = P.num_generators();
    std::vector<Elem> im(n, 0);
    std::vector<std::vector<Elem>> homs;
    while (true) {
      bool ok = true;
      for (auto const& r : P.relators()) {
        ok = ok && G.evaluate(r, im) == G.identity();
      }
      if (ok) {
        homs.push_back(im);
      }
      std::size_t i = 0;
      while (i < n && ++im[i] == G.order()) {
        im[i++] = 0;
      }
      if (i == n) {
        break;
      }
    }
    std::uint64_t count = 0;
    for (auto const& a : homs) {
      for (auto const& b : homs) {
        bool ok = true;
        for (Elem x : a) {
          for (Elem y : b) {
            ok = ok && G.mul(x, y) == G.mul(y, x);
          }
        }
        count += ok;
      }
    }
    return count;
  }

  // |Hom(A, T)| for abelian T from the invariants of A.
  std::uint64_t abelian_hom_count(AbelianInvariants const& A,
                                  FiniteGroup const&       T) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < std::size_t(A.free_rank); ++i) {
      total *= T.order();
    }
    for (long d : A.torsion_as_longs()) {
      std::uint64_t k = 0;
      for (Elem t = 0; t < T.order(); ++t) {
        k += T.pow(t, d) == T.identity();
      }
      total *= k;
    }
    return total;
  }

  std::vector<std::string> const small_targets = {
      "C2", "C3", "C4", "S3", "D8", "order8_#4", "A4", "D10", "order16_#3", "order16_#9", "S4"};
  std::vector<std::string> const small_groups = {
      "<x|x^2>",
      "<a,b,c|a^3,b^3,c^4,a*b*c>",
      "<a,b|a^2,b^3>",
      "<a,b|[a,b]>",
      "<a,b|a^2*b^-2>",
      "<a,b|a*b*a^-1*b^-2>",
      "<a,b,c|a^2,b^2,c^2,(a*b)^3,(b*c)^3,(a*c)^2>",
      "<x,y,z|x*y*z,x^2*z^-2>",
  };
}  // namespace

TEST(HomSearch, SmallExamples) {
  auto c = count_homs(parse_presentation("<x|x^2>"), build_group("C2"));
  EXPECT_EQ(c.homs, 2u);
  EXPECT_EQ(c.epis, 1u);
  auto d = count_homs(parse_presentation("<a,b,c|a^3,b^3,c^4,a*b*c>"),
                      build_group("C3"));
  EXPECT_EQ(d.homs, 3u);
  EXPECT_EQ(d.epis, 2u);
  auto e = count_homs(parse_presentation("<a,b,c|a^4,b^4,c^4,a*b*c>"),
                      build_group("C3"));
  EXPECT_EQ(e.epis, 0u);
  EXPECT_EQ(e.homs, 1u);
}

TEST(HomSearch, ProductExamples) {
  // x -> {1, r, r^2} and all such pairs commute
  auto P = parse_presentation("<x|x^3>");
  EXPECT_EQ(count_homs_product(P, build_group("S3")).homs, 9u);
  EXPECT_EQ(brute_product(P, build_group("S3")), 9u);
  EXPECT_EQ(count_homs_product(parse_presentation("<a,b,c|a^3,b^3,c^4,a*b*c>"),
                               build_group("C3"))
                .homs,
            9u);
}

TEST(HomSearch, AgreesWithPlainEnumeration) {
  for (auto const& text : small_groups) {
    auto P = parse_presentation(text);
    for (auto const& key : small_targets) {
      auto G = build_group(key);
      if (std::pow(double(G.order()), double(P.num_generators())) > 2e6) {
        continue;
      }
      auto [h, e] = brute(P, G);
      for (bool tz : {false, true}) {
        for (bool cr : {false, true}) {
          for (bool tr : {false, true}) {
            HomSearchOptions o;
            o.tietze       = tz;
            o.class_reps   = cr;
            o.transporters = tr;
            auto c         = count_homs(P, G, o);
            EXPECT_EQ(c.homs, h) << text << " -> " << key;
            EXPECT_EQ(c.epis, e) << text << " -> " << key;
          }
        }
      }
    }
  }
}

TEST(HomSearch, ProductAgreesWithDirectProduct) {
  for (auto const& text : {"<x|x^2>", "<x|x^3>", "<a,b|a^2,b^2>", "<a,b|[a,b]>"}) {
    auto P  = parse_presentation(text);
    auto PP = direct_product_presentation(P, P);
    for (auto const& key : {"C2", "C4", "S3", "D8", "order8_#4"}) {
      auto G = build_group(key);
      auto c = count_homs_product(P, G);
      EXPECT_EQ(c.homs, brute_product(P, G)) << text << " " << key;
      auto d = count_homs(PP, G);
      EXPECT_EQ(c.homs, d.homs) << text << " " << key;
      EXPECT_EQ(c.epis, d.epis) << text << " " << key;
    }
  }
}

TEST(HomSearch, AbelianTargetsDependOnlyOnH1) {
  for (auto const& text : small_groups) {
    auto P = parse_presentation(text);
    auto A = abelianization(P);
    for (auto const& key : {"C2", "C3", "C4", "C6", "order16_#2", "order16_#14"}) {
      auto G = build_group(key);
      ASSERT_TRUE(G.is_abelian());
      EXPECT_EQ(count_homs(P, G).homs, abelian_hom_count(A, G)) << text << key;
    }
  }
}

TEST(HomSearch, TriangleOntoPsl27) {
  auto c = count_homs(parse_presentation("<a,b,c|a^2,b^3,c^7,a*b*c>"),
                      *catalog_group("PSL2_7"));
  EXPECT_GT(c.epis, 0u);
  // every nontrivial hom is onto since PSL(2,7) is simple and (2,3,7) is perfect
  EXPECT_EQ(c.epis + 1, c.homs);
}

TEST(HomSearch, BudgetIsReported) {
  HomSearchOptions o;
  o.max_nodes = 50;
  EXPECT_THROW(count_homs(parse_presentation("<a,b|>"), build_group("S4"), o),
               BudgetExceeded);
}

TEST(HomSearch, EliminationKeepsTheGroup) {
  auto P = parse_presentation("<a,b,c,z|a^4*z,b^4*z,c^4*z,a*b*c*z^2,[a,z],[b,z],[c,z]>");
  auto E = eliminate_generators(P);
  EXPECT_LT(E.reduced.num_generators(), P.num_generators());
  EXPECT_EQ(abelianization(E.reduced), abelianization(P));
  auto G = build_group("order16_#3");
  EXPECT_EQ(count_homs(P, G).homs, brute(P, G).first);
}

TEST(Fingerprint, SortedAndStable) {
  auto P  = parse_presentation("<a,b|a^2,b^3>");
  auto F1 = fingerprint(P, {parse_catalog_key("S4"), parse_catalog_key("C2"),
                            parse_catalog_key("A5"), parse_catalog_key("C6")});
  ASSERT_EQ(F1.entries.size(), 4u);
  EXPECT_EQ(F1.entries[0].key.to_string(), "C2");
  EXPECT_EQ(F1.entries[1].key.to_string(), "C6");
  EXPECT_EQ(F1.entries[3].key.to_string(), "A5");
  auto F2 = fingerprint(P, {parse_catalog_key("A5"), parse_catalog_key("C6"),
                            parse_catalog_key("S4"), parse_catalog_key("C2")});
  EXPECT_TRUE(F1 == F2);
  HomSearchOptions tiny;
  tiny.max_nodes = 3;
  auto F3 = fingerprint(P, {parse_catalog_key("A5")}, tiny);
  EXPECT_FALSE(F3.entries[0].count.has_value());
  EXPECT_FALSE(F3.entries[0].error.empty());
}

TEST(Lattice, SubgroupCounts) {
  // known subgroup counts
  std::vector<std::pair<std::string, std::size_t>> cases = {
      {"C2", 2}, {"C6", 4}, {"S3", 6}, {"D8", 10}, {"order8_#4", 6}, {"A4", 10},
      {"S4", 30}, {"A5", 59}, {"order16_#14", 67}};
  for (auto const& [key, n] : cases) {
    auto G = build_group(key);
    SubgroupLattice L(G);
    EXPECT_EQ(L.size(), n) << key;
    EXPECT_EQ(L.order_of(L.whole()), G.order());
  }
}

TEST(Lattice, NormalClosureMatchesGroup) {
  auto G = build_group("S4");
  SubgroupLattice L(G);
  for (Elem x = 0; x < G.order(); ++x) {
    auto N = L.normal_closure({x}, G.generators());
    EXPECT_EQ(L.order_of(N), G.normal_closure({x}).size());
  }
}

TEST(Density, SingleAndPairs) {
  auto F2 = parse_presentation("<a,b|>");
  // <a^2, b> is proper in F2 and detected by C2
  auto r = density_check(F2, {Word::gen(0, 2), Word::gen(1)}, build_group("C2"));
  EXPECT_FALSE(r.passed);
  // <a, b*a*b^-1, b> is everything
  auto s = density_check(F2, {Word::gen(0), Word::gen(1)}, build_group("S3"));
  EXPECT_TRUE(s.passed);
  // the diagonal of Z x Z misses C2 x C2
  auto Z = parse_presentation("<x|>");
  auto d = density_check_pairs(Z, {{Word::gen(0), Word::gen(0)}}, build_group("C2"));
  EXPECT_FALSE(d.passed);
  // the diagonal of S3 x S3 inside itself into S3: pairs (phi, 1) fail
  auto S3 = parse_presentation("<a,b|a^2,b^3,(a*b)^2>");
  auto e  = density_check_pairs(S3, {{Word::gen(0), Word::gen(0)}, {Word::gen(1), Word::gen(1)}},
                                build_group("S3"));
  EXPECT_FALSE(e.passed);
  EXPECT_GT(e.failures, 0u);
  EXPECT_GT(e.maps_checked, e.failures);
}

TEST(Density, AbelianShortcutAgreesWithEnumeration) {
  auto F2 = parse_presentation("<a,b|>");
  std::vector<std::vector<Word>> subs = {
      {Word::gen(0, 2), Word::gen(1)},
      {Word::gen(0, 3), Word::gen(1)},
      {Word::gen(0), Word::gen(1, 5)},
      {Word::gen(0) * Word::gen(1)},
      {Word::gen(0), Word::gen(1)}};
  for (auto const& sub : subs) {
    for (auto const& key : {"C2", "C3", "C4", "C5", "C6"}) {
      auto G = build_group(key);
      auto r = density_check(F2, sub, G);
      bool ok = true;
      for (Elem x = 0; x < G.order(); ++x) {
        for (Elem y = 0; y < G.order(); ++y) {
          std::vector<Elem> im = {x, y}, s;
          for (auto const& w : sub) {
            s.push_back(G.evaluate(w, im));
          }
          ok = ok && G.subgroup_closure(s).size() == G.subgroup_closure(im).size();
        }
      }
      EXPECT_EQ(r.passed, ok) << key;
    }
  }
}

TEST(SimpleScan, SmallCases) {
  auto Z = parse_presentation("<x|>");
  auto s = simple_quotient_scan(Z, 60);
  EXPECT_EQ(s.quotients.front(), "C2");
  EXPECT_EQ(std::count(s.quotients.begin(), s.quotients.end(), "A5"), 0);
  auto T = parse_presentation("<a,b,c|a^2,b^3,c^5,a*b*c>");
  auto t = simple_quotient_scan(T, 200);
  EXPECT_EQ(t.quotients, (std::vector<std::string>{"A5"}));
  auto H = parse_presentation("<a,b,c,d|b^-1*a*b*a^-2,c^-1*b*c*b^-2,d^-1*c*d*c^-2,a^-1*d*a*d^-2>");
  EXPECT_TRUE(simple_quotient_scan(H, 200).quotients.empty());
  EXPECT_THROW(simple_quotient_scan(H, 20000), InvalidArgument);
}
