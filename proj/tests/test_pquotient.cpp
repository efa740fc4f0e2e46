#include <gtest/gtest.h>

#include <set>

#include "sfsgrp/catalog.hpp"
#include "sfsgrp/pquotient.hpp"

using namespace sfsgrp;

namespace {
  // D8 as a pc group: g2^g1 = g2 g3.
  PcPresentation d8() {
    ExpVec z(3, 0), g3{0, 0, 1};
    return PcPresentation(2, {1, 1, 2}, {z, z, z}, {{}, {g3}, {z, z}});
  }
  PcPresentation q8() {
    ExpVec z(3, 0), g3{0, 0, 1};
    return PcPresentation(2, {1, 1, 2}, {g3, g3, z}, {{}, {g3}, {z, z}});
  }

  // All elements reachable by right multiplication with generators.
  std::map<std::uint64_t, std::uint64_t> histogram_by_closure(PcPresentation const& pc) {
    std::set<ExpVec>   seen{pc.identity()};
    std::vector<ExpVec> todo{pc.identity()};
    while (!todo.empty()) {
      ExpVec x = todo.back();
      todo.pop_back();
      for (std::size_t g = 0; g < pc.num_generators(); ++g) {
        ExpVec y = pc.product(x, pc.generator(g));
        if (seen.insert(y).second) {
          todo.push_back(y);
        }
      }
    }
    std::map<std::uint64_t, std::uint64_t> h;
    for (auto const& x : seen) {
      std::uint64_t o = 1;
      ExpVec        y = x;
      while (y != pc.identity()) {
        y = pc.product(y, x);
        ++o;
      }
      ++h[o];
    }
    return h;
  }

  std::map<std::uint64_t, std::uint64_t> histogram_of(FiniteGroup const& G) {
    std::map<std::uint64_t, std::uint64_t> h;
    for (auto [o, c] : G.order_histogram()) {
      h[o] = c;
    }
    return h;
  }

  // p-rank of H1 read off the abelian invariants.
  std::size_t h1_p_rank(Presentation const& P, unsigned p) {
    auto        A = abelianization(P);
    std::size_t r = A.free_rank;
    for (auto const& t : A.torsion) {
      r += t % p == 0;
    }
    return r;
  }

  Presentation gamma(std::string const& text) {
    return parse_presentation(text);
  }
  std::vector<Presentation> base_gammas() {
    return {gamma("<a,b,c,z|a^4*z,b^4*z,c^4*z,a*b*c>"),
            gamma("<a,b,c,z|a^4*z,b^4*z,c^4*z,a*b*c*z^-1>"),
            gamma("<a,b,c,z|a^4*z^-1,b^4*z,c^4*z,a*b*c>"),
            gamma("<a,b,c,z|a^4*z^-1,b^4*z,c^4*z,a*b*c*z>")};
  }
}  // namespace

TEST(PcPresentation, Collection) {
  auto D = d8();
  EXPECT_EQ(D.collect(parse_word(D.to_presentation(), "g2*g1")), (ExpVec{1, 1, 1}));
  EXPECT_EQ(D.collect(parse_word(D.to_presentation(), "g1*g1")), (ExpVec{0, 0, 0}));
  auto Q = q8();
  EXPECT_EQ(Q.collect(parse_word(Q.to_presentation(), "g1*g1")), (ExpVec{0, 0, 1}));
  EXPECT_EQ(Q.element_order(ExpVec{1, 0, 0}), 4u);
  EXPECT_EQ(D.element_order(ExpVec{1, 0, 0}), 2u);
  EXPECT_EQ(D.element_order(ExpVec{1, 1, 0}), 4u);
  EXPECT_EQ(D.order(), 8);
  EXPECT_TRUE(D.is_consistent());
  EXPECT_TRUE(Q.is_consistent());
}

TEST(PcPresentation, InverseAndPower) {
  auto Q = q8();
  for (unsigned c = 0; c < 8; ++c) {
    ExpVec x{std::uint8_t(c & 1), std::uint8_t((c >> 1) & 1), std::uint8_t(c >> 2)};
    EXPECT_EQ(Q.product(x, Q.inverse(x)), Q.identity());
    EXPECT_EQ(Q.pow(x, 3), Q.product(Q.product(x, x), x));
  }
}

TEST(PcPresentation, MatchesCatalogHistograms) {
  EXPECT_EQ(histogram_by_closure(d8()), histogram_of(build_group("D8")));
  EXPECT_EQ(histogram_by_closure(q8()), histogram_of(build_group("order8_#4")));
}

TEST(PcPresentation, DetectsInconsistency) {
  // g1^2 = g2 but g2 does not commute with g1
  ExpVec z(3, 0), g2{0, 1, 0}, g3{0, 0, 1};
  PcPresentation bad(2, {1, 2, 3}, {g2, z, z}, {{}, {g3}, {z, z}});
  EXPECT_FALSE(bad.is_consistent());
}

TEST(PcPresentation, RoundTripThroughPresentation) {
  auto D = d8();
  EXPECT_EQ(count_homs(D.to_presentation(), build_group("S3")).homs,
            count_homs(parse_presentation("<a,b|a^4,b^2,(a*b)^2>"), build_group("S3")).homs);
}

TEST(PcSubgroup, Basics) {
  auto       D = d8();
  PcSubgroup whole(D, {D.generator(0), D.generator(1)});
  EXPECT_EQ(whole.log_order(), 3u);
  PcSubgroup c4(D, {ExpVec{1, 1, 0}});
  EXPECT_EQ(c4.log_order(), 2u);
  EXPECT_TRUE(c4.contains(ExpVec{0, 0, 1}));
  EXPECT_FALSE(c4.contains(ExpVec{1, 0, 0}));
  // normal closure of a reflection
  PcSubgroup nc(D, {D.generator(0)}, {D.generator(0), D.generator(1)});
  EXPECT_EQ(nc.log_order(), 2u);
  EXPECT_EQ(pc_subgroup_abelianization(D, {ExpVec{1, 1, 0}}).torsion,
            (std::vector<Int>{4}));
}

TEST(PQuotient, FreeGroups) {
  auto F2 = parse_presentation("<a,b|>");
  auto R  = compute_pquotient(F2, 2, 3);
  ASSERT_EQ(R.stages.size(), 3u);
  EXPECT_EQ(R.stages[0].pc.order(), 4);
  // squares of both generators plus their commutator
  EXPECT_EQ(R.stages[1].pc.order(), 32);
  EXPECT_TRUE(check_pquotient(R).empty());
}

TEST(PQuotient, TerminatesOnFiniteGroups) {
  auto R = compute_pquotient(parse_presentation("<a,b|a^4,b^2,(a*b)^2>"), 2, 6);
  EXPECT_TRUE(R.terminated);
  EXPECT_EQ(R.stages.back().pc.order(), 8);
  auto Q = compute_pquotient(parse_presentation("<a,b|a^4,a^2*b^-2,b^-1*a*b*a>"), 2, 6);
  EXPECT_EQ(Q.stages.back().pc.order(), 8);
  // S3 has no nontrivial 3-quotient
  auto S = compute_pquotient(parse_presentation("<a,b|a^3,b^2,(a*b)^2>"), 3, 4);
  EXPECT_TRUE(S.stages.empty());
  auto E = compute_pquotient(parse_presentation("<a,b|a^3,b^3,(a*b)^3,(a*b^-1)^3>"), 3, 4);
  ASSERT_FALSE(E.stages.empty());
  EXPECT_EQ(E.stages.back().pc.order(), 27);
  auto C = compute_pquotient(parse_presentation("<a|a^9>"), 3, 4);
  EXPECT_EQ(C.stages.back().pc.order(), 9);
  EXPECT_EQ(C.stages.size(), 2u);
}

TEST(PQuotient, FirstStageIsElementaryAbelianQuotient) {
  for (std::string t : {"<a,b|a^4,b^2,(a*b)^2>", "<a,b,c|a^2*b^2,c^3,[a,c]>",
                        "<a,b|a^6*b^-2,[a,b]^3>", "<x,y,z|x*y*z,x^3,y^3>"}) {
    auto P = parse_presentation(t);
    for (unsigned p : {2u, 3u}) {
      auto        R = compute_pquotient(P, p, 1);
      std::size_t r = R.stages.empty() ? 0 : R.stages[0].pc.num_generators();
      EXPECT_EQ(r, h1_p_rank(P, p)) << t << " p=" << p;
    }
  }
}

TEST(PQuotient, HomCountsMatchSmallTwoGroups) {
  auto P = parse_presentation("<a,b,c|a^4,b^4,c^4,a*b*c>");
  auto R = compute_pquotient(P, 2, 2);
  ASSERT_EQ(R.stages.size(), 2u);
  for (auto const& k : catalog_up_to(16)) {
    auto T = build_group(k);
    auto c = exponent_p_class(T, 2);
    if (!c || *c > 2) {
      continue;
    }
    auto x = pquotient_hom_crosscheck(P, R.stages[1], T);
    EXPECT_TRUE(x.equal) << x.target << " " << x.source_homs << " vs " << x.stage_homs;
  }
}

TEST(PQuotient, CrosscheckRejectsLargeClass) {
  auto P = parse_presentation("<a,b|>");
  auto R = compute_pquotient(P, 2, 1);
  EXPECT_THROW(pquotient_hom_crosscheck(P, R.stages[0], build_group("C4")),
               InvalidArgument);
  EXPECT_THROW(pquotient_hom_crosscheck(P, R.stages[0], build_group("S3")),
               InvalidArgument);
}

TEST(PQuotient, ExponentPClass) {
  EXPECT_EQ(exponent_p_class(build_group("C2"), 2), 1u);
  EXPECT_EQ(exponent_p_class(build_group("C4"), 2), 2u);
  EXPECT_EQ(exponent_p_class(build_group("C8"), 2), 3u);
  EXPECT_EQ(exponent_p_class(build_group("D8"), 2), 2u);
  EXPECT_EQ(exponent_p_class(build_group("S3"), 2), std::nullopt);
}

TEST(PQuotient, TriangleStagesAgreeWithEnumeration) {
  // Delta(4,4,4) stage 3 against catalog 2-groups of class <= 3
  auto P = parse_presentation("<a,b|a^4,b^4,(a*b)^4>");
  auto R = compute_pquotient(P, 2, 3);
  EXPECT_TRUE(check_pquotient(R).empty());
  for (std::string k : {"C8", "D8", "D16", "order16_#4", "order16_#3", "order16_#8"}) {
    auto T = build_group(k);
    auto c = exponent_p_class(T, 2);
    ASSERT_TRUE(c.has_value());
    if (*c > 3) {
      continue;
    }
    EXPECT_TRUE(pquotient_hom_crosscheck(P, R.stages[2], T).equal) << k;
  }
}

TEST(PQuotient, GammaStages) {
  for (auto const& G : base_gammas()) {
    auto R = compute_pquotient(G, 2, 3);
    ASSERT_EQ(R.stages.size(), 3u);
    EXPECT_EQ(R.stages[0].pc.order(), 4);
    EXPECT_TRUE(check_pquotient(R).empty());
    std::size_t zi = 3;
    EXPECT_EQ(R.stages[0].pc.element_order(R.stages[0].images[zi]), 1u);
    EXPECT_EQ(R.stages[1].pc.element_order(R.stages[1].images[zi]), 1u);
    EXPECT_LE(R.stages[2].pc.element_order(R.stages[2].images[zi]), 2u);
  }
}

TEST(Profile, SmallGroups) {
  ExpVec          z1(1, 0);
  PcPresentation  c2(2, {1}, {z1}, {{}});
  auto            pr = invariant_profile(c2);
  EXPECT_EQ(pr.histogram, (std::map<std::uint64_t, std::uint64_t>{{1, 1}, {2, 1}}));
  EXPECT_EQ(pr.log_center, 1u);

  auto R  = compute_pquotient(parse_presentation("<a,b,c|a^2,b^2,c^2,[a,b],[a,c],[b,c]>"), 2, 1);
  auto e3 = invariant_profile(R.stages[0].pc);
  EXPECT_EQ(e3.log_center, 3u);
  EXPECT_EQ(e3.exponent, 2u);
  EXPECT_EQ(e3.power_image, 1u);

  auto pd = invariant_profile(d8()), pq = invariant_profile(q8());
  EXPECT_EQ(pd.log_center, 1u);
  EXPECT_EQ(pd.log_derived, 1u);
  EXPECT_EQ(first_profile_difference(pd, pq), std::optional<std::string>("element order histogram"));
  EXPECT_EQ(first_profile_difference(pd, pd), std::nullopt);
}

TEST(PcEpimorphism, FindsAndRefutes) {
  auto D = d8();
  auto r = find_pc_epimorphism(parse_presentation("<a,b|a^4,b^2,(a*b)^2>"), D);
  ASSERT_TRUE(r.images.has_value());
  // images satisfy the relators and generate
  ExpVec a = (*r.images)[0], b = (*r.images)[1];
  EXPECT_EQ(D.pow(a, 4), D.identity());
  EXPECT_EQ(D.pow(D.product(a, b), 2), D.identity());
  EXPECT_EQ(PcSubgroup(D, {a, b}).log_order(), 3u);

  EXPECT_FALSE(find_pc_epimorphism(parse_presentation("<a,b|a^2,b^2>"), q8()).images);
  EXPECT_FALSE(find_pc_epimorphism(parse_presentation("<a,b|a^4,b^4,[a,b]>"), D).images);
  EXPECT_TRUE(find_pc_epimorphism(parse_presentation("<a,b|a^4,b^4>"), q8()).images);
}

TEST(PcEpimorphism, GammaStageFourQuotientsAreShared) {
  auto G = base_gammas();
  auto A = compute_pquotient(G[0], 2, 4), B = compute_pquotient(G[3], 2, 4);
  EXPECT_TRUE(find_pc_epimorphism(G[0], B.stages[3].pc).images);
  EXPECT_TRUE(find_pc_epimorphism(G[3], A.stages[3].pc).images);
}
