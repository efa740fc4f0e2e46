#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "sfsgrp/catalog.hpp"

using namespace sfsgrp;

namespace {

  // Canonical isomorphism-class name for catalog keys known to coincide.
  std::string iso_class(std::string const& key) {
    static std::map<std::string, std::string> const alias = {
        {"order2_#1", "C2"},   {"order3_#1", "C3"},   {"order4_#1", "C4"},
        {"order5_#1", "C5"},   {"order6_#2", "C6"},   {"order7_#1", "C7"},
        {"order8_#1", "C8"},   {"order9_#1", "C9"},   {"order10_#2", "C10"},
        {"order11_#1", "C11"}, {"order12_#2", "C12"}, {"order16_#1", "C16"},
        {"order4_#2", "D4"},   {"order6_#1", "D6"},   {"S3", "D6"},
        {"order8_#3", "D8"},   {"order10_#1", "D10"}, {"order12_#4", "D12"},
        {"order16_#7", "D16"}, {"order12_#3", "A4"},  {"PSL2_4", "A5"},
        {"PSL2_5", "A5"},      {"PSL2_9", "A6"},
    };
    auto it = alias.find(key);
    return it == alias.end() ? key : it->second;
  }

  struct Signature {
    std::size_t                        order;
    AbelianInvariants                  ab;
    std::map<std::size_t, std::size_t> hist;
    std::size_t                        center;
    bool operator<(Signature const& o) const {
      return std::tie(order, hist, center) < std::tie(o.order, o.hist, o.center)
             || (std::tie(order, hist, center) == std::tie(o.order, o.hist, o.center)
                 && ab.to_string() < o.ab.to_string());
    }
  };

}  // namespace

TEST(Catalog, BasicOrders) {
  EXPECT_EQ(build_group("C3").order(), 3u);
  EXPECT_EQ(build_group("A5").order(), 60u);
  auto G = build_group("PSL2_7");
  EXPECT_EQ(G.order(), 168u);  // 7 * 48 / 2
  EXPECT_EQ(G.subgroup_closure(G.generators()).size(), 168u);
}

TEST(Catalog, KeyParsing) {
  EXPECT_EQ(parse_catalog_key("order16_#3").to_string(), "order16_#3");
  EXPECT_EQ(parse_catalog_key("PSL2_27").to_string(), "PSL2_27");
  EXPECT_THROW(parse_catalog_key("PSL2_6"), InvalidArgument);
  EXPECT_THROW(parse_catalog_key("D7"), InvalidArgument);
  EXPECT_THROW(parse_catalog_key("order16_#15"), InvalidArgument);
  EXPECT_THROW(parse_catalog_key("X3"), InvalidArgument);
  EXPECT_THROW(build_group("PSL2_27", 5000), BudgetExceeded);
}

TEST(Catalog, AllGroupsSatisfyGroupAxioms) {
  std::mt19937 rng(3);
  for (auto const& key : default_catalog()) {
    auto const& G = *catalog_group(key.to_string());
    ASSERT_EQ(G.order(), catalog_order(key)) << key.to_string();
    for (Elem x = 0; x < G.order(); ++x) {
      ASSERT_EQ(G.mul(x, G.identity()), x);
      ASSERT_EQ(G.mul(G.identity(), x), x);
      ASSERT_EQ(G.mul(x, G.inv(x)), G.identity());
    }
    std::uniform_int_distribution<Elem> pick(0, Elem(G.order() - 1));
    int const trials = G.order() > 1000 ? 2000 : 10000;
    for (int t = 0; t < trials; ++t) {
      Elem a = pick(rng), b = pick(rng), c = pick(rng);
      ASSERT_EQ(G.mul(G.mul(a, b), c), G.mul(a, G.mul(b, c))) << key.to_string();
    }
    ASSERT_EQ(G.subgroup_closure(G.generators()).size(), G.order());
  }
}

TEST(Catalog, SimpleGroupsAreSimple) {
  for (auto const& key : nonabelian_simple_catalog(10000)) {
    auto const& G = *catalog_group(key.to_string());
    EXPECT_EQ(G.derived_subgroup().size(), G.order()) << key.to_string();
    for (std::size_t c = 1; c < G.num_classes(); ++c) {
      Elem x = G.class_reps()[c];
      ASSERT_EQ(G.normal_closure({x}).size(), G.order()) << key.to_string();
    }
  }
  EXPECT_EQ(nonabelian_simple_catalog(10000).size(), 16u);
  EXPECT_EQ(nonabelian_simple_catalog(8000).size(), 15u);
}

TEST(Catalog, IntegrityDistinguishesIsomorphismTypes) {
  std::map<Signature, std::set<std::string>> by_sig;
  for (auto const& key : catalog_up_to(200)) {
    auto const& G = *catalog_group(key.to_string());
    Signature   s{G.order(), abelian_invariants(G), G.order_histogram(),
                G.center().size()};
    by_sig[s].insert(iso_class(key.to_string()));
  }
  for (auto const& [sig, classes] : by_sig) {
    EXPECT_EQ(classes.size(), 1u) << *classes.begin() << " collides";
  }
}

TEST(Catalog, AbelianInvariantsOfSmallGroups) {
  EXPECT_EQ(abelian_invariants(build_group("S4")).to_string(), "C2");
  EXPECT_EQ(abelian_invariants(build_group("order16_#2")).to_string(), "C4 x C4");
  EXPECT_EQ(abelian_invariants(build_group("C12")).to_string(), "C12");
  EXPECT_EQ(abelian_invariants(build_group("order8_#5")).to_string(),
            "C2 x C2 x C2");
  EXPECT_EQ(abelian_invariants(build_group("A5")).to_string(), "1");
  EXPECT_EQ(abelian_invariants(build_group("order8_#4")).to_string(), "C2 x C2");
}

TEST(Subgroups, Closure) {
  auto S4 = build_group("S4");
  EXPECT_EQ(S4.subgroup_closure({}), std::vector<Elem>{S4.identity()});
  std::optional<Elem> four;
  for (Elem x = 0; x < S4.order(); ++x) {
    if (S4.element_order(x) == 4) {
      four = x;
      break;
    }
  }
  ASSERT_TRUE(four);
  EXPECT_EQ(S4.subgroup_closure({*four}).size(), 4u);
  EXPECT_FALSE(S4.generates({*four}));
  EXPECT_TRUE(S4.generates(S4.generators()));
}

TEST(Transporter, Examples) {
  auto S3 = build_group("S3");
  // degree-3 points: (0 1) and (0 2)
  auto t01 = *S3.find({1, 0, 2});
  auto t02 = *S3.find({2, 1, 0});
  auto T   = S3.transporter(t01, t02);
  EXPECT_EQ(T.size(), 2u);
  std::size_t scan = 0;
  for (Elem g = 0; g < S3.order(); ++g) {
    scan += S3.conj(t01, g) == t02;
  }
  EXPECT_EQ(scan, 2u);
  auto C5 = build_group("C5");
  EXPECT_TRUE(C5.transporter(1, 2).empty());
  EXPECT_EQ(C5.transporter(0, 0).size(), 5u);
}

TEST(Transporter, ExhaustiveSmallGroups) {
  for (auto const& key : catalog_up_to(200)) {
    auto const& G = *catalog_group(key.to_string());
    if (G.order() > 60 && key.family == Family::explicit_pc) {
      continue;
    }
    for (Elem x = 0; x < G.order(); ++x) {
      std::size_t cx = G.centralizer_order(x);
      for (Elem y = 0; y < G.order(); ++y) {
        auto T = G.transporter(x, y);
        ASSERT_TRUE(T.empty() || T.size() == cx);
        for (Elem g : T) {
          ASSERT_EQ(G.conj(x, g), y);
        }
        if (T.empty()) {
          ASSERT_NE(G.class_of(x), G.class_of(y));
        }
      }
    }
  }
}

TEST(GaloisField, FieldAxiomsSmall) {
  for (unsigned q : {4u, 8u, 9u, 16u, 25u, 27u}) {
    GaloisField F(q);
    for (unsigned a = 1; a < q; ++a) {
      ASSERT_EQ(F.mul(a, F.inv(a)), 1u);
      ASSERT_EQ(F.add(a, F.neg(a)), 0u);
      for (unsigned b = 0; b < q; ++b) {
        for (unsigned c = 0; c < q; c += 3) {
          ASSERT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
        }
      }
    }
  }
  EXPECT_THROW(GaloisField(12), InvalidArgument);
}
