#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sfsgrp/catalog.hpp"
#include "sfsgrp/pairs.hpp"
#include "sfsgrp/seifert.hpp"
#include "sfsgrp/validate.hpp"

using namespace sfsgrp;

namespace {
  Presentation f2() {
    return parse_presentation("<x,y|>");
  }

  // Every hom P -> T as a full image tuple, by plain enumeration.
  std::vector<std::vector<Elem>> all_homs(Presentation const& P, FiniteGroup const& T) {
    std::vector<std::vector<Elem>> out;
    std::size_t const              n = P.num_generators();
    std::vector<Elem>              im(n, 0);
    while (true) {
      bool ok = true;
      for (auto const& r : P.relators()) {
        ok = ok && T.evaluate(r, im) == T.identity();
      }
      if (ok) {
        out.push_back(im);
      }
      std::size_t i = 0;
      while (i < n && ++im[i] == T.order()) {
        im[i++] = 0;
      }
      if (i == n) {
        return out;
      }
    }
  }

  struct PairOracle {
    std::uint64_t failures = 0;
    std::uint64_t full_epis = 0;
    std::uint64_t p_epis = 0;
  };

  // Every commuting pair, with the fibre-product image taken straight from the
  // generating set.
  PairOracle pair_oracle(Presentation const& G, std::vector<Word> const& extra,
                         FiniteGroup const& T) {
    auto       gens = fibre_product_gens(G, extra);
    auto       homs = all_homs(G, T);
    PairOracle o;
    for (auto const& a : homs) {
      for (auto const& b : homs) {
        bool commute = true;
        for (Elem x : a) {
          for (Elem y : b) {
            commute = commute && T.mul(x, y) == T.mul(y, x);
          }
        }
        if (!commute) {
          continue;
        }
        std::vector<Elem> full = a, sub;
        full.insert(full.end(), b.begin(), b.end());
        for (auto const& [u, v] : gens.gens) {
          sub.push_back(T.mul(T.evaluate(u, a), T.evaluate(v, b)));
        }
        auto F = T.subgroup_closure(full).size();
        auto S = T.subgroup_closure(sub).size();
        o.failures += S != F;
        o.full_epis += F == T.order();
        o.p_epis += S == T.order();
      }
    }
    return o;
  }

  std::string slurp(std::string const& path) {
    std::ifstream     in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
}  // namespace

TEST(FibreProduct, Generators) {
  auto G = f2();
  auto P = fibre_product_gens(G, {Word::gen(0)});
  EXPECT_EQ(P.to_string(), "{(x, x), (y, y), (x, 1)}");
  EXPECT_EQ(P.ambient.num_generators(), 4u);
  auto D = fibre_product_gens(G, {});
  EXPECT_EQ(D.to_string(), "{(x, x), (y, y)}");
  EXPECT_THROW(fibre_product_gens(G, {Word::gen(2)}), InvalidArgument);
  auto W = D.ambient_words();
  ASSERT_EQ(W.size(), 2u);
  EXPECT_EQ(D.ambient.word_to_string(W[0]), "x1*x2");
}

TEST(FibreProduct, HigmanGeneratingSet) {
  auto F4    = parse_presentation(slurp(SFSGRP_DATA_DIR "/f4.pres"));
  auto kill  = parse_word_list(F4, slurp(SFSGRP_DATA_DIR "/higman.kill"));
  auto H     = parse_presentation(slurp(SFSGRP_DATA_DIR "/higman.pres"));
  ASSERT_EQ(kill.size(), 4u);
  EXPECT_EQ(kill, H.relators());
  auto P = fibre_product_gens(F4, kill);
  EXPECT_EQ(P.gens.size(), 8u);
  EXPECT_EQ(P.gens[4].second, Word{});
}

TEST(JackUp, Examples) {
  auto G = f2();
  EXPECT_EQ(jack_up_gens(G, {Word::gen(0)}, {Word::gen(1)}),
            (std::vector<Word>{Word::gen(0), Word::gen(1)}));
  EXPECT_EQ(jack_up_gens(G, {Word::gen(0)}, {Word::gen(0)}).size(), 1u);
  EXPECT_THROW(jack_up_gens(G, {Word::gen(0)}, {Word::gen(3)}), InvalidArgument);

  auto D = fibre_product_gens(G, {});
  auto same = jack_up_gens(D, {{Word::gen(1), Word::gen(1)}});
  EXPECT_EQ(same.to_string(), D.to_string());

  auto F4 = free_group({"a", "b", "c", "d"});
  auto PT = fibre_product_gens(F4, {commutator(Word::gen(0), Word::gen(1))});
  Word w  = Word::gen(2) * Word::gen(3);
  auto J  = jack_up_gens(PT, {{w, Word{}}});
  ASSERT_EQ(J.gens.size(), PT.gens.size() + 1);
  EXPECT_EQ(J.gens.back().first, w);
  EXPECT_THROW(jack_up_gens(D, {{Word::gen(2), Word{}}}), InvalidArgument);
}

TEST(FibreProduct, ContainsDiagonalImage) {
  auto G = parse_presentation("<x,y|x^2>");
  std::vector<Word> extra = {Word::gen(1, 3), commutator(Word::gen(0), Word::gen(1))};
  auto P = fibre_product_gens(G, extra);
  for (auto const* key : {"S3", "D8", "A4"}) {
    auto const&       T = *catalog_group(key);
    std::size_t const n = T.order();
    for (auto const& phi : all_homs(G, T)) {
      // Subgroup of T x T generated by (phi(u), phi(v)), pairs coded a*n+b.
      std::vector<char>        in(n * n, 0);
      std::vector<std::size_t> seeds, list = {0};
      in[0] = 1;
      for (auto const& [u, v] : P.gens) {
        seeds.push_back(T.evaluate(u, phi) * n + T.evaluate(v, phi));
      }
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (auto s : seeds) {
          std::size_t y = T.mul(Elem(list[i] / n), Elem(s / n)) * n
                          + T.mul(Elem(list[i] % n), Elem(s % n));
          if (!in[y]) {
            in[y] = 1;
            list.push_back(y);
          }
        }
      }
      for (Elem g : T.subgroup_closure(phi)) {
        EXPECT_TRUE(in[g * n + g]) << key;
      }
    }
  }
}

TEST(Grothendieck, PairCountsMatchEnumeration) {
  struct Case {
    char const*              group;
    std::vector<std::string> extra;
  };
  std::vector<Case> cases = {
      {"<x,y|>", {"x"}},
      {"<x,y|>", {"x^2"}},
      {"<x,y|>", {"x*y^-1"}},
      {"<x,y|>", {"x^-1*y^-1*x*y"}},
      {"<x,y|x^2,y^3>", {"(x*y)^3"}},
      {"<x,y|x^2>", {}},
  };
  for (auto const& c : cases) {
    auto              G = parse_presentation(c.group);
    std::vector<Word> extra;
    for (auto const& e : c.extra) {
      extra.push_back(parse_word(G, e));
    }
    for (auto const* key : {"C6", "S3", "D8", "order8_#4", "A4"}) {
      auto k = parse_catalog_key(key);
      auto R = detail::pair_target(G, extra, k, {});
      auto O = pair_oracle(G, extra, *catalog_group(key));
      SCOPED_TRACE(std::string(c.group) + " / " + key);
      EXPECT_EQ(R.failures, O.failures);
      ASSERT_TRUE(R.full_epis.has_value());
      EXPECT_EQ(*R.full_epis, Int(static_cast<unsigned long>(O.full_epis)));
      EXPECT_EQ(*R.p_epis, Int(static_cast<unsigned long>(O.p_epis)));
    }
  }
}

TEST(Grothendieck, FailsAtScanWhenQuotientHasFiniteQuotients) {
  auto G = f2();
  auto R = grothendieck_report(G, {Word::gen(0)}, catalog_up_to(12), 60);
  EXPECT_EQ(R.verdict, "FAIL");
  EXPECT_EQ(R.failed_at, "(a)");
  ASSERT_FALSE(R.scan_quotients.empty());
  EXPECT_EQ(R.scan_quotients.front(), "C2");

  auto R0 = grothendieck_report(G, {}, catalog_up_to(12), 60);
  EXPECT_EQ(R0.verdict, "FAIL");
  EXPECT_EQ(R0.failed_at, "(a)");
  EXPECT_EQ(R0.unchecked, std::vector<std::string>{"H2(Q, Z) = 0"});
}

TEST(Grothendieck, HigmanSmallSlicePasses) {
  auto F4   = parse_presentation(slurp(SFSGRP_DATA_DIR "/f4.pres"));
  auto kill = parse_word_list(F4, slurp(SFSGRP_DATA_DIR "/higman.kill"));
  auto R    = grothendieck_report(F4, kill, catalog_up_to(16), 60);
  EXPECT_EQ(R.verdict, "PASS");
  EXPECT_EQ(R.summary(), "no finite-level obstruction up to budget");
  for (auto const& t : R.targets) {
    EXPECT_EQ(t.candidates, 0u) << t.target;
    ASSERT_TRUE(t.full_epis.has_value());
    EXPECT_EQ(*t.full_epis, *t.p_epis);
  }
}

TEST(Grothendieck, DetectsObstructionBeyondScan) {
  // Q = <x,y | x, y^5> is C5, so the scan already fails; with scan budget 4 it
  // does not see C5 and the pair check has to.
  auto G = f2();
  auto R = grothendieck_report(G, {Word::gen(0), Word::gen(1, 5)},
                               {parse_catalog_key("C5"), parse_catalog_key("D10")}, 4);
  EXPECT_TRUE(R.scan_quotients.empty());
  EXPECT_EQ(R.verdict, "FAIL");
  EXPECT_EQ(R.failed_at, "(b)");
}

TEST(Validate, IdentityAndCoxeterAction) {
  auto T = triangle_presentation(TriangleKey(3, 3, 4));
  std::vector<Word> id;
  for (std::size_t g = 0; g < T.num_generators(); ++g) {
    id.push_back(Word::gen(g));
  }
  auto R = validate_map_soundly(T, id);
  EXPECT_FALSE(R.refuted());
  EXPECT_EQ(R.verdict(), "not refuted");
  EXPECT_TRUE(R.budget_errors.empty());

  // The involution used for the Coxeter extension, on (3,3,4) Seifert data.
  auto data = triangle_data(TriangleKey(3, 3, 4), {1, 1, 1}, 0);
  auto P    = presentation_of(data);
  auto a = Word::gen(0), b = Word::gen(1), z = Word::gen(3);
  Word c = Word::gen(2);
  std::vector<Word> tau = {a.inverse(), b.inverse(), b * c.inverse() * b.inverse(),
                           z.inverse()};
  ValidateOptions opts;
  opts.order_budget = 24;
  auto C = validate_map_soundly(P, tau, opts);
  EXPECT_FALSE(C.refuted()) << C.refutation->stage;
}

TEST(Validate, Refutations) {
  auto T = triangle_presentation(TriangleKey(3, 3, 4));
  std::vector<Word> sq = {Word::gen(0, 2), Word::gen(1), Word::gen(2)};
  auto R = validate_map_soundly(T, sq);
  ASSERT_TRUE(R.refuted());
  // abc -> a^2 bc = a (abc), and a survives in H1 = C3.
  EXPECT_EQ(R.refutation->stage, "abelianization");
  EXPECT_EQ(R.refutation->relator, "a*b*c");

  // Perfect group: nothing abelian or nilpotent sees the swap, A5 does.
  auto A5 = parse_presentation("<a,b|a^2,b^3,(a*b)^5>");
  auto S  = validate_map_soundly(A5, {Word::gen(1), Word::gen(0)});
  ASSERT_TRUE(S.refuted());
  EXPECT_EQ(S.refutation->stage, "finite quotient A5");

  ValidateOptions tight;
  tight.max_nodes = 1;
  auto B = validate_map_soundly(A5, {Word::gen(0), Word::gen(1)}, tight);
  EXPECT_FALSE(B.refuted());
  EXPECT_FALSE(B.budget_errors.empty());
  EXPECT_THROW(validate_map_soundly(A5, {Word::gen(0)}), InvalidArgument);
}
