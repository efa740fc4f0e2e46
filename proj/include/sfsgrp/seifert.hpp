#pragma once

// Seifert fibred spaces over S^2 with cone points: data, fundamental group
// presentations, euler numbers, closed-form first homology, triangle groups,
// Coxeter and root extensions, and the S^2(4,4,4) family with its
// classifier.
//
// Convention for SeifertData: relators c_j^{p_j} z^{beta_j} and
// c_1 ... c_t = z^d, z central.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "coset_enum.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "pquotient.hpp"
#include "presentation.hpp"

namespace sfsgrp {

  struct ConePair {
    std::int64_t p    = 2;
    std::int64_t beta = 1;

    friend bool operator==(ConePair const&, ConePair const&) = default;
  };

  struct SeifertData {
    std::vector<ConePair> cones;
    std::int64_t          d = 0;

    friend bool operator==(SeifertData const&, SeifertData const&) = default;

    void validate() const {
      for (auto const& c : cones) {
        if (c.p < 2) {
          throw InvalidArgument("SeifertData: cone order " + std::to_string(c.p) + " < 2");
        }
        if (std::gcd(c.p, c.beta) != 1) {
          throw InvalidArgument("SeifertData: (" + std::to_string(c.p) + ","
                                + std::to_string(c.beta) + ") not coprime");
        }
      }
    }

    bool is_normalized() const {
      return std::all_of(cones.begin(), cones.end(),
                         [](ConePair const& c) { return c.beta > 0 && c.beta < c.p; });
    }

    // 0 < beta < p, with d absorbing the shift; the euler number is fixed.
    SeifertData normalized() const {
      validate();
      SeifertData out{{}, d};
      for (auto const& c : cones) {
        std::int64_t b = ((c.beta % c.p) + c.p) % c.p;
        out.d += (c.beta - b) / c.p;
        out.cones.push_back({c.p, b});
      }
      return out;
    }

    std::string to_string() const {
      std::string s = "SFS[";
      for (std::size_t i = 0; i < cones.size(); ++i) {
        s += (i ? ",(" : "(") + std::to_string(cones[i].p) + ","
             + std::to_string(cones[i].beta) + ")";
      }
      return s + "; d=" + std::to_string(d) + "]";
    }
  };

  // SFS[(3,1),(3,1),(4,1); d=0]; the cone list may be empty.
  inline SeifertData parse_seifert(std::string const& text) {
    static std::regex const whole(
        R"(\s*SFS\s*\[\s*((?:\(\s*-?\d+\s*,\s*-?\d+\s*\)\s*(?:,\s*\(\s*-?\d+\s*,\s*-?\d+\s*\)\s*)*)?)\s*;\s*d\s*=\s*(-?\d+)\s*\]\s*)");
    static std::regex const pair(R"(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\))");
    std::smatch m;
    if (!std::regex_match(text, m, whole)) {
      throw ParseError("cannot parse Seifert data '" + text + "'", 1, 1);
    }
    SeifertData out;
    std::string body = m[1].str();
    try {
      out.d = std::stoll(m[2].str());
      for (std::sregex_iterator it(body.begin(), body.end(), pair), end; it != end; ++it) {
        out.cones.push_back({std::stoll((*it)[1].str()), std::stoll((*it)[2].str())});
      }
    } catch (std::out_of_range const&) {
      throw ParseError("Seifert data out of range in '" + text + "'", 1, 1);
    }
    out.validate();
    return out;
  }

  // Generators c1..ct, z.
  inline Presentation presentation_of(SeifertData const& data) {
    data.validate();
    std::size_t const        t = data.cones.size();
    std::vector<std::string> names;
    for (std::size_t j = 0; j < t; ++j) {
      names.push_back("c" + std::to_string(j + 1));
    }
    names.push_back("z");
    Word const        z = Word::gen(t);
    std::vector<Word> rels;
    Word              prod;
    for (std::size_t j = 0; j < t; ++j) {
      rels.push_back(Word::gen(j, data.cones[j].p) * Word::gen(t, data.cones[j].beta));
      prod *= Word::gen(j);
    }
    rels.push_back(prod * Word::gen(t, -data.d));
    for (std::size_t j = 0; j < t; ++j) {
      rels.push_back(commutator(z, Word::gen(j)));
    }
    return Presentation(std::move(names), std::move(rels));
  }

  // e = -(d + sum beta_j / p_j)
  inline mpq_class euler_number(SeifertData const& data) {
    mpq_class s(data.d);
    for (auto const& c : data.cones) {
      s += mpq_class(c.beta, c.p);
    }
    s.canonicalize();
    return -s;
  }

  inline std::string rational_to_string(mpq_class q) {
    q.canonicalize();
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_str();
  }

  // Abelianized cone and product relators, columns (z, c_1, ..., c_t).
  inline IntMatrix seifert_relation_matrix(SeifertData const& data) {
    std::size_t const t = data.cones.size();
    IntMatrix         M(t + 1, t + 1);
    for (std::size_t j = 0; j < t; ++j) {
      M(j, 0)     = Int(static_cast<long>(data.cones[j].beta));
      M(j, j + 1) = Int(static_cast<long>(data.cones[j].p));
      M(t, j + 1) = 1;
    }
    M(t, 0) = Int(static_cast<long>(-data.d));
    return M;
  }

  ////////////////////////////////////////////////////////////////////////
  // Triangle groups
  ////////////////////////////////////////////////////////////////////////

  struct TriangleKey {
    enum class List { top, bottom, other };
    unsigned p = 2, q = 3, r = 7;  // sorted

    TriangleKey() = default;
    TriangleKey(unsigned a, unsigned b, unsigned c) {
      std::array<unsigned, 3> v{a, b, c};
      std::sort(v.begin(), v.end());
      if (v[0] < 2) {
        throw InvalidArgument("TriangleKey: orders must be >= 2");
      }
      p = v[0];
      q = v[1];
      r = v[2];
    }

    List list() const {
      static std::array<std::array<unsigned, 3>, 5> const top{
          {{3, 3, 4}, {3, 3, 5}, {3, 3, 6}, {2, 5, 5}, {4, 4, 4}}};
      static std::array<std::array<unsigned, 3>, 5> const bottom{
          {{2, 3, 8}, {2, 3, 10}, {2, 3, 12}, {2, 4, 5}, {2, 4, 8}}};
      std::array<unsigned, 3> k{p, q, r};
      if (std::find(top.begin(), top.end(), k) != top.end()) {
        return List::top;
      }
      if (std::find(bottom.begin(), bottom.end(), k) != bottom.end()) {
        return List::bottom;
      }
      return List::other;
    }
    std::string list_name() const {
      switch (list()) {
        case List::top: return "top";
        case List::bottom: return "bottom";
        default: return "other";
      }
    }
    // 1/p + 1/q + 1/r < 1
    bool is_hyperbolic() const {
      return q * r + p * r + p * q < p * q * r;
    }
    std::string to_string() const {
      return "T(" + std::to_string(p) + "," + std::to_string(q) + "," + std::to_string(r)
             + ")";
    }

    friend bool operator==(TriangleKey const&, TriangleKey const&) = default;
  };

  inline TriangleKey parse_triangle_key(std::string const& s) {
    static std::regex const re(R"(\s*T\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)\s*)");
    std::smatch             m;
    if (!std::regex_match(s, m, re)) {
      throw ParseError("cannot parse triangle key '" + s + "'", 1, 1);
    }
    try {
      return TriangleKey(unsigned(std::stoul(m[1].str())), unsigned(std::stoul(m[2].str())),
                         unsigned(std::stoul(m[3].str())));
    } catch (std::out_of_range const&) {
      throw ParseError("triangle key out of range in '" + s + "'", 1, 1);
    }
  }

  inline std::vector<TriangleKey> top_list() {
    return {{3, 3, 4}, {3, 3, 5}, {3, 3, 6}, {2, 5, 5}, {4, 4, 4}};
  }
  inline std::vector<TriangleKey> bottom_list() {
    return {{2, 3, 8}, {2, 3, 10}, {2, 3, 12}, {2, 4, 5}, {2, 4, 8}};
  }

  inline Presentation triangle_presentation(TriangleKey const& k) {
    return Presentation({"a", "b", "c"},
                        {Word::gen(0, k.p), Word::gen(1, k.q), Word::gen(2, k.r),
                         Word::gen(0) * Word::gen(1) * Word::gen(2)});
  }

  // Seifert data over a triangle base with exponents e and product exponent d.
  inline SeifertData triangle_data(TriangleKey const& k, std::array<std::int64_t, 3> e,
                                   std::int64_t d) {
    SeifertData s{{{k.p, e[0]}, {k.q, e[1]}, {k.r, e[2]}}, d};
    s.validate();
    return s;
  }

  namespace detail {
    inline std::size_t top_index(TriangleKey const& k) {
      auto t = top_list();
      auto it = std::find(t.begin(), t.end(), k);
      if (it == t.end()) {
        throw InvalidArgument("closed form H1 needs a top-list base, got " + k.to_string());
      }
      return std::size_t(it - t.begin());
    }
    inline Int lemma_k(std::size_t case_index, std::array<std::int64_t, 3> e, std::int64_t d) {
      static std::int64_t const coef[5][4] = {
          {4, 4, 3, 12}, {5, 5, 3, 15}, {2, 2, 1, 6}, {5, 2, 2, 10}, {1, 1, 1, 4}};
      auto const& c = coef[case_index];
      return Int(static_cast<long>(c[0] * e[0] + c[1] * e[1] + c[2] * e[2] + c[3] * d));
    }
  }  // namespace detail

  inline AbelianInvariants h1_closed_form(TriangleKey const& k, std::array<std::int64_t, 3> e,
                                          std::int64_t d) {
    std::size_t i = detail::top_index(k);
    triangle_data(k, e, d);  // coprimality
    Int kk = abs(detail::lemma_k(i, e, d));
    switch (i) {
      case 0:
      case 1: return abelian_invariants_from_cyclic({3 * kk});
      case 2: return abelian_invariants_from_cyclic({Int(3), 3 * kk});
      case 3: return abelian_invariants_from_cyclic({5 * kk});
      default: return abelian_invariants_from_cyclic({Int(4), 4 * kk});
    }
  }

  // Determinant of seifert_relation_matrix in closed form.
  inline Int lemma_determinant(TriangleKey const& k, std::array<std::int64_t, 3> e,
                               std::int64_t d) {
    static int const factor[5] = {3, 3, 9, 5, 16};
    std::size_t      i         = detail::top_index(k);
    return factor[i] * detail::lemma_k(i, e, d);
  }

  // Order of H1 for <a,b,c,z | a^p = b^q = c^r = z, abc = z^{2d}>, p,q,r odd.
  inline Int allodd_order(std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t d) {
    for (auto x : {p, q, r}) {
      if (x < 3 || x % 2 == 0) {
        throw InvalidArgument("allodd_order: cone orders must be odd and >= 3");
      }
    }
    Int v = Int(static_cast<long>(r)) * Int(static_cast<long>(q + p))
            + Int(static_cast<long>(p * q))
            - 2 * Int(static_cast<long>(p * q)) * Int(static_cast<long>(r))
                  * Int(static_cast<long>(d));
    return abs(v);
  }

  inline SeifertData allodd_data(std::int64_t p, std::int64_t q, std::int64_t r,
                                 std::int64_t d) {
    SeifertData s{{{p, -1}, {q, -1}, {r, -1}}, 2 * d};
    s.validate();
    return s;
  }

  ////////////////////////////////////////////////////////////////////////
  // Extensions
  ////////////////////////////////////////////////////////////////////////

  // Semidirect product with C2 acting by
  // (c1,c2,c3,z) -> (c1^-1, c2^-1, c2 c3^-1 c2^-1, z^-1).
  inline Presentation coxeter_extension(SeifertData const& data) {
    if (data.cones.size() != 3) {
      throw InvalidArgument("coxeter_extension: needs exactly 3 cone points");
    }
    auto P = presentation_of(data);
    auto H = abelianization(P);
    auto o = H.order();
    if (!o || *o % 2 == 0) {
      throw InvalidArgument("coxeter_extension: H1 must be finite of odd order, got "
                            + H.to_string());
    }
    std::vector<Word> images{Word::gen(0, -1), Word::gen(1, -1),
                             Word::gen(1) * Word::gen(2, -1) * Word::gen(1, -1),
                             Word::gen(3, -1)};
    return semidirect_presentation(P, images, 2);
  }

  // Subgroup of index 2 generated by the Seifert generators.
  inline SubgroupPresentationResult coxeter_kernel(Presentation const& lambda,
                                                   std::size_t max_cosets = default_max_cosets) {
    std::vector<Word> H;
    for (std::size_t g = 0; g + 1 < lambda.num_generators(); ++g) {
      H.push_back(Word::gen(g));
    }
    return reidemeister_schreier(lambda, enumerate_cosets(lambda, H, max_cosets));
  }

  // Adjoin a central N-th root of the fibre: beta -> N beta, d -> N d, then
  // normalize.
  inline SeifertData root_extension(SeifertData const& data, std::int64_t N) {
    data.validate();
    if (N < 1) {
      throw InvalidArgument("root_extension: N must be >= 1");
    }
    SeifertData out{{}, N * data.d};
    for (auto const& c : data.cones) {
      if (std::gcd(N, c.p) != 1) {
        throw InvalidArgument("root_extension: N = " + std::to_string(N)
                              + " shares a factor with cone order " + std::to_string(c.p));
      }
      out.cones.push_back({c.p, N * c.beta});
    }
    return out.normalized();
  }

  ////////////////////////////////////////////////////////////////////////
  // The S^2(4,4,4) family
  ////////////////////////////////////////////////////////////////////////

  enum class GammaSign { plus, minus };

  inline std::string gamma_label(GammaSign s, std::int64_t d) {
    return std::string(s == GammaSign::plus ? "Gamma+(" : "Gamma-(") + std::to_string(d) + ")";
  }

  // <a,b,c,z | a^4 z^{+-1}, b^4 z, c^4 z, a b c z^d> with z central.
  inline Presentation gamma444(GammaSign s, std::int64_t d) {
    Word const z = Word::gen(3);
    std::vector<Word> rels{Word::gen(0, 4) * Word::gen(3, s == GammaSign::plus ? 1 : -1),
                           Word::gen(1, 4) * z, Word::gen(2, 4) * z,
                           Word::gen(0) * Word::gen(1) * Word::gen(2) * Word::gen(3, d)};
    for (std::size_t g = 0; g < 3; ++g) {
      rels.push_back(commutator(z, Word::gen(g)));
    }
    return Presentation({"a", "b", "c", "z"}, std::move(rels));
  }

  // The same group as Seifert data: abc z^d = 1 means product exponent -d.
  inline SeifertData gamma444_data(GammaSign s, std::int64_t d) {
    return SeifertData{{{4, s == GammaSign::plus ? 1 : -1}, {4, 1}, {4, 1}}, -d};
  }

  // Odd m with H1 = C4 x C4 x C_m, if H1 has that shape.
  inline std::optional<Int> gamma_h1_odd_part(AbelianInvariants const& H) {
    auto o = H.order();
    if (!o || *o % 16 != 0) {
      return std::nullopt;
    }
    Int m = *o / 16;
    if (m % 2 == 0 || !(abelian_invariants_from_cyclic({Int(4), Int(4), m}) == H)) {
      return std::nullopt;
    }
    return m;
  }

  // The unique d with |4d - 3| = m.
  inline std::int64_t gamma_plus_d_for(Int const& m) {
    Int d;
    if (m % 4 == 1) {
      d = (m + 3) / 4;
    } else {
      d = (3 - m) / 4;
    }
    return d.get_si();
  }

  struct Classification {
    enum class Outcome { matched, indistinguishable, no_h1_match, no_stage5_match };
    Outcome                    outcome = Outcome::no_h1_match;
    std::optional<GammaSign>   sign;
    std::int64_t               d = 0;
    AbelianInvariants          h1;
    std::vector<std::string>   candidates;  // labels
    std::string                separating;  // rung that decided
    std::size_t                log_order = 0;
    std::uint64_t              epi_nodes = 0;

    std::string label() const {
      return sign ? gamma_label(*sign, d) : std::string();
    }
    std::string outcome_name() const {
      switch (outcome) {
        case Outcome::matched: return "matched";
        case Outcome::indistinguishable: return "indistinguishable by implemented profile ladder";
        case Outcome::no_h1_match: return "no H1 match";
        default: return "no stage-5 match";
      }
    }
  };

  // H1 leaves Gamma+(d) and Gamma-(1-d). Stage-5 quotients are compared by
  // the invariant profile ladder, then, if the ladder is silent, by looking
  // for a surjection of the input onto each candidate's stage-5 quotient;
  // with equal orders a surjection is an isomorphism.
  inline Classification classify_444(Presentation const& P,
                                     std::uint64_t max_nodes = default_max_nodes) {
    Classification c;
    c.h1   = abelianization(P);
    auto m = gamma_h1_odd_part(c.h1);
    if (!m) {
      return c;
    }
    std::int64_t const dp = gamma_plus_d_for(*m);
    struct Cand {
      GammaSign    sign;
      std::int64_t d;
    };
    std::array<Cand, 2> cands{{{GammaSign::plus, dp}, {GammaSign::minus, 1 - dp}}};
    for (auto const& k : cands) {
      c.candidates.push_back(gamma_label(k.sign, k.d));
    }

    auto  R = compute_pquotient(P, 2, 5);
    auto  const& mine = R.stages.back().pc;
    c.log_order       = mine.num_generators();
    auto  pm          = invariant_profile(mine);
    std::array<PcPresentation, 2>                    pcs;
    std::array<std::optional<std::string>, 2>        diff;
    for (std::size_t i = 0; i < 2; ++i) {
      auto Ri = compute_pquotient(gamma444(cands[i].sign, cands[i].d), 2, 5);
      pcs[i]  = Ri.stages.back().pc;
      diff[i] = first_profile_difference(pm, invariant_profile(pcs[i]));
    }
    auto pick = [&](std::size_t i, std::string why) {
      c.outcome    = Classification::Outcome::matched;
      c.sign       = cands[i].sign;
      c.d          = cands[i].d;
      c.separating = std::move(why);
      return c;
    };
    c.outcome = Classification::Outcome::no_stage5_match;
    if (!diff[0] && diff[1]) {
      return pick(0, *diff[1]);
    }
    if (diff[0] && !diff[1]) {
      return pick(1, *diff[0]);
    }
    if (diff[0] && diff[1]) {
      return c;
    }
    std::array<bool, 2> onto{};
    for (std::size_t i = 0; i < 2; ++i) {
      auto e = find_pc_epimorphism(P, pcs[i], max_nodes);
      c.epi_nodes += e.nodes;
      onto[i] = e.images.has_value();
    }
    std::string const rung = "stage-5 isomorphism type";
    if (onto[0] && !onto[1]) {
      return pick(0, rung);
    }
    if (!onto[0] && onto[1]) {
      return pick(1, rung);
    }
    if (onto[0] && onto[1]) {
      c.outcome = Classification::Outcome::indistinguishable;
    }
    return c;
  }

  inline Classification classify_444(SeifertData const& data,
                                     std::uint64_t max_nodes = default_max_nodes) {
    data.validate();
    if (data.cones.size() != 3
        || !std::all_of(data.cones.begin(), data.cones.end(),
                        [](ConePair const& c) { return c.p == 4; })) {
      throw InvalidArgument("classify_444: data must lie over S^2(4,4,4)");
    }
    return classify_444(presentation_of(data), max_nodes);
  }

}  // namespace sfsgrp
