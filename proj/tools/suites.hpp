#pragma once

// Acceptance criteria as functions, shared by the CLI's verify suites and
// the acceptance runner.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfsgrp/catalog.hpp"
#include "sfsgrp/coset_enum.hpp"
#include "sfsgrp/hom_search.hpp"
#include "sfsgrp/linalg.hpp"
#include "sfsgrp/pairs.hpp"
#include "sfsgrp/pquotient.hpp"
#include "sfsgrp/presentation.hpp"
#include "sfsgrp/seifert.hpp"

namespace sfsgrp::tools {

  using json = nlohmann::ordered_json;

  inline json to_json(Int const& v) {
    if (v.fits_slong_p()) {
      return v.get_si();
    }
    return v.get_str();
  }

  inline json to_json(AbelianInvariants const& H) {
    json t = json::array();
    for (auto const& d : H.torsion) {
      t.push_back(to_json(d));
    }
    json o;
    o["invariants"] = H.to_string();
    o["torsion"]    = t;
    o["free-rank"]  = H.free_rank;
    auto n          = H.order();
    o["order"]      = n ? to_json(*n) : json("infinite");
    return o;
  }

  struct Budgets {
    std::uint64_t max_nodes    = default_max_nodes;
    std::size_t   order_budget = 8000;
    std::size_t   max_cosets   = default_max_cosets;
  };

  struct CriterionResult {
    int         id = 0;
    std::string title;
    bool        passed = false;
    std::string summary;
    json        details = json::object();
    std::int64_t runtime_ms = 0;
  };

  inline std::string data_dir() {
#ifdef SFSGRP_DATA_DIR
    return SFSGRP_DATA_DIR;
#else
    return "data";
#endif
  }

  inline std::string read_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw InvalidArgument("cannot read file '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  inline Presentation higman_group() {
    return parse_presentation(read_file(data_dir() + "/higman.pres"));
  }

  namespace detail {
    inline std::vector<std::array<std::int64_t, 3>> coprime_exponents(TriangleKey const& k) {
      std::vector<std::array<std::int64_t, 3>> out;
      std::array<std::int64_t, 3> p{k.p, k.q, k.r};
      auto ok = [&](std::int64_t e, std::int64_t m) { return std::gcd(e, m) == 1; };
      for (std::int64_t a = -p[0]; a <= p[0]; ++a) {
        for (std::int64_t b = -p[1]; b <= p[1]; ++b) {
          for (std::int64_t c = -p[2]; c <= p[2]; ++c) {
            if (ok(a, p[0]) && ok(b, p[1]) && ok(c, p[2])) {
              out.push_back({a, b, c});
            }
          }
        }
      }
      return out;
    }

    template <class F>
    CriterionResult timed(int id, std::string title, F&& f) {
      auto            t0 = std::chrono::steady_clock::now();
      CriterionResult r;
      r.id    = id;
      r.title = std::move(title);
      try {
        f(r);
      } catch (Error const& e) {
        r.passed  = false;
        r.summary = std::string("error: ") + e.what();
      }
      r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
      return r;
    }

    inline std::array<std::pair<GammaSign, std::int64_t>, 4> tie_gammas() {
      return {{{GammaSign::plus, 0}, {GammaSign::minus, 1},
               {GammaSign::plus, 1}, {GammaSign::minus, 0}}};
    }
  }  // namespace detail

  // 1. Closed-form H1 and determinant over the five top triangles.
  inline CriterionResult criterion_lemma_sweep(std::int64_t dmin = -6, std::int64_t dmax = 6) {
    return detail::timed(1, "top-list H1 closed forms", [&](CriterionResult& r) {
      std::size_t cases = 0, bad = 0;
      json        failures = json::array();
      for (auto const& k : top_list()) {
        for (auto const& e : detail::coprime_exponents(k)) {
          for (std::int64_t d = dmin; d <= dmax; ++d) {
            ++cases;
            auto data = triangle_data(k, e, d);
            auto M    = seifert_relation_matrix(data);
            auto H    = cokernel_invariants(M);
            bool ok   = H.is_finite() && H == h1_closed_form(k, e, d)
                      && determinant(M) == lemma_determinant(k, e, d)
                      && H == abelianization(presentation_of(data));
            if (!ok) {
              ++bad;
              if (failures.size() < 5) {
                failures.push_back(data.to_string());
              }
            }
          }
        }
      }
      r.details["cases"]    = cases;
      r.details["d-range"]  = std::to_string(dmin) + ".." + std::to_string(dmax);
      r.details["failures"] = failures;
      r.passed  = bad == 0 && cases >= 2000;
      r.summary = std::to_string(cases) + " cases, " + std::to_string(bad) + " mismatches";
    });
  }

  // 2. Triangle abelianizations, and no epimorphism Delta(4,4,4) -> C3.
  inline CriterionResult criterion_triangles() {
    return detail::timed(2, "triangle abelianizations", [&](CriterionResult& r) {
      std::vector<std::vector<Int>> expect = {{3}, {3}, {3, 3}, {5}, {4, 4}};
      auto keys = top_list();
      bool ok   = true;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        auto H = abelianization(triangle_presentation(keys[i]));
        bool m = H == abelian_invariants_from_cyclic(expect[i]);
        ok     = ok && m;
        r.details[keys[i].to_string()] = H.to_string();
      }
      auto c = count_homs(triangle_presentation(TriangleKey(4, 4, 4)), *catalog_group("C3"));
      r.details["T(4,4,4) epis to C3"] = c.epis;
      r.passed  = ok && c.epis == 0;
      r.summary = ok ? "C3, C3, C3 x C3, C5, C4 x C4; no epi T(4,4,4) -> C3"
                     : "abelianization mismatch";
    });
  }

  // 3. H1 of the S^2(4,4,4) family.
  inline CriterionResult criterion_gamma_h1() {
    return detail::timed(3, "Gamma H1 for d in [-5,5]", [&](CriterionResult& r) {
      std::size_t bad = 0, cases = 0;
      for (auto s : {GammaSign::plus, GammaSign::minus}) {
        for (std::int64_t d = -5; d <= 5; ++d) {
          ++cases;
          Int  m = abs(Int(4 * d - (s == GammaSign::plus ? 3 : 1)));
          auto H = abelianization(gamma444(s, d));
          if (!(H == abelian_invariants_from_cyclic({Int(4), Int(4), m}))) {
            ++bad;
            r.details["mismatch " + gamma_label(s, d)] = H.to_string();
          }
        }
      }
      r.details["cases"] = cases;
      r.passed  = bad == 0;
      r.summary = std::to_string(cases) + " groups, " + std::to_string(bad) + " mismatches";
    });
  }

  // 4 and 5 share the p-quotient computation.
  struct GammaQuotients {
    std::vector<std::pair<std::string, PQuotientResult>> results;

    static GammaQuotients compute() {
      GammaQuotients g;
      for (auto [s, d] : detail::tie_gammas()) {
        g.results.emplace_back(gamma_label(s, d), compute_pquotient(gamma444(s, d), 2, 5));
      }
      return g;
    }
  };

  inline CriterionResult criterion_gamma_orders(GammaQuotients const& G) {
    return detail::timed(4, "2-quotient orders and z", [&](CriterionResult& r) {
      bool ok = true;
      for (auto const& [label, R] : G.results) {
        json st = json::array();
        bool good = R.stages.size() == 5;
        for (std::size_t i = 0; i < R.stages.size(); ++i) {
          auto const&   S  = R.stages[i];
          std::uint64_t zo = S.pc.element_order(S.images[3]);
          std::uint64_t bound = i < 2 ? 1 : (std::uint64_t(1) << (i - 1));
          good = good && bound % zo == 0;
          st.push_back({{"class", S.cls}, {"order", "2^" + std::to_string(S.pc.num_generators())},
                        {"z-order", zo}});
        }
        good = good && R.stages.front().pc.num_generators() == 2
               && R.stages.back().pc.num_generators() == 17;
        ok = ok && good;
        r.details[label] = st;
      }
      r.passed  = ok;
      r.summary = ok ? "stage 1 order 4, stage 5 order 2^17, z orders within 1,1,2,4,8"
                     : "order or z-order mismatch";
    });
  }

  inline CriterionResult criterion_gamma_consistency(GammaQuotients const& G,
                                                     Budgets const& b = {}) {
    return detail::timed(5, "consistency and hom crosscheck", [&](CriterionResult& r) {
      std::vector<std::string> targets;
      for (auto const& k : catalog_up_to(16)) {
        auto const& T = *catalog_group(k.to_string());
        auto        c = exponent_p_class(T, 2);
        if (T.order() > 1 && c && *c <= 2) {
          targets.push_back(k.to_string());
        }
      }
      HomSearchOptions opts;
      opts.max_nodes = b.max_nodes;
      bool        ok = true;
      std::size_t checks = 0;
      for (auto const& [label, R] : G.results) {
        auto problems = check_pquotient(R);
        json g;
        g["consistent"] = problems.empty();
        ok = ok && problems.empty();
        json mismatches = json::array();
        for (auto const& t : targets) {
          auto c = pquotient_hom_crosscheck(R.source, R.stages[1], *catalog_group(t), opts);
          ++checks;
          if (!c.equal) {
            mismatches.push_back(t);
            ok = false;
          }
        }
        g["crosscheck-mismatches"] = mismatches;
        r.details[label] = g;
      }
      r.details["targets"] = targets;
      r.passed  = ok;
      r.summary = std::to_string(checks) + " crosschecks against stage 2; "
                  + (ok ? "all consistent and equal" : "failure");
    });
  }

  // 6. Coxeter extensions: H1 = C2 and the index-2 kernel recovers H1.
  inline CriterionResult criterion_coxeter(Budgets const& b = {}, std::size_t per_key = 20) {
    return detail::timed(6, "Coxeter extensions", [&](CriterionResult& r) {
      std::size_t sets = 0, bad = 0;
      json        failures = json::array();
      for (auto const& k : {TriangleKey(3, 3, 4), TriangleKey(3, 3, 6), TriangleKey(2, 5, 5)}) {
        std::size_t taken = 0;
        for (std::int64_t d = 0; d <= 6 && taken < per_key; ++d) {
          for (auto const& e : detail::coprime_exponents(k)) {
            if (taken == per_key) {
              break;
            }
            auto data = triangle_data(k, e, d);
            auto H    = h1_closed_form(k, e, d);
            auto o    = H.order();
            if (!o || *o % 2 == 0) {
              continue;
            }
            ++taken;
            ++sets;
            auto L  = coxeter_extension(data);
            auto HL = abelianization(L);
            auto K  = coxeter_kernel(L, b.max_cosets);
            auto HK = abelianization(K.presentation);
            bool ok = HL == abelian_invariants_from_cyclic({Int(2)}) && K.index == 2 && HK == H;
            if (!ok) {
              ++bad;
              failures.push_back(data.to_string());
            }
          }
        }
      }
      r.details["data-sets"] = sets;
      r.details["failures"]  = failures;
      r.passed  = bad == 0 && sets >= 50;
      r.summary = std::to_string(sets) + " data sets, " + std::to_string(bad) + " failures";
    });
  }

  // 7. Euler number scaling under root extensions, plus one classification.
  inline CriterionResult criterion_euler_scaling(Budgets const& b = {}, bool classify = true) {
    return detail::timed(7, "root extensions", [&](CriterionResult& r) {
      std::size_t sets = 0, checks = 0, bad = 0;
      for (auto const& k : top_list()) {
        for (std::int64_t d = -3; d <= 3; ++d) {
          for (std::int64_t e = -4; e <= 4; ++e) {
            std::array<std::int64_t, 3> ex{e, 1, -1};
            bool valid = std::gcd(ex[0], k.p) == 1 && std::gcd(ex[1], k.q) == 1
                         && std::gcd(ex[2], k.r) == 1;
            if (!valid) {
              continue;
            }
            auto data = triangle_data(k, ex, d);
            ++sets;
            for (std::int64_t N = 1; N <= 25; ++N) {
              if (std::gcd(N, k.p) != 1 || std::gcd(N, k.q) != 1 || std::gcd(N, k.r) != 1) {
                continue;
              }
              ++checks;
              if (euler_number(root_extension(data, N)) != N * euler_number(data)) {
                ++bad;
              }
            }
          }
        }
      }
      r.details["data-sets"] = sets;
      r.details["checks"]    = checks;
      r.details["failures"]  = bad;
      bool cls_ok = true;
      if (classify) {
        auto root = root_extension(gamma444_data(GammaSign::plus, 1), 5);
        auto c    = classify_444(root, b.max_nodes);
        r.details["root"]           = root.to_string();
        r.details["classification"] = c.label();
        r.details["separating"]     = c.separating;
        cls_ok = c.outcome == Classification::Outcome::matched && c.label() == "Gamma+(2)";
      }
      r.passed  = bad == 0 && sets >= 100 && cls_ok;
      r.summary = std::to_string(checks) + " scalings over " + std::to_string(sets)
                  + " data sets" + (classify ? std::string(", Gamma+(1) N=5 root -> ")
                                                   + r.details["classification"].get<std::string>()
                                             : std::string());
    });
  }

  // 8. Kernel of Delta(3,3,4) -> C3.
  inline CriterionResult criterion_c3_kernel(Budgets const& b = {}) {
    return detail::timed(8, "C3 kernel of T(3,3,4)", [&](CriterionResult& r) {
      auto                 P = triangle_presentation(TriangleKey(3, 3, 4));
      auto const&          C3 = *catalog_group("C3");
      std::vector<Elem>    epi;
      HomSearchOptions     opts;
      opts.max_nodes = b.max_nodes;
      for_each_hom(P, C3, opts, [&](std::vector<Elem> const& im, std::uint64_t) {
        if (C3.generates(im)) {
          epi = im;
          return false;
        }
        return true;
      });
      if (epi.empty()) {
        r.summary = "no epimorphism to C3";
        return;
      }
      auto K  = reidemeister_schreier(P, kernel_coset_table(P, C3, epi));
      auto HK = abelianization(K.presentation);
      r.details["index"] = K.index;
      r.details["H1"]    = HK.to_string();
      r.passed  = K.index == 3 && HK == abelian_invariants_from_cyclic({Int(4), Int(4)});
      r.summary = "index " + std::to_string(K.index) + ", H1 = " + HK.to_string();
    });
  }

  // 9. Higman group: no simple quotients up to the budget.
  inline CriterionResult criterion_higman_scan(Budgets const& b = {}) {
    return detail::timed(9, "Higman simple-quotient scan", [&](CriterionResult& r) {
      std::size_t const budget = std::min<std::size_t>(b.order_budget, 9999);
      HomSearchOptions  opts;
      opts.max_nodes = b.max_nodes;
      auto s = simple_quotient_scan(higman_group(), budget, opts);
      r.details["budget"]    = budget;
      r.details["scanned"]   = s.scanned;
      r.details["quotients"] = s.quotients;
      r.details["nodes"]     = s.nodes;
      r.passed  = s.quotients.empty();
      r.summary = "budget " + std::to_string(budget) + ": "
                  + (s.quotients.empty() ? std::string("no simple quotients")
                                         : std::to_string(s.quotients.size()) + " quotients");
    });
  }

  // 10. Fibre-product report for F4 with the Higman relators.
  inline CriterionResult criterion_pt_density(Budgets const& b = {}, std::size_t slice = 120) {
    return detail::timed(10, "Higman fibre product", [&](CriterionResult& r) {
      auto F4   = free_group({"a", "b", "c", "d"});
      auto kill = parse_word_list(F4, read_file(data_dir() + "/higman.kill"));
      GrothendieckOptions o;
      o.hom.max_nodes = b.max_nodes;
      auto R = grothendieck_report(F4, kill, catalog_up_to(slice),
                                   std::min<std::size_t>(b.order_budget, 9999), o);
      r.details["verdict"]   = R.verdict;
      r.details["targets"]   = R.targets.size();
      r.details["slice"]     = "order <= " + std::to_string(slice);
      r.details["unchecked"] = R.unchecked;
      r.passed  = R.verdict == "PASS";
      r.summary = R.verdict + " over " + std::to_string(R.targets.size()) + " targets: "
                  + R.summary();
    });
  }

  // 11. The all-odd order formula against SNF.
  inline CriterionResult criterion_allodd() {
    return detail::timed(11, "all-odd H1 order", [&](CriterionResult& r) {
      std::size_t cases = 0, bad = 0;
      for (std::int64_t p = 3; p <= 15; p += 2) {
        for (std::int64_t q = 3; q <= 15; q += 2) {
          for (std::int64_t s = 3; s <= 15; s += 2) {
            for (std::int64_t d = -10; d <= 10; ++d) {
              ++cases;
              auto H = cokernel_invariants(seifert_relation_matrix(allodd_data(p, q, s, d)));
              auto o = H.order();
              Int  f = allodd_order(p, q, s, d);
              if (!o || *o != f || f % 2 == 0) {
                ++bad;
              }
            }
          }
        }
      }
      r.details["cases"] = cases;
      r.passed  = bad == 0;
      r.summary = std::to_string(cases) + " cases, " + std::to_string(bad) + " mismatches";
    });
  }

  // 12. Stage-5 comparison of the two tie pairs.
  inline CriterionResult criterion_tie_pairs(GammaQuotients const& G, Budgets const& b = {}) {
    return detail::timed(12, "tie pairs at stage 5", [&](CriterionResult& r) {
      std::map<std::string, PQuotientResult const*> byl;
      for (auto const& [label, R] : G.results) {
        byl.emplace(label, &R);
      }
      bool all_separated = true;
      std::vector<std::pair<std::string, std::string>> pairs = {
          {"Gamma+(0)", "Gamma-(1)"}, {"Gamma+(1)", "Gamma-(0)"}};
      for (auto const& [x, y] : pairs) {
        json e;
        auto const& X = *byl.at(x);
        auto const& Y = *byl.at(y);
        auto d = first_profile_difference(invariant_profile(X.stages.back().pc),
                                          invariant_profile(Y.stages.back().pc));
        e["ladder"] = d ? "differ in " + *d : std::string("indistinguishable by ladder");
        // A surjection onto an equal-order quotient is an isomorphism, so one
        // failed search separates the pair.
        auto epi = find_pc_epimorphism(X.source, Y.stages.back().pc, b.max_nodes);
        e["epi-nodes"] = epi.nodes;
        bool separated = d.has_value() || !epi.images;
        e["stage-5 isomorphism type"] = epi.images ? "not separated" : "separated";
        all_separated = all_separated && separated;
        r.details[x + " vs " + y] = e;
      }
      r.passed  = all_separated;
      r.summary = all_separated
                      ? "ladder indistinguishable; separated by stage-5 isomorphism type"
                      : "not separated (documented limitation)";
    });
  }

  // Suite name -> criteria it runs.
  inline std::vector<std::string> suite_names() {
    return {"lemma-small-ab", "coxeter", "euler-scaling", "t444", "higman", "pt-pair"};
  }

  inline std::vector<CriterionResult> run_suite(std::string const& name, Budgets const& b,
                                                std::int64_t dmin = -6, std::int64_t dmax = 6) {
    if (name == "lemma-small-ab") {
      return {criterion_lemma_sweep(dmin, dmax), criterion_triangles()};
    }
    if (name == "coxeter") {
      return {criterion_coxeter(b), criterion_allodd()};
    }
    if (name == "euler-scaling") {
      return {criterion_euler_scaling(b)};
    }
    if (name == "t444") {
      auto G = GammaQuotients::compute();
      return {criterion_gamma_h1(), criterion_gamma_orders(G),
              criterion_gamma_consistency(G, b), criterion_tie_pairs(G, b)};
    }
    if (name == "higman") {
      return {criterion_higman_scan(b)};
    }
    if (name == "pt-pair") {
      return {criterion_c3_kernel(b), criterion_pt_density(b)};
    }
    throw InvalidArgument("unknown suite '" + name + "'");
  }

}  // namespace sfsgrp::tools
