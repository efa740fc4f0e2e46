#pragma once

// Fibre-product generating sets, the jack-up construction, and a finite-level
// report for candidate Grothendieck pairs P -> G x G.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "hom_search.hpp"
#include "presentation.hpp"

namespace sfsgrp {

  struct PairSubgroupGens {
    Presentation          base;     // G
    Presentation          ambient;  // G x G
    std::vector<WordPair> gens;

    // As words in the ambient generators: u on the first copy, v on the second.
    std::vector<Word> ambient_words() const {
      std::size_t const        n = base.num_generators();
      std::vector<std::size_t> second(n);
      for (std::size_t i = 0; i < n; ++i) {
        second[i] = n + i;
      }
      std::vector<Word> out;
      for (auto const& [u, v] : gens) {
        out.push_back(u * v.relabelled(second));
      }
      return out;
    }

    std::string to_string() const {
      std::string s = "{";
      for (std::size_t i = 0; i < gens.size(); ++i) {
        s += (i ? ", (" : "(") + base.word_to_string(gens[i].first) + ", "
             + base.word_to_string(gens[i].second) + ")";
      }
      return s + "}";
    }
  };

  namespace detail {
    inline void check_words(Presentation const& P, std::vector<Word> const& ws,
                            char const* who) {
      for (auto const& w : ws) {
        if (!w.empty() && w.max_generator() >= P.num_generators()) {
          throw InvalidArgument(std::string(who) + ": word mentions generator "
                                + std::to_string(w.max_generator()) + " of "
                                + std::to_string(P.num_generators()));
        }
      }
    }
  }  // namespace detail

  // {(g, g)} for the generators of G, then {(r, 1)} for the extra relators.
  inline PairSubgroupGens fibre_product_gens(Presentation const&      G,
                                             std::vector<Word> const& extra) {
    detail::check_words(G, extra, "fibre_product_gens");
    PairSubgroupGens out{G, direct_product_presentation(G, G), {}};
    for (std::size_t g = 0; g < G.num_generators(); ++g) {
      out.gens.emplace_back(Word::gen(g), Word::gen(g));
    }
    for (auto const& r : extra) {
      out.gens.emplace_back(r, Word{});
    }
    return out;
  }

  // P0 followed by the new generators of S, dropping syntactic repeats.
  inline PairSubgroupGens jack_up_gens(PairSubgroupGens const&      P0,
                                       std::vector<WordPair> const& S) {
    PairSubgroupGens out = P0;
    out.gens.clear();
    std::set<std::pair<std::string, std::string>> seen;
    auto add = [&](WordPair const& p) {
      auto key = std::make_pair(P0.base.word_to_string(p.first),
                                P0.base.word_to_string(p.second));
      if (seen.insert(key).second) {
        out.gens.push_back(p);
      }
    };
    for (auto const& p : P0.gens) {
      add(p);
    }
    for (auto const& p : S) {
      std::size_t const n = P0.base.num_generators();
      if ((!p.first.empty() && p.first.max_generator() >= n)
          || (!p.second.empty() && p.second.max_generator() >= n)) {
        throw InvalidArgument("jack_up_gens: ambient mismatch");
      }
      add(p);
    }
    return out;
  }

  // Word-list version: both lists live in `ambient`.
  inline std::vector<Word> jack_up_gens(Presentation const&      ambient,
                                        std::vector<Word> const& P0,
                                        std::vector<Word> const& S) {
    for (auto const* ws : {&P0, &S}) {
      for (auto const& w : *ws) {
        if (!w.empty() && w.max_generator() >= ambient.num_generators()) {
          throw InvalidArgument("jack_up_gens: ambient mismatch");
        }
      }
    }
    std::vector<Word>     out;
    std::set<std::string> seen;
    for (auto const* ws : {&P0, &S}) {
      for (auto const& w : *ws) {
        if (seen.insert(ambient.word_to_string(w)).second) {
          out.push_back(w);
        }
      }
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Report
  ////////////////////////////////////////////////////////////////////////

  struct PairTargetResult {
    std::string   target;
    std::size_t   order = 0;
    std::string   method;
    std::uint64_t homs = 0;             // homs G -> T
    std::uint64_t candidates = 0;       // homs whose extra relators fail to normally generate the image
    std::uint64_t pairs_checked = 0;
    std::uint64_t failures = 0;         // commuting pairs where P's image is proper
    std::optional<Int> full_epis;       // pairs (phi1, phi2) onto T
    std::optional<Int> p_epis;          // of those, how many restrict onto T on P
    std::string   error;                // budget breach, empty otherwise

    bool density_ok() const {
      return error.empty() && failures == 0;
    }
    bool epis_ok() const {
      return error.empty() && (!full_epis || *full_epis == *p_epis);
    }
  };

  struct GrothendieckReport {
    std::vector<std::string>      scan_quotients;  // (a): simple quotients of Q
    std::vector<std::string>      scan_scanned;
    std::size_t                   scan_budget = 0;
    std::vector<PairTargetResult> targets;          // (b) and (c)
    bool                          pairs_skipped = false;
    std::vector<std::string>      unchecked = {"H2(Q, Z) = 0"};
    std::string                   verdict;          // PASS, FAIL, INCOMPLETE
    std::string                   failed_at;        // "(a)", "(b)", "(c)" or ""

    std::string summary() const {
      if (verdict == "PASS") {
        return "no finite-level obstruction up to budget";
      }
      if (verdict == "FAIL") {
        return "finite-level obstruction at " + failed_at;
      }
      return "incomplete: some checks exceeded their budget";
    }
  };

  struct GrothendieckOptions {
    HomSearchOptions hom;
    std::uint64_t    max_pairs = 20000000;  // explicit pair checks per target
  };

  namespace detail {
    // Conjugacy classes of subgroups: class id for every lattice entry.
    inline std::vector<std::uint32_t> subgroup_classes(FiniteGroup const&     T,
                                                       SubgroupLattice const& L,
                                                       std::vector<std::size_t>& sizes) {
      std::vector<std::uint32_t> cls(L.size(), UINT32_MAX);
      sizes.clear();
      for (std::uint32_t h = 0; h < L.size(); ++h) {
        if (cls[h] != UINT32_MAX) {
          continue;
        }
        std::uint32_t id = std::uint32_t(sizes.size());
        std::size_t   n  = 0;
        for (Elem g = 0; g < T.order(); ++g) {
          std::uint32_t k = L.conj(h, g);
          if (cls[k] == UINT32_MAX) {
            cls[k] = id;
            ++n;
          }
        }
        sizes.push_back(n);
      }
      return cls;
    }

    inline bool commute_all(FiniteGroup const& T, std::vector<Elem> const& a,
                            std::vector<Elem> const& b) {
      for (Elem x : a) {
        for (Elem y : b) {
          if (T.mul(x, y) != T.mul(y, x)) {
            return false;
          }
        }
      }
      return true;
    }

    inline PairTargetResult pair_target(Presentation const&      G,
                                        std::vector<Word> const& extra,
                                        CatalogKey const&        key,
                                        GrothendieckOptions const& opts) {
      auto const&      T = *catalog_group(key.to_string());
      PairTargetResult R;
      R.target = key.to_string();
      R.order  = T.order();
      auto L   = lattice_for(T);

      auto image_of = [&](std::vector<Elem> const& im) {
        return L ? L->elements(L->closure(im)) : T.subgroup_closure(im);
      };
      auto extra_images = [&](std::vector<Elem> const& im) {
        std::vector<Elem> xs;
        for (auto const& r : extra) {
          xs.push_back(T.evaluate(r, im));
        }
        return xs;
      };
      // The fibre product contains <<extra>> x 1 and the diagonal, so its image
      // under a commuting pair is everything once the extra relators normally
      // generate im(phi1). Only homs where they do not can take part in a
      // failing pair, and by the symmetry (1, r) = (r, r)(r, 1)^-1 both
      // members of such a pair must be of that kind.
      auto is_candidate = [&](std::vector<Elem> const& im) {
        auto xs = extra_images(im);
        if (L) {
          return L->normal_closure(xs, im) != L->closure(im);
        }
        auto A = T.subgroup_closure(im);
        std::vector<Elem> N = T.subgroup_closure(xs);
        for (bool grown = true; grown;) {
          grown = false;
          std::vector<Elem> more = N;
          for (Elem h : N) {
            for (Elem a : im) {
              more.push_back(T.conj(h, a));
            }
          }
          auto M = T.subgroup_closure(more);
          if (M.size() != N.size()) {
            N     = std::move(M);
            grown = true;
          }
        }
        return N.size() != A.size();
      };

      std::vector<std::size_t>   class_sizes;
      std::vector<std::uint32_t> sub_class;
      std::vector<std::uint64_t> class_total;  // homs with image in each class
      if (L) {
        sub_class = subgroup_classes(T, *L, class_sizes);
        class_total.assign(class_sizes.size(), 0);
      }

      std::vector<std::vector<Elem>> reps;
      try {
        for_each_hom(G, T, opts.hom, [&](std::vector<Elem> const& im,
                                         std::uint64_t w) {
          R.homs += w;
          if (L) {
            class_total[sub_class[L->closure(im)]] += w;
          }
          if (is_candidate(im)) {
            reps.push_back(im);
            R.candidates += w;
          }
          return true;
        });
      } catch (BudgetExceeded const& e) {
        R.error = e.what();
        return R;
      }

      // Every candidate hom, not just class representatives.
      std::set<std::vector<Elem>> cand;
      for (auto const& im : reps) {
        for (Elem g = 0; g < T.order(); ++g) {
          std::vector<Elem> c(im.size());
          for (std::size_t i = 0; i < im.size(); ++i) {
            c[i] = T.conj(im[i], g);
          }
          cand.insert(std::move(c));
        }
      }
      if (cand.size() > 0 && cand.size() > opts.max_pairs / cand.size()) {
        R.error = "pair budget: " + std::to_string(cand.size())
                  + " candidate homs exceed max_pairs";
        return R;
      }

      R.method = cand.empty() ? "normal-closure lemma" : "normal-closure lemma + pairs";
      Int failing_epis = 0;
      for (auto const& a : cand) {
        auto ra = extra_images(a);
        for (auto const& b : cand) {
          if (!commute_all(T, a, b)) {
            continue;
          }
          ++R.pairs_checked;
          std::vector<Elem> full = a, sub = ra;
          full.insert(full.end(), b.begin(), b.end());
          for (std::size_t i = 0; i < a.size(); ++i) {
            sub.push_back(T.mul(a[i], b[i]));
          }
          auto F = image_of(full);
          auto S = image_of(sub);
          if (S.size() != F.size()) {
            ++R.failures;
            if (F.size() == T.order()) {
              failing_epis += 1;
            }
          }
        }
      }

      if (L) {
        // Homs with image exactly A, summed over pairs (A, B) with B in C(A)
        // and A v B = T.
        std::vector<std::uint64_t> exact(L->size(), 0);
        for (std::uint32_t h = 0; h < L->size(); ++h) {
          exact[h] = class_total[sub_class[h]] / class_sizes[sub_class[h]];
        }
        Int full = 0;
        for (std::uint32_t A = 0; A < L->size(); ++A) {
          if (exact[A] == 0) {
            continue;
          }
          std::vector<Elem> cent;
          for (Elem x = 0; x < T.order(); ++x) {
            bool ok = true;
            for (Elem a : L->generators(A)) {
              ok = ok && T.mul(a, x) == T.mul(x, a);
            }
            if (ok) {
              cent.push_back(x);
            }
          }
          std::uint32_t C = L->closure(cent);
          for (std::uint32_t B = 0; B < L->size(); ++B) {
            if (exact[B] != 0 && L->is_subgroup_of(B, C)
                && L->join(A, B) == L->whole()) {
              full += Int(static_cast<unsigned long>(exact[A]))
                      * Int(static_cast<unsigned long>(exact[B]));
            }
          }
        }
        R.full_epis = full;
        R.p_epis    = full - failing_epis;
      }
      return R;
    }
  }  // namespace detail

  // (a) simple quotients of Q = G / <<extra>> up to scan_budget; (b) density of
  // the fibre product under every commuting pair of homs into each target of
  // the slice; (c) onto-pair counts for the fibre product vs G x G.
  inline GrothendieckReport grothendieck_report(Presentation const&      G,
                                                std::vector<Word> const& extra,
                                                std::vector<CatalogKey>  slice,
                                                std::size_t              scan_budget,
                                                GrothendieckOptions const& opts = {}) {
    detail::check_words(G, extra, "grothendieck_report");
    GrothendieckReport out;
    out.scan_budget = scan_budget;

    Presentation Q = G;
    for (auto const& r : extra) {
      Q.add_relator(r);
    }
    bool incomplete = false;
    try {
      auto scan          = simple_quotient_scan(Q, scan_budget, opts.hom);
      out.scan_quotients = scan.quotients;
      out.scan_scanned   = scan.scanned;
    } catch (BudgetExceeded const& e) {
      out.scan_scanned.push_back(std::string("budget: ") + e.what());
      incomplete = true;
    }
    if (!out.scan_quotients.empty()) {
      out.verdict       = "FAIL";
      out.failed_at     = "(a)";
      out.pairs_skipped = true;
      return out;
    }

    for (auto const& k : sorted_keys(std::move(slice))) {
      out.targets.push_back(detail::pair_target(G, extra, k, opts));
    }
    for (auto const& t : out.targets) {
      incomplete = incomplete || !t.error.empty();
      if (out.failed_at.empty() && t.error.empty() && t.failures > 0) {
        out.failed_at = "(b)";
      }
    }
    if (out.failed_at.empty()) {
      for (auto const& t : out.targets) {
        if (!t.epis_ok() && t.error.empty()) {
          out.failed_at = "(c)";
        }
      }
    }
    out.verdict = !out.failed_at.empty() ? "FAIL" : incomplete ? "INCOMPLETE" : "PASS";
    return out;
  }

}  // namespace sfsgrp
