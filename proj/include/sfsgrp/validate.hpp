#pragma once

// Refutation-only checks that a generator map is an endomorphism.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "hom_search.hpp"
#include "linalg.hpp"
#include "presentation.hpp"
#include "pquotient.hpp"

namespace sfsgrp {

  struct ValidateOptions {
    std::vector<unsigned> primes      = {2, 3};
    unsigned              max_class   = 3;
    std::size_t           order_budget = 60;  // catalog targets up to this order
    std::uint64_t         max_nodes    = default_max_nodes;
  };

  struct Refutation {
    std::string stage;    // "abelianization", "2-quotient class 3", "finite quotient A5"
    std::string relator;  // the relator whose image survives
    std::string detail;
  };

  struct ValidationReport {
    std::optional<Refutation> refutation;
    std::vector<std::string>  checks_run;
    std::vector<std::string>  budget_errors;  // checks skipped, not refutations

    bool refuted() const {
      return refutation.has_value();
    }
    std::string verdict() const {
      return refuted() ? "refuted" : "not refuted";
    }
  };

  namespace detail {
    // v lies in the integer row space of M.
    inline bool in_row_space(IntMatrix const& M, std::vector<Int> const& v) {
      std::size_t const n = v.size();
      if (M.rows() == 0) {
        for (auto const& x : v) {
          if (x != 0) {
            return false;
          }
        }
        return true;
      }
      auto snf = smith_normal_form(M);
      // rowspace(M) = rowspace(S V^-1), so test v V against S.
      auto d = snf.diagonal();
      for (std::size_t j = 0; j < n; ++j) {
        Int x = 0;
        for (std::size_t i = 0; i < n; ++i) {
          x += v[i] * snf.V(i, j);
        }
        Int s = j < d.size() ? d[j] : Int(0);
        if (s == 0 ? x != 0 : x % s != 0) {
          return false;
        }
      }
      return true;
    }
  }  // namespace detail

  // phi[g] is the image of generator g, a word in P's generators. A relator
  // whose image is nontrivial in some computable quotient refutes phi. Passing
  // every check proves nothing.
  inline ValidationReport validate_map_soundly(Presentation const&      P,
                                               std::vector<Word> const& phi,
                                               ValidateOptions const&   opts = {}) {
    std::size_t const n = P.num_generators();
    if (phi.size() != n) {
      throw InvalidArgument("validate_map_soundly: " + std::to_string(phi.size())
                            + " images for " + std::to_string(n) + " generators");
    }
    for (auto const& w : phi) {
      if (!w.empty() && w.max_generator() >= n) {
        throw InvalidArgument("validate_map_soundly: image outside the group");
      }
    }
    std::vector<Word> images;
    for (auto const& r : P.relators()) {
      images.push_back(r.substitute(phi));
    }

    ValidationReport out;
    auto refute = [&](std::string stage, std::size_t i, std::string detail) {
      out.refutation = Refutation{std::move(stage), P.word_to_string(P.relators()[i]),
                                  std::move(detail)};
    };

    out.checks_run.push_back("abelianization");
    IntMatrix const M = P.relation_matrix();
    for (std::size_t i = 0; i < images.size(); ++i) {
      std::vector<Int> v(n, 0);
      for (auto const& s : images[i].syllables()) {
        v[s.gen] += Int(static_cast<long>(s.exp));
      }
      if (!detail::in_row_space(M, v)) {
        refute("abelianization", i, "image " + P.word_to_string(images[i])
                                        + " is nontrivial in H1");
        return out;
      }
    }

    for (unsigned p : opts.primes) {
      std::string const name = std::to_string(p) + "-quotient class "
                               + std::to_string(opts.max_class);
      try {
        auto R = compute_pquotient(P, p, opts.max_class);
        out.checks_run.push_back(name);
        for (auto const& st : R.stages) {
          for (std::size_t i = 0; i < images.size(); ++i) {
            if (detail::evaluate_source(st.pc, images[i], st.images)
                != st.pc.identity()) {
              refute(std::to_string(p) + "-quotient class " + std::to_string(st.cls),
                     i, "image nontrivial in a quotient of order "
                            + std::to_string(p) + "^"
                            + std::to_string(st.pc.num_generators()));
              return out;
            }
          }
        }
      } catch (BudgetExceeded const& e) {
        out.budget_errors.push_back(name + ": " + e.what());
      }
    }

    HomSearchOptions hopts;
    hopts.max_nodes  = opts.max_nodes;
    hopts.count_epis = false;
    for (auto const& k : catalog_up_to(opts.order_budget)) {
      std::string const key = k.to_string();
      auto const&       T   = *catalog_group(key);
      try {
        std::optional<std::size_t> bad;
        // Triviality is conjugation invariant, so class reps suffice.
        for_each_hom(P, T, hopts, [&](std::vector<Elem> const& im, std::uint64_t) {
          for (std::size_t i = 0; i < images.size(); ++i) {
            if (T.evaluate(images[i], im) != T.identity()) {
              bad = i;
              return false;
            }
          }
          return true;
        });
        out.checks_run.push_back("finite quotient " + key);
        if (bad) {
          refute("finite quotient " + key, *bad,
                 "image nontrivial under some hom to " + key);
          return out;
        }
      } catch (BudgetExceeded const& e) {
        out.budget_errors.push_back("finite quotient " + key + ": " + e.what());
      }
    }
    return out;
  }

}  // namespace sfsgrp
