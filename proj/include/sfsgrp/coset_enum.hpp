#pragma once

// HLT coset enumeration with union-find coincidence processing, and
// Reidemeister-Schreier rewriting over a Schreier transversal.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "finite_group.hpp"
#include "presentation.hpp"

namespace sfsgrp {

  inline constexpr std::size_t default_max_cosets = 1000000;

  // Column 2g is the action of generator g, column 2g+1 that of its inverse.
  class CosetTable {
   public:
    static constexpr std::uint32_t undefined = UINT32_MAX;

    CosetTable() = default;
    CosetTable(std::size_t cosets, std::size_t gens, std::vector<Word> subgroup)
        : _cosets(cosets),
          _gens(gens),
          _data(cosets * 2 * gens, undefined),
          _subgroup(std::move(subgroup)) {}

    std::size_t num_cosets() const noexcept {
      return _cosets;
    }
    std::size_t num_generators() const noexcept {
      return _gens;
    }
    std::vector<Word> const& subgroup_generators() const noexcept {
      return _subgroup;
    }

    std::uint32_t act(std::size_t coset, std::size_t gen, int sign) const {
      return _data[coset * 2 * _gens + 2 * gen + (sign < 0 ? 1 : 0)];
    }
    void set(std::size_t coset, std::size_t gen, int sign, std::uint32_t v) {
      _data[coset * 2 * _gens + 2 * gen + (sign < 0 ? 1 : 0)] = v;
    }

    std::uint32_t trace(std::uint32_t coset, Word const& w) const {
      for (auto const& s : w.syllables()) {
        int const sign = s.exp > 0 ? 1 : -1;
        for (std::int64_t i = 0; i < std::abs(s.exp); ++i) {
          coset = act(coset, s.gen, sign);
          if (coset == undefined) {
            return undefined;
          }
        }
      }
      return coset;
    }

    // Total, mutually inverse columns, relators closed at every coset,
    // subgroup generators fix coset 0.
    bool is_valid_for(Presentation const& P) const {
      if (P.num_generators() != _gens || _cosets == 0) {
        return false;
      }
      for (std::size_t c = 0; c < _cosets; ++c) {
        for (std::size_t g = 0; g < _gens; ++g) {
          auto d = act(c, g, 1);
          if (d == undefined || d >= _cosets || act(d, g, -1) != c) {
            return false;
          }
        }
        for (auto const& r : P.relators()) {
          if (trace(std::uint32_t(c), r) != c) {
            return false;
          }
        }
      }
      for (auto const& h : _subgroup) {
        if (trace(0, h) != 0) {
          return false;
        }
      }
      return true;
    }

    // Permutation of the cosets induced by each generator.
    std::vector<Perm> generator_permutations() const {
      std::vector<Perm> out(_gens, Perm(_cosets));
      for (std::size_t g = 0; g < _gens; ++g) {
        for (std::size_t c = 0; c < _cosets; ++c) {
          out[g][c] = act(c, g, 1);
        }
      }
      return out;
    }

   private:
    std::size_t                _cosets = 0;
    std::size_t                _gens   = 0;
    std::vector<std::uint32_t> _data;
    std::vector<Word>          _subgroup;
  };

  namespace detail {
    class ToddCoxeter {
     public:
      ToddCoxeter(Presentation const& P, std::size_t max_cosets)
          : _n(P.num_generators()), _max(max_cosets) {
        for (auto const& r : P.relators()) {
          _rels.push_back(letters(r));
        }
        new_coset();
      }

      CosetTable run(std::vector<Word> const& H) {
        for (auto const& h : H) {
          scan_and_fill(0, letters(h));
        }
        for (std::size_t c = 0; c < _parent.size(); ++c) {
          for (std::size_t r = 0; r < _rels.size() && live(c); ++r) {
            scan_and_fill(std::uint32_t(c), _rels[r]);
          }
          for (std::size_t x = 0; x < 2 * _n && live(c); ++x) {
            if (cell(c, x) == CosetTable::undefined) {
              define(std::uint32_t(c), x);
            }
          }
        }
        return compact(H);
      }

     private:
      using Letters = std::vector<std::size_t>;  // column indices

      static Letters letters(Word const& w) {
        Letters out;
        for (auto const& s : w.syllables()) {
          for (std::int64_t i = 0; i < std::abs(s.exp); ++i) {
            out.push_back(2 * s.gen + (s.exp > 0 ? 0 : 1));
          }
        }
        return out;
      }
      static std::size_t inverse(std::size_t x) {
        return x ^ 1u;
      }

      bool live(std::size_t c) const {
        return _parent[c] == c;
      }
      std::uint32_t& cell(std::size_t c, std::size_t x) {
        return _rows[c * 2 * _n + x];
      }

      std::uint32_t new_coset() {
        std::size_t c = _parent.size();
        if (c >= _max) {
          throw BudgetExceeded("coset enumeration exceeded "
                               + std::to_string(_max) + " cosets");
        }
        _parent.push_back(std::uint32_t(c));
        _rows.resize(_rows.size() + 2 * _n, CosetTable::undefined);
        return std::uint32_t(c);
      }

      void define(std::uint32_t c, std::size_t x) {
        std::uint32_t d = new_coset();
        cell(c, x)          = d;
        cell(d, inverse(x)) = c;
      }

      std::uint32_t rep(std::uint32_t c) {
        std::uint32_t r = c;
        while (_parent[r] != r) {
          r = _parent[r];
        }
        while (_parent[c] != r) {
          std::uint32_t next = _parent[c];
          _parent[c]         = r;
          c                  = next;
        }
        return r;
      }

      void merge(std::uint32_t a, std::uint32_t b) {
        a = rep(a);
        b = rep(b);
        if (a == b) {
          return;
        }
        if (a > b) {
          std::swap(a, b);
        }
        _parent[b] = a;
        _queue.push_back(b);
      }

      void coincidence(std::uint32_t a, std::uint32_t b) {
        merge(a, b);
        while (!_queue.empty()) {
          std::uint32_t e = _queue.front();
          _queue.pop_front();
          for (std::size_t x = 0; x < 2 * _n; ++x) {
            std::uint32_t f = cell(e, x);
            if (f == CosetTable::undefined) {
              continue;
            }
            if (cell(f, inverse(x)) == e) {
              cell(f, inverse(x)) = CosetTable::undefined;
            }
            std::uint32_t e1 = rep(e), f1 = rep(f);
            if (cell(e1, x) != CosetTable::undefined) {
              merge(f1, cell(e1, x));
            } else if (cell(f1, inverse(x)) != CosetTable::undefined) {
              merge(e1, cell(f1, inverse(x)));
            } else {
              cell(e1, x)          = f1;
              cell(f1, inverse(x)) = e1;
            }
          }
        }
      }

      void scan_and_fill(std::uint32_t c, Letters const& w) {
        if (w.empty()) {
          return;
        }
        std::uint32_t f = c, b = c;
        std::size_t   i = 0, j = w.size();  // unscanned letters are w[i..j)
        while (true) {
          while (i < j && cell(f, w[i]) != CosetTable::undefined) {
            f = cell(f, w[i]);
            ++i;
          }
          if (i == j) {
            if (f != b) {
              coincidence(f, b);
            }
            return;
          }
          while (j > i && cell(b, inverse(w[j - 1])) != CosetTable::undefined) {
            b = cell(b, inverse(w[j - 1]));
            --j;
          }
          if (i == j) {
            coincidence(f, b);
            return;
          }
          if (j == i + 1) {
            cell(f, w[i])          = b;
            cell(b, inverse(w[i])) = f;
            return;
          }
          define(f, w[i]);
        }
      }

      CosetTable compact(std::vector<Word> const& H) {
        std::vector<std::uint32_t> index(_parent.size(), CosetTable::undefined);
        std::uint32_t              k = 0;
        for (std::size_t c = 0; c < _parent.size(); ++c) {
          if (live(c)) {
            index[c] = k++;
          }
        }
        CosetTable T(k, _n, H);
        for (std::size_t c = 0; c < _parent.size(); ++c) {
          if (!live(c)) {
            continue;
          }
          for (std::size_t g = 0; g < _n; ++g) {
            for (int sign : {1, -1}) {
              std::uint32_t d = cell(c, 2 * g + (sign > 0 ? 0 : 1));
              if (d == CosetTable::undefined) {
                throw Error("coset enumeration left an undefined entry");
              }
              T.set(index[c], g, sign, index[rep(d)]);
            }
          }
        }
        return T;
      }

      std::size_t                _n;
      std::size_t                _max;
      std::vector<Letters>       _rels;
      std::vector<std::uint32_t> _rows;
      std::vector<std::uint32_t> _parent;
      std::deque<std::uint32_t>  _queue;
    };
  }  // namespace detail

  // Complete coset table of <H> in P; cosets numbered by first definition.
  inline CosetTable enumerate_cosets(Presentation const&      P,
                                     std::vector<Word> const& H,
                                     std::size_t max_cosets = default_max_cosets) {
    if (max_cosets < 1) {
      throw InvalidArgument("enumerate_cosets: max_cosets must be >= 1");
    }
    for (auto const& h : H) {
      if (!h.empty() && h.max_generator() >= P.num_generators()) {
        throw InvalidArgument("enumerate_cosets: subgroup word outside P");
      }
    }
    auto T = detail::ToddCoxeter(P, max_cosets).run(H);
    if (!T.is_valid_for(P)) {
      throw Error("enumerate_cosets: internal table check failed");
    }
    return T;
  }

  ////////////////////////////////////////////////////////////////////////
  // Reidemeister-Schreier
  ////////////////////////////////////////////////////////////////////////

  struct SchreierData {
    // Transversal word for each coset (BFS tree in column order).
    std::vector<Word> transversal;
    // Schreier generator (coset, generator) -> index or npos if a tree edge.
    std::vector<std::size_t> gen_index;
    // Words in P for each Schreier generator: rep(c) g rep(c g)^-1.
    std::vector<Word>        words;
    std::vector<std::string> names;
    static constexpr std::size_t npos = std::size_t(-1);
  };

  inline SchreierData schreier_generators(Presentation const& P,
                                          CosetTable const&   T) {
    if (!T.is_valid_for(P)) {
      throw InvalidArgument("schreier_generators: incomplete coset table");
    }
    std::size_t const n = T.num_cosets(), k = P.num_generators();
    SchreierData      S;
    S.transversal.assign(n, Word());
    std::vector<char>        reached(n, 0);
    std::vector<std::size_t> tree_gen(n * k, 0);
    std::vector<std::size_t> order{0};
    reached[0] = 1;
    for (std::size_t i = 0; i < order.size(); ++i) {
      std::size_t c = order[i];
      for (std::size_t g = 0; g < k; ++g) {
        for (int sign : {1, -1}) {
          std::size_t d = T.act(c, g, sign);
          if (!reached[d]) {
            reached[d]       = 1;
            S.transversal[d] = S.transversal[c] * Word::gen(g, sign);
            order.push_back(d);
            // the edge (c, g) or (d, g) becomes trivial
            if (sign > 0) {
              tree_gen[c * k + g] = 1;
            } else {
              tree_gen[d * k + g] = 1;
            }
          }
        }
      }
    }
    S.gen_index.assign(n * k, SchreierData::npos);
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t g = 0; g < k; ++g) {
        if (tree_gen[c * k + g]) {
          continue;
        }
        S.gen_index[c * k + g] = S.words.size();
        S.words.push_back(S.transversal[c] * Word::gen(g)
                          * S.transversal[T.act(c, g, 1)].inverse());
        S.names.push_back(P.name(g) + "_" + std::to_string(c));
      }
    }
    return S;
  }

  // Rewrites w read from coset c into the Schreier generators.
  inline Word rewrite(CosetTable const& T, SchreierData const& S,
                      std::size_t c, Word const& w) {
    std::size_t const     k = T.num_generators();
    std::vector<Syllable> raw;
    for (auto const& s : w.syllables()) {
      for (std::int64_t i = 0; i < std::abs(s.exp); ++i) {
        if (s.exp > 0) {
          std::size_t id = S.gen_index[c * k + s.gen];
          if (id != SchreierData::npos) {
            raw.push_back({id, 1});
          }
          c = T.act(c, s.gen, 1);
        } else {
          std::size_t d  = T.act(c, s.gen, -1);
          std::size_t id = S.gen_index[d * k + s.gen];
          if (id != SchreierData::npos) {
            raw.push_back({id, -1});
          }
          c = d;
        }
      }
    }
    return Word(raw);
  }

  struct SubgroupPresentationResult {
    Presentation presentation;
    // Words in P for each generator of the simplified presentation.
    std::vector<Word> generator_words;
    std::size_t       schreier_generator_count = 0;
    std::size_t       index                    = 0;
  };

  inline SubgroupPresentationResult reidemeister_schreier(Presentation const& P,
                                                          CosetTable const& T) {
    auto              S = schreier_generators(P, T);
    std::vector<Word> rels;
    for (std::size_t c = 0; c < T.num_cosets(); ++c) {
      for (auto const& r : P.relators()) {
        rels.push_back(rewrite(T, S, c, r).cyclically_reduced());
      }
    }
    std::size_t const m = S.words.size();
    std::vector<char> alive(m, 1);

    // Kill generators appearing alone in a relator, until none remain.
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto const& r : rels) {
        if (r.num_syllables() == 1 && std::abs(r.syllables()[0].exp) == 1) {
          std::size_t g = r.syllables()[0].gen;
          alive[g]      = 0;
          std::vector<Word> images;
          for (std::size_t i = 0; i < m; ++i) {
            images.push_back(i == g ? Word() : Word::gen(i));
          }
          for (auto& w : rels) {
            w = w.substitute(images).cyclically_reduced();
          }
          changed = true;
          break;
        }
      }
    }

    std::vector<std::size_t> renum(m, SchreierData::npos);
    SubgroupPresentationResult out;
    std::vector<std::string>   names;
    for (std::size_t i = 0; i < m; ++i) {
      if (alive[i]) {
        renum[i] = names.size();
        names.push_back(S.names[i]);
        out.generator_words.push_back(S.words[i]);
      }
    }
    std::set<Word>    seen;
    std::vector<Word> kept;
    for (auto const& r : rels) {
      if (r.empty()) {
        continue;
      }
      Word w = r.relabelled(renum);
      if (seen.insert(w).second) {
        kept.push_back(std::move(w));
      }
    }
    out.presentation             = Presentation(std::move(names), std::move(kept));
    out.schreier_generator_count = m;
    out.index                    = T.num_cosets();
    return out;
  }

  inline Presentation subgroup_presentation(Presentation const& P,
                                            CosetTable const&   T) {
    return reidemeister_schreier(P, T).presentation;
  }

  ////////////////////////////////////////////////////////////////////////
  // Kernels of maps to finite groups
  ////////////////////////////////////////////////////////////////////////

  // Coset table of ker(phi): cosets are the elements of im(phi) numbered in
  // BFS order, acting by right multiplication with the generator images.
  inline CosetTable kernel_coset_table(Presentation const&      P,
                                       FiniteGroup const&       G,
                                       std::vector<Elem> const& images) {
    if (images.size() != P.num_generators()) {
      throw InvalidArgument("kernel_gens: image count mismatch");
    }
    for (Elem x : images) {
      if (x >= G.order()) {
        throw InvalidArgument("kernel_gens: image outside the group");
      }
    }
    for (auto const& r : P.relators()) {
      if (G.evaluate(r, images) != G.identity()) {
        throw InvalidArgument("kernel_gens: relator "
                              + P.word_to_string(r)
                              + " does not map to the identity");
      }
    }
    std::vector<std::uint32_t> index(G.order(), CosetTable::undefined);
    std::vector<Elem>          elems{G.identity()};
    index[G.identity()] = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (Elem s : images) {
        for (Elem y : {G.mul(elems[i], s), G.mul(elems[i], G.inv(s))}) {
          if (index[y] == CosetTable::undefined) {
            index[y] = std::uint32_t(elems.size());
            elems.push_back(y);
          }
        }
      }
    }
    CosetTable T(elems.size(), P.num_generators(), {});
    for (std::size_t c = 0; c < elems.size(); ++c) {
      for (std::size_t g = 0; g < images.size(); ++g) {
        T.set(c, g, 1, index[G.mul(elems[c], images[g])]);
        T.set(c, g, -1, index[G.mul(elems[c], G.inv(images[g]))]);
      }
    }
    return T;
  }

  // Schreier generators of the kernel, as words in P.
  inline std::vector<Word> kernel_gens(Presentation const&      P,
                                       FiniteGroup const&       G,
                                       std::vector<Elem> const& images) {
    return schreier_generators(P, kernel_coset_table(P, G, images)).words;
  }

}  // namespace sfsgrp
