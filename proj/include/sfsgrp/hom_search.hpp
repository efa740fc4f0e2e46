#pragma once

// Homomorphism search from finitely presented groups into enumerated finite
// groups: counting, fingerprints, density checks and the simple-quotient scan.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "catalog.hpp"
#include "errors.hpp"
#include "finite_group.hpp"
#include "linalg.hpp"
#include "presentation.hpp"

namespace sfsgrp {

  inline constexpr std::uint64_t default_max_nodes = 1000000000ULL;

  struct HomSearchOptions {
    std::uint64_t max_nodes         = default_max_nodes;
    bool          tietze            = true;
    bool          class_reps        = true;
    bool          transporters      = true;
    bool          count_epis        = true;
    bool          stop_at_first_epi = false;
  };

  struct HomCount {
    std::string   target;
    std::uint64_t homs       = 0;
    std::uint64_t epis       = 0;
    std::uint64_t nodes      = 0;
    bool          exhaustive = true;  // false when stopped at the first epi

    friend bool operator==(HomCount const& a, HomCount const& b) {
      return a.target == b.target && a.homs == b.homs && a.epis == b.epis;
    }
  };

  ////////////////////////////////////////////////////////////////////////
  // Tietze elimination
  ////////////////////////////////////////////////////////////////////////

  struct EliminatedPresentation {
    Presentation reduced;
    // Original index of each surviving generator.
    std::vector<std::size_t> kept;
    // Each original generator as a word in the surviving generators.
    std::vector<Word> expressions;
  };

  // Repeatedly removes a generator occurring exactly once in some relator,
  // choosing the generator with the fewest total occurrences (ties: highest
  // index). Stops if a relator would exceed max_length letters.
  inline EliminatedPresentation eliminate_generators(Presentation const& P,
                                                     std::size_t max_length = 2048) {
    std::size_t const n = P.num_generators();
    std::vector<Word> rels = P.relators();
    std::vector<Word> expr;
    std::vector<char> alive(n, 1);
    for (std::size_t g = 0; g < n; ++g) {
      expr.push_back(Word::gen(g));
    }
    while (true) {
      std::size_t best = n, best_occ = 0, best_rel = 0;
      for (std::size_t x = 0; x < n; ++x) {
        if (!alive[x]) {
          continue;
        }
        std::size_t occ = 0, rel = rels.size();
        for (std::size_t i = 0; i < rels.size(); ++i) {
          std::size_t o = rels[i].occurrences(x);
          occ += o;
          if (o == 1 && rel == rels.size()) {
            rel = i;
          }
        }
        if (rel == rels.size()) {
          continue;
        }
        if (best == n || occ <= best_occ) {
          best     = x;
          best_occ = occ;
          best_rel = rel;
        }
      }
      if (best == n) {
        break;
      }
      Word const& r   = rels[best_rel];
      std::size_t pos = 0;
      while (r.syllables()[pos].gen != best) {
        ++pos;
      }
      Word rot = r.rotated(pos);
      auto syl = rot.syllables();
      int  e   = syl.front().exp > 0 ? 1 : -1;
      Word W(std::vector<Syllable>(syl.begin() + 1, syl.end()));
      Word value = e > 0 ? W.inverse() : W;

      std::vector<Word> images;
      for (std::size_t g = 0; g < n; ++g) {
        images.push_back(g == best ? value : Word::gen(g));
      }
      std::vector<Word> next;
      bool              too_long = false;
      for (std::size_t i = 0; i < rels.size(); ++i) {
        if (i == best_rel) {
          continue;
        }
        Word w = rels[i].substitute(images).cyclically_reduced();
        too_long = too_long || w.length() > max_length;
        if (!w.empty()) {
          next.push_back(std::move(w));
        }
      }
      if (too_long) {
        break;
      }
      rels = std::move(next);
      for (auto& w : expr) {
        w = w.substitute(images);
      }
      alive[best] = 0;
    }
    EliminatedPresentation out;
    std::vector<std::size_t> renum(n, 0);
    std::vector<std::string> names;
    for (std::size_t g = 0; g < n; ++g) {
      if (alive[g]) {
        renum[g] = out.kept.size();
        out.kept.push_back(g);
        names.push_back(P.name(g));
      }
    }
    for (auto& r : rels) {
      r = r.relabelled(renum);
    }
    for (auto& w : expr) {
      w = w.relabelled(renum);
    }
    out.reduced     = Presentation(std::move(names), std::move(rels));
    out.expressions = std::move(expr);
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Subgroup lattice of a small group
  ////////////////////////////////////////////////////////////////////////

  // All subgroups as bitsets, with join-by-element and conjugation tables.
  class SubgroupLattice {
   public:
    static constexpr std::size_t max_group_order = 256;
    static constexpr std::size_t max_subgroups   = 6000;

    explicit SubgroupLattice(FiniteGroup const& G) : _G(&G), _n(G.order()) {
      if (_n > max_group_order) {
        throw BudgetExceeded("SubgroupLattice: group order "
                             + std::to_string(_n) + " above "
                             + std::to_string(max_group_order));
      }
      _words = (_n + 63) / 64;
      add(bits_of({G.identity()}), {});
      for (std::size_t h = 0; h < _subs.size(); ++h) {
        for (Elem x = 0; x < _n; ++x) {
          if (contains(std::uint32_t(h), x)) {
            _join.push_back(std::uint32_t(h));
            continue;
          }
          auto gens = _subs[h].gens;
          gens.push_back(x);
          auto                  elems = G.subgroup_closure(gens);
          std::vector<std::uint64_t> b = bits_of(elems);
          auto                  it = _index.find(key(b));
          std::uint32_t         id;
          if (it == _index.end()) {
            if (_subs.size() >= max_subgroups) {
              throw BudgetExceeded("SubgroupLattice: more than "
                                   + std::to_string(max_subgroups)
                                   + " subgroups");
            }
            id = add(std::move(b), std::move(gens));
          } else {
            id = it->second;
          }
          _join.push_back(id);
        }
      }
      _conj.resize(_subs.size() * _n);
      for (std::size_t h = 0; h < _subs.size(); ++h) {
        for (Elem g = 0; g < _n; ++g) {
          std::vector<std::uint64_t> b(_words, 0);
          for (Elem x : _subs[h].elems) {
            Elem y = G.conj(x, g);
            b[y / 64] |= std::uint64_t(1) << (y % 64);
          }
          _conj[h * _n + g] = _index.at(key(b));
        }
      }
      _whole = _index.at(key(bits_of(G.subgroup_closure(G.generators()))));
    }

    std::size_t size() const noexcept {
      return _subs.size();
    }
    std::uint32_t trivial() const noexcept {
      return 0;
    }
    std::uint32_t whole() const noexcept {
      return _whole;
    }
    std::size_t order_of(std::uint32_t h) const {
      return _subs[h].elems.size();
    }
    std::vector<Elem> const& elements(std::uint32_t h) const {
      return _subs[h].elems;
    }
    std::vector<Elem> const& generators(std::uint32_t h) const {
      return _subs[h].gens;
    }
    bool contains(std::uint32_t h, Elem x) const {
      return (_subs[h].bits[x / 64] >> (x % 64)) & 1u;
    }
    std::uint32_t join_elem(std::uint32_t h, Elem x) const {
      return _join[std::size_t(h) * _n + x];
    }
    std::uint32_t join(std::uint32_t h, std::uint32_t k) const {
      for (Elem x : _subs[k].gens) {
        h = join_elem(h, x);
      }
      return h;
    }
    std::uint32_t conj(std::uint32_t h, Elem g) const {
      return _conj[std::size_t(h) * _n + g];
    }
    bool is_subgroup_of(std::uint32_t h, std::uint32_t k) const {
      return join(k, h) == k;
    }
    template <class It>
    std::uint32_t closure(It first, It last) const {
      std::uint32_t h = trivial();
      for (; first != last; ++first) {
        h = join_elem(h, *first);
      }
      return h;
    }
    std::uint32_t closure(std::vector<Elem> const& xs) const {
      return closure(xs.begin(), xs.end());
    }
    // Normal closure of xs inside the subgroup generated by a_gens.
    std::uint32_t normal_closure(std::vector<Elem> const& xs,
                                 std::vector<Elem> const& a_gens) const {
      std::uint32_t N = closure(xs);
      bool          changed = true;
      while (changed) {
        changed = false;
        for (Elem a : a_gens) {
          std::uint32_t M = conj(N, a);
          if (M != N) {
            N       = join(N, M);
            changed = true;
          }
        }
      }
      return N;
    }

   private:
    struct Sub {
      std::vector<std::uint64_t> bits;
      std::vector<Elem>          elems;
      std::vector<Elem>          gens;
    };

    std::vector<std::uint64_t> bits_of(std::vector<Elem> const& elems) const {
      std::vector<std::uint64_t> b(_words, 0);
      for (Elem x : elems) {
        b[x / 64] |= std::uint64_t(1) << (x % 64);
      }
      return b;
    }
    static std::string key(std::vector<std::uint64_t> const& b) {
      return std::string(reinterpret_cast<char const*>(b.data()),
                         b.size() * sizeof(std::uint64_t));
    }
    std::uint32_t add(std::vector<std::uint64_t> b, std::vector<Elem> gens) {
      Sub s;
      for (Elem x = 0; x < _n; ++x) {
        if ((b[x / 64] >> (x % 64)) & 1u) {
          s.elems.push_back(x);
        }
      }
      s.gens = std::move(gens);
      std::uint32_t id = std::uint32_t(_subs.size());
      _index.emplace(key(b), id);
      s.bits = std::move(b);
      _subs.push_back(std::move(s));
      return id;
    }

    FiniteGroup const*                             _G;
    std::size_t                                    _n;
    std::size_t                                    _words = 1;
    std::vector<Sub>                               _subs;
    std::unordered_map<std::string, std::uint32_t> _index;
    std::vector<std::uint32_t>                     _join;
    std::vector<std::uint32_t>                     _conj;
    std::uint32_t                                  _whole = 0;
  };

  namespace detail {
    inline std::string group_identity(FiniteGroup const& G) {
      std::string s = G.label() + "/" + std::to_string(G.order()) + "/";
      for (Elem g : G.generators()) {
        for (unsigned p : G.permutation(g)) {
          s += std::to_string(p) + ",";
        }
        s += ";";
      }
      return s;
    }
  }  // namespace detail

  // Cached lattice, or nullptr when the group is too large for one.
  inline std::shared_ptr<SubgroupLattice const> lattice_for(FiniteGroup const& G) {
    if (G.order() > SubgroupLattice::max_group_order) {
      return nullptr;
    }
    static std::mutex                                                       mu;
    static std::map<std::string, std::shared_ptr<SubgroupLattice const>> cache;
    std::string const id = detail::group_identity(G);
    {
      std::lock_guard<std::mutex> lock(mu);
      auto                        it = cache.find(id);
      if (it != cache.end()) {
        return it->second;
      }
    }
    std::shared_ptr<SubgroupLattice const> L;
    try {
      L = std::make_shared<SubgroupLattice const>(G);
    } catch (BudgetExceeded const&) {
      L = nullptr;
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(id, L);
    return L;
  }

  ////////////////////////////////////////////////////////////////////////
  // Backtracking search
  ////////////////////////////////////////////////////////////////////////

  // Enumerates generator images satisfying every relator. The first
  // generator may be restricted to class representatives, in which case each
  // solution is reported with the class size as weight.
  class HomSearcher {
   public:
    using Visitor = std::function<bool(std::vector<Elem> const&, std::uint64_t)>;

    HomSearcher(Presentation const& P, FiniteGroup const& G,
                HomSearchOptions const& opts,
                std::vector<char> const* allowed = nullptr)
        : _P(P), _G(G), _opts(opts), _allowed(allowed) {
      plan();
    }

    // Returns false if the visitor stopped the search.
    bool run(Visitor const& visit) {
      _images.assign(_P.num_generators(), _G.identity());
      return descend(0, 1, visit);
    }

    std::uint64_t nodes() const noexcept {
      return _nodes;
    }

   private:
    struct Step {
      std::size_t       gen = 0;
      bool              transporter = false;
      Word              U, Vinv;  // gen^-1 U gen = Vinv
      std::vector<Elem> candidates;
      std::vector<std::uint64_t> weights;
      std::vector<std::size_t> checks;  // relators completed at this step
    };

    void plan() {
      std::size_t const n = _P.num_generators();
      auto const&       R = _P.relators();

      // power filters: x^k relators restrict x to orders dividing k
      std::vector<std::int64_t> power(n, 0);
      for (auto const& r : R) {
        if (r.num_syllables() == 1) {
          auto s     = r.syllables()[0];
          power[s.gen] = std::gcd(power[s.gen], std::abs(s.exp));
        }
      }
      std::vector<std::vector<Elem>> filtered(n);
      for (std::size_t x = 0; x < n; ++x) {
        for (Elem t = 0; t < _G.order(); ++t) {
          if (_allowed && !(*_allowed)[t]) {
            continue;
          }
          if (power[x] == 0 || power[x] % std::int64_t(_G.element_order(t)) == 0) {
            filtered[x].push_back(t);
          }
        }
      }

      std::vector<char> assigned(n, 0);
      for (std::size_t pos = 0; pos < n; ++pos) {
        Step step;
        bool found = false;
        if (_opts.transporters) {
          for (std::size_t x = 0; x < n && !found; ++x) {
            if (!assigned[x]) {
              found = conjugation_shape(x, assigned, step);
            }
          }
        }
        if (!found) {
          std::size_t best = n;
          for (std::size_t x = 0; x < n; ++x) {
            if (!assigned[x]
                && (best == n || filtered[x].size() < filtered[best].size())) {
              best = x;
            }
          }
          step.gen = best;
          if (pos == 0 && _opts.class_reps && _allowed == nullptr) {
            for (std::size_t c = 0; c < _G.num_classes(); ++c) {
              Elem r = _G.class_reps()[c];
              if (power[best] == 0
                  || power[best] % std::int64_t(_G.element_order(r)) == 0) {
                step.candidates.push_back(r);
                step.weights.push_back(_G.class_size(c));
              }
            }
          } else {
            step.candidates = filtered[best];
          }
        }
        assigned[step.gen] = 1;
        _steps.push_back(std::move(step));
      }
      // each relator is checked once all its generators are assigned
      std::vector<std::size_t> position(n, 0);
      for (std::size_t pos = 0; pos < n; ++pos) {
        position[_steps[pos].gen] = pos;
      }
      for (std::size_t i = 0; i < R.size(); ++i) {
        std::size_t last = 0;
        for (auto const& s : R[i].syllables()) {
          last = std::max(last, position[s.gen]);
        }
        if (n > 0) {
          _steps[last].checks.push_back(i);
        }
      }
    }

    // Looks for a relator of the form x^-1 U x V with U, V over assigned
    // generators; then x ranges over the transporter of U to V^-1.
    bool conjugation_shape(std::size_t x, std::vector<char> const& assigned,
                           Step& step) const {
      for (auto const& r0 : _P.relators()) {
        if (r0.occurrences(x) != 2) {
          continue;
        }
        for (Word const& r : {r0, r0.inverse()}) {
          auto const& syl = r.syllables();
          for (std::size_t i = 0; i < syl.size(); ++i) {
            Word rot = r.rotated(i);
            auto const& s = rot.syllables();
            if (s[0].gen != x || s[0].exp != -1) {
              continue;
            }
            std::size_t m = 1;
            while (m < s.size() && s[m].gen != x) {
              ++m;
            }
            if (m == s.size() || s[m].exp != 1) {
              continue;
            }
            std::vector<Syllable> u(s.begin() + 1, s.begin() + std::ptrdiff_t(m));
            std::vector<Syllable> v(s.begin() + std::ptrdiff_t(m) + 1, s.end());
            bool ok = !u.empty();
            for (auto const& t : u) {
              ok = ok && assigned[t.gen];
            }
            for (auto const& t : v) {
              ok = ok && assigned[t.gen];
            }
            if (ok) {
              step.gen         = x;
              step.transporter = true;
              step.U           = Word(u);
              step.Vinv        = Word(v).inverse();
              return true;
            }
          }
        }
      }
      return false;
    }

    bool descend(std::size_t pos, std::uint64_t weight, Visitor const& visit) {
      if (pos == _steps.size()) {
        return visit(_images, weight);
      }
      Step const&       st = _steps[pos];
      std::vector<Elem> dynamic;
      std::vector<Elem> const* cands = &st.candidates;
      if (st.transporter) {
        dynamic = _G.transporter(_G.evaluate(st.U, _images),
                                 _G.evaluate(st.Vinv, _images));
        if (_allowed) {
          std::erase_if(dynamic, [&](Elem t) { return !(*_allowed)[t]; });
        }
        cands = &dynamic;
      }
      for (std::size_t i = 0; i < cands->size(); ++i) {
        if (++_nodes > _opts.max_nodes) {
          throw BudgetExceeded("hom search exceeded " + std::to_string(_opts.max_nodes)
                               + " nodes");
        }
        _images[st.gen] = (*cands)[i];
        bool ok         = true;
        for (std::size_t r : st.checks) {
          if (_G.evaluate(_P.relators()[r], _images) != _G.identity()) {
            ok = false;
            break;
          }
        }
        if (!ok) {
          continue;
        }
        std::uint64_t w = st.weights.empty() ? weight : weight * st.weights[i];
        if (!descend(pos + 1, w, visit)) {
          return false;
        }
      }
      return true;
    }

    Presentation const&      _P;
    FiniteGroup const&       _G;
    HomSearchOptions         _opts;
    std::vector<char> const* _allowed;
    std::vector<Step>        _steps;
    std::vector<Elem>        _images;
    std::uint64_t            _nodes = 0;
  };

  // Visits every hom P -> G (up to conjugacy on the first searched generator
  // when class_reps is set) with images of P's own generators.
  inline std::uint64_t for_each_hom(
      Presentation const& P, FiniteGroup const& G, HomSearchOptions const& opts,
      std::function<bool(std::vector<Elem> const&, std::uint64_t)> const& visit,
      std::vector<char> const* allowed = nullptr) {
    EliminatedPresentation E;
    if (opts.tietze) {
      E = eliminate_generators(P);
    } else {
      E.reduced = P;
      for (std::size_t g = 0; g < P.num_generators(); ++g) {
        E.kept.push_back(g);
        E.expressions.push_back(Word::gen(g));
      }
    }
    HomSearcher       S(E.reduced, G, opts, allowed);
    std::vector<Elem> full(P.num_generators());
    S.run([&](std::vector<Elem> const& im, std::uint64_t w) {
      for (std::size_t g = 0; g < full.size(); ++g) {
        full[g] = G.evaluate(E.expressions[g], im);
      }
      return visit(full, w);
    });
    return S.nodes();
  }

  namespace detail {
    // <xs> == G, via the lattice when available.
    inline bool generates(FiniteGroup const& G, SubgroupLattice const* L,
                          std::vector<Elem> const& xs) {
      if (L) {
        return L->closure(xs) == L->whole();
      }
      return G.generates(xs);
    }
  }  // namespace detail

  inline HomCount count_homs(Presentation const& P, FiniteGroup const& G,
                             HomSearchOptions const& opts = {}) {
    HomCount out;
    out.target  = G.label();
    auto L      = lattice_for(G);
    out.nodes   = for_each_hom(P, G, opts, [&](std::vector<Elem> const& im,
                                             std::uint64_t w) {
      out.homs += w;
      if (opts.count_epis || opts.stop_at_first_epi) {
        if (detail::generates(G, L.get(), im)) {
          out.epis += w;
          if (opts.stop_at_first_epi) {
            out.exhaustive = false;
            return false;
          }
        }
      }
      return true;
    });
    return out;
  }

  inline std::vector<char> centralizer_mask(FiniteGroup const&       G,
                                            std::vector<Elem> const& xs) {
    std::vector<char> mask(G.order(), 1);
    for (Elem x : xs) {
      std::vector<char> cx(G.order(), 0);
      for (Elem c : G.centralizer(x)) {
        cx[c] = 1;
      }
      for (std::size_t i = 0; i < mask.size(); ++i) {
        mask[i] = mask[i] && cx[i];
      }
    }
    return mask;
  }

  // Homs from P x P: pairs of homs with elementwise commuting images.
  inline HomCount count_homs_product(Presentation const& P, FiniteGroup const& G,
                                     HomSearchOptions const& opts = {}) {
    HomCount out;
    out.target = G.label();
    auto L     = lattice_for(G);
    HomSearchOptions inner = opts;
    inner.class_reps       = false;
    std::uint64_t nodes    = 0;
    out.nodes = for_each_hom(P, G, opts, [&](std::vector<Elem> const& a,
                                             std::uint64_t w) {
      auto mask = centralizer_mask(G, a);
      inner.max_nodes = opts.max_nodes > nodes ? opts.max_nodes - nodes : 0;
      nodes += for_each_hom(P, G, inner, [&](std::vector<Elem> const& b,
                                             std::uint64_t) {
        out.homs += w;
        if (opts.count_epis) {
          std::vector<Elem> ab = a;
          ab.insert(ab.end(), b.begin(), b.end());
          if (detail::generates(G, L.get(), ab)) {
            out.epis += w;
          }
        }
        return true;
      }, &mask);
      return true;
    });
    out.nodes += nodes;
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Fingerprints
  ////////////////////////////////////////////////////////////////////////

  struct FingerprintEntry {
    CatalogKey               key;
    std::optional<HomCount>  count;  // empty when the budget was exceeded
    std::string              error;
  };

  struct Fingerprint {
    std::vector<FingerprintEntry> entries;

    bool operator==(Fingerprint const& o) const {
      if (entries.size() != o.entries.size()) {
        return false;
      }
      for (std::size_t i = 0; i < entries.size(); ++i) {
        auto const& a = entries[i];
        auto const& b = o.entries[i];
        if (!(a.key == b.key) || a.count.has_value() != b.count.has_value()
            || (a.count && !(*a.count == *b.count))) {
          return false;
        }
      }
      return true;
    }
  };

  inline Fingerprint fingerprint(Presentation const&     P,
                                 std::vector<CatalogKey> slice,
                                 HomSearchOptions const& opts = {}) {
    Fingerprint F;
    for (auto const& k : sorted_keys(std::move(slice))) {
      FingerprintEntry e{k, std::nullopt, ""};
      try {
        e.count = count_homs(P, *catalog_group(k.to_string()), opts);
        e.count->target = k.to_string();
      } catch (BudgetExceeded const& ex) {
        e.error = ex.what();
      }
      F.entries.push_back(std::move(e));
    }
    return F;
  }

  ////////////////////////////////////////////////////////////////////////
  // Density checks
  ////////////////////////////////////////////////////////////////////////

  struct DensityReport {
    std::string                    target;
    bool                           passed = true;
    std::string                    method;
    std::uint64_t                  maps_checked = 0;
    std::uint64_t                  failures     = 0;
    std::vector<std::vector<Elem>> failing_examples;  // generator images
  };

  using WordPair = std::pair<Word, Word>;

  namespace detail {
    // Exponent vectors of words over 2n generators: first copy then second.
    inline IntMatrix stack_rows(std::vector<std::vector<long>> const& rows,
                                std::size_t                          cols) {
      IntMatrix M(rows.size(), cols);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
          M(i, j) = rows[i][j];
        }
      }
      return M;
    }

    inline std::vector<long> exponents(Word const& w, std::size_t n,
                                       std::size_t offset, std::size_t cols) {
      std::vector<long> v(cols, 0);
      for (auto const& s : w.syllables()) {
        v[offset + s.gen] += long(s.exp);
      }
      (void) n;
      return v;
    }

    // For abelian T: some map kills the subgroup's image without being
    // trivial iff Hom(Ab / L, T) != 0.
    inline DensityReport abelian_density(std::vector<std::vector<long>> rows,
                                         std::size_t                    cols,
                                         FiniteGroup const&             T) {
      DensityReport R;
      R.target = T.label();
      R.method = "abelian target: Smith normal form of Ab/L";
      auto        inv = cokernel_invariants(stack_rows(rows, cols));
      std::size_t t   = T.order();
      bool        bad = t > 1 && inv.free_rank > 0;
      for (auto const& d : inv.torsion) {
        Int g;
        mpz_gcd_ui(g.get_mpz_t(), d.get_mpz_t(), t);
        bad = bad || g > 1;
      }
      R.passed = !bad;
      R.failures = bad ? 1 : 0;
      return R;
    }
  }  // namespace detail

  // For every hom phi: G -> T, checks <phi(subgens)> = phi(G).
  inline DensityReport density_check(Presentation const&      G,
                                     std::vector<Word> const& subgens,
                                     FiniteGroup const&       T,
                                     HomSearchOptions const&  opts = {}) {
    std::size_t const n = G.num_generators();
    if (T.is_abelian()) {
      std::vector<std::vector<long>> rows;
      for (auto const& r : G.relators()) {
        rows.push_back(detail::exponents(r, n, 0, n));
      }
      for (auto const& w : subgens) {
        rows.push_back(detail::exponents(w, n, 0, n));
      }
      return detail::abelian_density(rows, n, T);
    }
    DensityReport R;
    R.target = T.label();
    R.method = "enumeration";
    auto L   = lattice_for(T);
    for_each_hom(G, T, opts, [&](std::vector<Elem> const& im, std::uint64_t w) {
      std::vector<Elem> sub;
      for (auto const& s : subgens) {
        sub.push_back(T.evaluate(s, im));
      }
      bool ok = L ? L->closure(sub) == L->closure(im)
                  : T.subgroup_closure(sub).size() == T.subgroup_closure(im).size();
      R.maps_checked += w;
      if (!ok) {
        R.failures += w;
        R.passed = false;
        if (R.failing_examples.size() < 5) {
          R.failing_examples.push_back(im);
        }
      }
      return true;
    });
    return R;
  }

  // For every hom Phi: G x G -> T (commuting pairs), checks that the pair
  // words generate Phi(G x G).
  inline DensityReport density_check_pairs(Presentation const&          G,
                                           std::vector<WordPair> const& subgens,
                                           FiniteGroup const&           T,
                                           HomSearchOptions const&      opts = {}) {
    std::size_t const n = G.num_generators();
    if (T.is_abelian()) {
      std::vector<std::vector<long>> rows;
      for (auto const& r : G.relators()) {
        rows.push_back(detail::exponents(r, n, 0, 2 * n));
        rows.push_back(detail::exponents(r, n, n, 2 * n));
      }
      for (auto const& [u, v] : subgens) {
        auto a = detail::exponents(u, n, 0, 2 * n);
        auto b = detail::exponents(v, n, n, 2 * n);
        for (std::size_t i = 0; i < a.size(); ++i) {
          a[i] += b[i];
        }
        rows.push_back(a);
      }
      return detail::abelian_density(rows, 2 * n, T);
    }
    DensityReport R;
    R.target = T.label();
    R.method = "enumeration of commuting pairs";
    auto             L     = lattice_for(T);
    HomSearchOptions inner = opts;
    inner.class_reps       = false;
    std::uint64_t nodes    = 0;
    for_each_hom(G, T, opts, [&](std::vector<Elem> const& a, std::uint64_t w) {
      auto mask       = centralizer_mask(T, a);
      inner.max_nodes = opts.max_nodes > nodes ? opts.max_nodes - nodes : 0;
      nodes += for_each_hom(G, T, inner, [&](std::vector<Elem> const& b,
                                             std::uint64_t) {
        std::vector<Elem> sub;
        for (auto const& [u, v] : subgens) {
          sub.push_back(T.mul(T.evaluate(u, a), T.evaluate(v, b)));
        }
        std::vector<Elem> ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        bool ok = L ? L->closure(sub) == L->closure(ab)
                    : T.subgroup_closure(sub).size() == T.subgroup_closure(ab).size();
        R.maps_checked += w;
        if (!ok) {
          R.failures += w;
          R.passed = false;
          if (R.failing_examples.size() < 5) {
            R.failing_examples.push_back(ab);
          }
        }
        return true;
      }, &mask);
      return true;
    });
    return R;
  }

  ////////////////////////////////////////////////////////////////////////
  // Simple quotients
  ////////////////////////////////////////////////////////////////////////

  struct SimpleScanResult {
    std::vector<std::string> quotients;  // catalog keys with epis > 0
    std::vector<std::string> scanned;
    std::uint64_t            nodes = 0;
  };

  inline std::vector<unsigned> primes_up_to(std::size_t n) {
    std::vector<char>     sieve(n + 1, 1);
    std::vector<unsigned> out;
    for (std::size_t p = 2; p <= n; ++p) {
      if (sieve[p]) {
        out.push_back(unsigned(p));
        for (std::size_t q = p * p; q <= n; q += p) {
          sieve[q] = 0;
        }
      }
    }
    return out;
  }

  // Every nontrivial finite quotient of order <= budget maps onto a simple
  // group of order <= budget: cyclic ones are read off H1, nonabelian ones
  // are searched in the catalog.
  inline SimpleScanResult simple_quotient_scan(Presentation const& P,
                                               std::size_t order_budget,
                                               HomSearchOptions opts = {}) {
    if (order_budget >= simple_catalog_complete_below) {
      throw InvalidArgument("simple_quotient_scan: the catalog lists simple "
                            "groups only below order "
                            + std::to_string(simple_catalog_complete_below));
    }
    SimpleScanResult out;
    auto             ab = abelianization(P);
    for (unsigned p : primes_up_to(order_budget)) {
      bool onto = ab.free_rank > 0;
      for (auto const& d : ab.torsion) {
        onto = onto || mpz_divisible_ui_p(d.get_mpz_t(), p) != 0;
      }
      if (onto) {
        out.quotients.push_back("C" + std::to_string(p));
      }
    }
    opts.stop_at_first_epi = true;
    for (auto const& k : nonabelian_simple_catalog(order_budget)) {
      auto const& G = *catalog_group(k.to_string());
      auto        c = count_homs(P, G, opts);
      out.nodes += c.nodes;
      out.scanned.push_back(k.to_string());
      if (c.epis > 0) {
        out.quotients.push_back(k.to_string());
      }
    }
    return out;
  }

}  // namespace sfsgrp
