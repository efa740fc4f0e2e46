#pragma once

// Fully enumerated finite permutation groups. Elements are numbered in BFS
// order from the identity (index 0) along right multiplication by the
// generators. Products act on the right: (x*y)(i) = y(x(i)).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "presentation.hpp"

namespace sfsgrp {

  using Elem = std::uint32_t;
  using Perm = std::vector<unsigned>;

  inline constexpr std::size_t default_order_budget = 10000;
  inline constexpr std::size_t table_order_limit    = 4096;

  class FiniteGroup {
   public:
    FiniteGroup() = default;

    // Closes the permutation generators under multiplication. All generators
    // must have the same degree (<= 256).
    static FiniteGroup from_permutations(std::string             label,
                                         std::vector<Perm> const& gens,
                                         std::size_t max_order = default_order_budget) {
      FiniteGroup G;
      G._label  = std::move(label);
      G._degree = gens.empty() ? 1 : gens.front().size();
      if (G._degree == 0 || G._degree > 256) {
        throw InvalidArgument("FiniteGroup: degree must be in [1, 256]");
      }
      for (auto const& g : gens) {
        G.check_perm(g);
      }
      G.enumerate(gens, max_order);
      G.choose_base();
      G.build_inverses();
      if (G.order() <= table_order_limit) {
        G.build_table();
      }
      G.build_orders();
      G.build_classes();
      return G;
    }

    std::string const& label() const noexcept {
      return _label;
    }
    std::size_t order() const noexcept {
      return _order;
    }
    std::size_t degree() const noexcept {
      return _degree;
    }
    static constexpr Elem identity() noexcept {
      return 0;
    }
    std::vector<Elem> const& generators() const noexcept {
      return _gens;
    }

    unsigned image(Elem x, unsigned point) const {
      return _points[std::size_t(x) * _degree + point];
    }

    Perm permutation(Elem x) const {
      auto it = _points.begin() + std::ptrdiff_t(std::size_t(x) * _degree);
      return Perm(it, it + std::ptrdiff_t(_degree));
    }

    Elem mul(Elem a, Elem b) const {
      if (!_table.empty()) {
        return _table[std::size_t(a) * _order + b];
      }
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < _base.size(); ++i) {
        key |= std::uint64_t(image(b, image(a, _base[i]))) << (8 * i);
      }
      return _by_key.find(key)->second;
    }

    Elem inv(Elem a) const {
      return _inv[a];
    }

    Elem pow(Elem a, std::int64_t k) const {
      if (k < 0) {
        a = inv(a);
        k = -k;
      }
      k %= static_cast<std::int64_t>(_elem_order[a]);
      Elem r = identity();
      for (std::int64_t i = 0; i < k; ++i) {
        r = mul(r, a);
      }
      return r;
    }

    // g^-1 x g
    Elem conj(Elem x, Elem g) const {
      return mul(mul(inv(g), x), g);
    }

    Elem commutator(Elem x, Elem y) const {
      return mul(mul(inv(x), inv(y)), mul(x, y));
    }

    std::size_t element_order(Elem a) const {
      return _elem_order[a];
    }

    std::optional<Elem> find(Perm const& p) const {
      if (p.size() != _degree) {
        return std::nullopt;
      }
      std::uint64_t key = 0;
      for (std::size_t i = 0; i < _base.size(); ++i) {
        key |= std::uint64_t(p[_base[i]]) << (8 * i);
      }
      auto it = _by_key.find(key);
      if (it == _by_key.end() || permutation(it->second) != p) {
        return std::nullopt;
      }
      return it->second;
    }

    // Word evaluation with images[g] for generator g.
    Elem evaluate(Word const& w, std::vector<Elem> const& images) const {
      Elem r = identity();
      for (auto const& s : w.syllables()) {
        r = mul(r, pow(images.at(s.gen), s.exp));
      }
      return r;
    }

    bool is_abelian() const {
      for (Elem a : _gens) {
        for (Elem b : _gens) {
          if (mul(a, b) != mul(b, a)) {
            return false;
          }
        }
      }
      return true;
    }

    // Histogram: element order -> count.
    std::map<std::size_t, std::size_t> order_histogram() const {
      std::map<std::size_t, std::size_t> h;
      for (auto o : _elem_order) {
        ++h[o];
      }
      return h;
    }

    std::size_t exponent() const {
      std::size_t e = 1;
      for (auto o : _elem_order) {
        e = std::lcm(e, o);
      }
      return e;
    }

    ////////////////////////////////////////////////////////////////////////
    // Subgroups
    ////////////////////////////////////////////////////////////////////////

    // Sorted element list of <seeds>.
    std::vector<Elem> subgroup_closure(std::vector<Elem> const& seeds) const {
      std::vector<char> in(_order, 0);
      std::vector<Elem> list{identity()};
      in[0] = 1;
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (Elem s : seeds) {
          Elem y = mul(list[i], s);
          if (!in[y]) {
            in[y] = 1;
            list.push_back(y);
          }
        }
      }
      std::sort(list.begin(), list.end());
      return list;
    }

    // True iff seeds generate the whole group; stops once more than half the
    // group is reached.
    bool generates(std::vector<Elem> const& seeds) const {
      std::vector<char> in(_order, 0);
      std::vector<Elem> list{identity()};
      in[0] = 1;
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (Elem s : seeds) {
          Elem y = mul(list[i], s);
          if (!in[y]) {
            in[y] = 1;
            list.push_back(y);
            if (2 * list.size() > _order) {
              return true;
            }
          }
        }
      }
      return list.size() == _order;
    }

    // Smallest normal subgroup containing seeds.
    std::vector<Elem> normal_closure(std::vector<Elem> const& seeds) const {
      std::vector<Elem> gens = seeds;
      while (true) {
        auto              H = subgroup_closure(gens);
        std::vector<char> in(_order, 0);
        for (Elem h : H) {
          in[h] = 1;
        }
        bool              grown = false;
        std::size_t const n     = gens.size();
        for (std::size_t i = 0; i < n; ++i) {
          for (Elem g : _gens) {
            Elem c = conj(gens[i], g);
            if (!in[c]) {
              gens.push_back(c);
              in[c] = 1;
              grown = true;
            }
          }
        }
        if (!grown) {
          return H;
        }
      }
    }

    std::vector<Elem> derived_subgroup() const {
      std::vector<Elem> comms;
      for (Elem a : _gens) {
        for (Elem b : _gens) {
          comms.push_back(commutator(a, b));
        }
      }
      return normal_closure(comms);
    }

    std::vector<Elem> center() const {
      std::vector<Elem> z;
      for (Elem x = 0; x < _order; ++x) {
        bool central = true;
        for (Elem g : _gens) {
          central = central && mul(x, g) == mul(g, x);
        }
        if (central) {
          z.push_back(x);
        }
      }
      return z;
    }

    ////////////////////////////////////////////////////////////////////////
    // Conjugacy classes
    ////////////////////////////////////////////////////////////////////////

    std::size_t num_classes() const noexcept {
      return _class_reps.size();
    }
    std::vector<Elem> const& class_reps() const noexcept {
      return _class_reps;
    }
    std::size_t class_of(Elem x) const {
      return _class_of[x];
    }
    std::size_t class_size(std::size_t c) const {
      return _order / _centralizers[c].size();
    }
    // Sorted centralizer of the class representative.
    std::vector<Elem> const& rep_centralizer(std::size_t c) const {
      return _centralizers[c];
    }
    // t with t^-1 rep t = x.
    Elem class_transversal(Elem x) const {
      return _transversal[x];
    }

    // {g : g^-1 x g = y}
    std::vector<Elem> transporter(Elem x, Elem y) const {
      std::vector<Elem> out;
      std::size_t       c = _class_of[x];
      if (c != _class_of[y]) {
        return out;
      }
      Elem tx_inv = inv(_transversal[x]);
      Elem ty     = _transversal[y];
      out.reserve(_centralizers[c].size());
      for (Elem z : _centralizers[c]) {
        out.push_back(mul(mul(tx_inv, z), ty));
      }
      return out;
    }

    std::vector<Elem> centralizer(Elem x) const {
      auto c = transporter(x, x);
      std::sort(c.begin(), c.end());
      return c;
    }

    std::size_t centralizer_order(Elem x) const {
      return _centralizers[_class_of[x]].size();
    }

   private:
    void check_perm(Perm const& p) const {
      if (p.size() != _degree) {
        throw InvalidArgument("FiniteGroup: generators of unequal degree");
      }
      std::vector<char> seen(_degree, 0);
      for (unsigned x : p) {
        if (x >= _degree || seen[x]) {
          throw InvalidArgument("FiniteGroup: not a permutation");
        }
        seen[x] = 1;
      }
    }

    void enumerate(std::vector<Perm> const& gens, std::size_t max_order) {
      std::unordered_map<std::string, Elem> seen;
      auto as_key = [](Perm const& p) {
        return std::string(p.begin(), p.end());
      };
      Perm id(_degree);
      std::iota(id.begin(), id.end(), 0u);
      std::vector<Perm> elems{id};
      seen.emplace(as_key(id), 0);
      _parent = {0};
      _pgen   = {0};
      std::vector<Elem> gen_index(gens.size());
      for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = 0; j < gens.size(); ++j) {
          Perm q(_degree);
          for (std::size_t k = 0; k < _degree; ++k) {
            q[k] = gens[j][elems[i][k]];
          }
          auto [it, fresh] = seen.emplace(as_key(q), Elem(elems.size()));
          if (fresh) {
            if (elems.size() >= max_order) {
              throw BudgetExceeded("FiniteGroup " + _label + ": order exceeds "
                                   + std::to_string(max_order));
            }
            elems.push_back(std::move(q));
            _parent.push_back(Elem(i));
            _pgen.push_back(Elem(j));
          }
          _right_gen.push_back(it->second);
          if (i == 0) {
            gen_index[j] = it->second;
          }
        }
      }
      _gens  = gen_index;
      _order = elems.size();
      _points.resize(_order * _degree);
      for (std::size_t i = 0; i < _order; ++i) {
        for (std::size_t k = 0; k < _degree; ++k) {
          _points[i * _degree + k] = static_cast<std::uint8_t>(elems[i][k]);
        }
      }
    }

    // Greedy base: add the point splitting the most elements until every
    // element is determined by its base images.
    void choose_base() {
      std::vector<std::uint64_t> keys(_order, 0);
      std::size_t                distinct = 1;
      while (distinct < _order) {
        if (_base.size() == 8) {
          throw InvalidArgument("FiniteGroup " + _label
                                + ": base longer than 8 points");
        }
        std::size_t best = 0, best_count = 0;
        for (std::size_t pt = 0; pt < _degree; ++pt) {
          std::unordered_map<std::uint64_t, char> s;
          for (std::size_t x = 0; x < _order; ++x) {
            s.emplace(keys[x] | (std::uint64_t(image(Elem(x), unsigned(pt)))
                                 << (8 * _base.size())),
                      0);
          }
          if (s.size() > best_count) {
            best_count = s.size();
            best       = pt;
          }
        }
        for (std::size_t x = 0; x < _order; ++x) {
          keys[x] |= std::uint64_t(image(Elem(x), unsigned(best)))
                     << (8 * _base.size());
        }
        _base.push_back(unsigned(best));
        distinct = best_count;
      }
      _by_key.reserve(_order * 2);
      for (std::size_t x = 0; x < _order; ++x) {
        _by_key.emplace(keys[x], Elem(x));
      }
    }

    void build_inverses() {
      _inv.resize(_order);
      Perm q(_degree);
      for (std::size_t x = 0; x < _order; ++x) {
        for (std::size_t k = 0; k < _degree; ++k) {
          q[image(Elem(x), unsigned(k))] = unsigned(k);
        }
        _inv[x] = *find(q);
      }
    }

    // Row x filled in BFS order of the column: x*y = (x*parent(y))*gen.
    void build_table() {
      std::size_t const ng = _gens.size();
      _table.assign(_order * _order, 0);
      for (std::size_t x = 0; x < _order; ++x) {
        auto* row = &_table[x * _order];
        row[0]    = static_cast<std::uint16_t>(x);
        for (std::size_t y = 1; y < _order; ++y) {
          row[y] = static_cast<std::uint16_t>(
              _right_gen[std::size_t(row[_parent[y]]) * ng + _pgen[y]]);
        }
      }
    }

    void build_orders() {
      _elem_order.assign(_order, 1);
      for (std::size_t x = 1; x < _order; ++x) {
        Elem        y = Elem(x);
        std::size_t k = 1;
        while (y != 0) {
          y = mul(y, Elem(x));
          ++k;
        }
        _elem_order[x] = k;
      }
    }

    void build_classes() {
      constexpr std::size_t none = std::size_t(-1);
      _class_of.assign(_order, none);
      _transversal.assign(_order, 0);
      std::vector<Elem> gen_inv;
      for (Elem g : _gens) {
        gen_inv.push_back(inv(g));
      }
      for (std::size_t x = 0; x < _order; ++x) {
        if (_class_of[x] != none) {
          continue;
        }
        std::size_t c = _class_reps.size();
        _class_reps.push_back(Elem(x));
        _class_of[x]    = c;
        _transversal[x] = 0;
        std::vector<Elem> orbit{Elem(x)};
        for (std::size_t i = 0; i < orbit.size(); ++i) {
          Elem y = orbit[i];
          for (std::size_t j = 0; j < _gens.size(); ++j) {
            Elem z = mul(mul(gen_inv[j], y), _gens[j]);
            if (_class_of[z] == none) {
              _class_of[z]    = c;
              _transversal[z] = mul(_transversal[y], _gens[j]);
              orbit.push_back(z);
            }
          }
        }
        std::vector<Elem> cent;
        cent.reserve(_order / orbit.size());
        for (std::size_t g = 0; g < _order; ++g) {
          if (mul(Elem(g), Elem(x)) == mul(Elem(x), Elem(g))) {
            cent.push_back(Elem(g));
          }
        }
        _centralizers.push_back(std::move(cent));
      }
    }

    std::string                              _label;
    std::size_t                              _order  = 0;
    std::size_t                              _degree = 0;
    std::vector<Elem>                        _gens;
    std::vector<std::uint8_t>                _points;
    std::vector<Elem>                        _parent, _pgen, _right_gen;
    std::vector<unsigned>                    _base;
    std::unordered_map<std::uint64_t, Elem>  _by_key;
    std::vector<Elem>                        _inv;
    std::vector<std::uint16_t>               _table;
    std::vector<std::size_t>                 _elem_order;
    std::vector<std::size_t>                 _class_of;
    std::vector<Elem>                        _class_reps;
    std::vector<Elem>                        _transversal;
    std::vector<std::vector<Elem>>           _centralizers;
  };

  ////////////////////////////////////////////////////////////////////////
  // Invariants of a finite group
  ////////////////////////////////////////////////////////////////////////

  // Abelian invariants of a finite abelian group given the number of
  // elements of each order.
  inline AbelianInvariants abelian_invariants_from_histogram(
      std::map<std::size_t, std::size_t> const& hist) {
    std::size_t n = 0;
    for (auto const& [o, c] : hist) {
      n += c;
    }
    std::vector<Int> cyclic;
    std::size_t      rest = n;
    for (std::size_t p = 2; rest > 1; ++p) {
      if (rest % p != 0) {
        continue;
      }
      while (rest % p == 0) {
        rest /= p;
      }
      // c[j] = log_p #{x : x^(p^j) = 1}
      std::vector<std::size_t> logc{0};
      for (std::size_t pj = p;; pj *= p) {
        std::size_t cnt = 0;
        for (auto const& [o, c] : hist) {
          if (pj % o == 0) {
            cnt += c;
          }
        }
        std::size_t l = 0;
        for (std::size_t v = cnt; v > 1; v /= p) {
          ++l;
        }
        if (l == logc.back()) {
          break;
        }
        logc.push_back(l);
      }
      // number of cyclic factors of order >= p^j is logc[j] - logc[j-1]
      std::size_t J = logc.size() - 1;
      for (std::size_t j = J; j >= 1; --j) {
        std::size_t ge_j   = logc[j] - logc[j - 1];
        std::size_t ge_j1  = j + 1 <= J ? logc[j + 1] - logc[j] : 0;
        std::size_t exactj = ge_j - ge_j1;
        Int         pj     = 1;
        for (std::size_t t = 0; t < j; ++t) {
          pj *= static_cast<unsigned long>(p);
        }
        for (std::size_t t = 0; t < exactj; ++t) {
          cyclic.push_back(pj);
        }
      }
    }
    return abelian_invariants_from_cyclic(cyclic);
  }

  // Invariants of G / [G, G].
  inline AbelianInvariants abelian_invariants(FiniteGroup const& G) {
    auto              D = G.derived_subgroup();
    std::vector<char> inD(G.order(), 0);
    for (Elem d : D) {
      inD[d] = 1;
    }
    std::map<std::size_t, std::size_t> hist;
    for (Elem x = 0; x < G.order(); ++x) {
      Elem        y = x;
      std::size_t k = 1;
      while (!inD[y]) {
        y = G.mul(y, x);
        ++k;
      }
      ++hist[k];
    }
    for (auto& [o, c] : hist) {
      c /= D.size();
    }
    return abelian_invariants_from_histogram(hist);
  }

}  // namespace sfsgrp
