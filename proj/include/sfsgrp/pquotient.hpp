#pragma once

// Power-commutator presentations of finite p-groups and the exponent-p
// lower central quotients of a finitely presented group.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "finite_group.hpp"
#include "hom_search.hpp"
#include "linalg.hpp"
#include "presentation.hpp"

namespace sfsgrp {

  using ExpVec = std::vector<std::uint8_t>;

  inline constexpr std::size_t pc_max_generators = 64;
  inline constexpr std::size_t pc_max_sweep_generators = 20;

  // g_i^p = power[i], [g_j, g_i] = comm[j][i] for i < j. Relations are only
  // stored for the first few generators; the rest are central of order p.
  class PcPresentation {
   public:
    PcPresentation() = default;

    PcPresentation(unsigned p, std::vector<unsigned> weights,
                   std::vector<ExpVec> power, std::vector<std::vector<ExpVec>> comm)
        : _p(p), _n(weights.size()), _weights(std::move(weights)),
          _power(std::move(power)), _comm(std::move(comm)) {
      if (p < 2) {
        throw InvalidArgument("PcPresentation: bad prime");
      }
      if (_power.size() > _n || _comm.size() > _power.size()) {
        throw InvalidArgument("PcPresentation: relation tables too long");
      }
      _comm.resize(_power.size());
      for (std::size_t i = 0; i < _n; ++i) {
        if (i > 0 && _weights[i] < _weights[i - 1]) {
          throw InvalidArgument("PcPresentation: weights must be nondecreasing");
        }
      }
      for (std::size_t i = 0; i < _power.size(); ++i) {
        check_tail(_power[i], i);
        _comm[i].resize(i, ExpVec(_n, 0));
        for (std::size_t k = 0; k < i; ++k) {
          check_tail(_comm[i][k], i);
        }
      }
      // trailing central generators need no stored relations
      _central_from = _power.size();
      while (_central_from > 0 && is_central_trivial(_central_from - 1)) {
        --_central_from;
      }
      if (_central_from > pc_max_generators) {
        throw BudgetExceeded("PcPresentation: more than "
                             + std::to_string(pc_max_generators)
                             + " non-central generators");
      }
    }

    unsigned prime() const noexcept {
      return _p;
    }
    std::size_t num_generators() const noexcept {
      return _n;
    }
    std::vector<unsigned> const& weights() const noexcept {
      return _weights;
    }
    unsigned nilpotency_class() const noexcept {
      return _weights.empty() ? 0 : _weights.back();
    }
    Int order() const {
      Int r = 1;
      for (std::size_t i = 0; i < _n; ++i) {
        r *= _p;
      }
      return r;
    }
    ExpVec power(std::size_t i) const {
      return i < _power.size() ? _power[i] : ExpVec(_n, 0);
    }
    // [g_j, g_i] for i < j
    ExpVec commutator(std::size_t j, std::size_t i) const {
      if (i >= j) {
        throw InvalidArgument("PcPresentation::commutator needs i < j");
      }
      return j < _comm.size() ? _comm[j][i] : ExpVec(_n, 0);
    }

    ExpVec identity() const {
      return ExpVec(_n, 0);
    }
    ExpVec generator(std::size_t k, unsigned e = 1) const {
      ExpVec v(_n, 0);
      v.at(k) = std::uint8_t(e % _p);
      return v;
    }

    // e <- e * g_k
    void mul_gen(ExpVec& e, std::size_t k) const {
      if (k >= _central_from) {
        e[k] = std::uint8_t((e[k] + 1) % _p);
        return;
      }
      std::array<std::uint8_t, pc_max_generators> suffix{};
      for (std::size_t j = k + 1; j < _central_from; ++j) {
        suffix[j] = e[j];
        e[j]      = 0;
      }
      if (++e[k] == _p) {
        e[k] = 0;
        mul(e, _power[k]);
      }
      // (g_j)^{g_k} = g_j [g_j, g_k]
      for (std::size_t j = k + 1; j < _central_from; ++j) {
        for (unsigned t = 0; t < suffix[j]; ++t) {
          mul_gen(e, j);
          mul(e, _comm[j][k]);
        }
      }
    }

    // e <- e * v, with v a normal form
    void mul(ExpVec& e, ExpVec const& v) const {
      for (std::size_t l = 0; l < _n; ++l) {
        if (l >= _central_from) {
          e[l] = std::uint8_t((e[l] + v[l]) % _p);
          continue;
        }
        for (unsigned t = 0; t < v[l]; ++t) {
          mul_gen(e, l);
        }
      }
    }

    ExpVec product(ExpVec a, ExpVec const& b) const {
      mul(a, b);
      return a;
    }

    ExpVec inverse(ExpVec const& a) const {
      ExpVec r = a, z = identity();
      for (std::size_t i = 0; i < _n; ++i) {
        unsigned f = r[i];
        if (f == 0) {
          continue;
        }
        for (unsigned t = f; t < _p; ++t) {
          mul_gen(r, i);
          mul_gen(z, i);
        }
      }
      return z;
    }

    ExpVec pow(ExpVec const& a, std::uint64_t k) const {
      ExpVec r = identity(), base = a;
      while (k) {
        if (k & 1) {
          mul(r, base);
        }
        k >>= 1;
        if (k) {
          base = product(base, base);
        }
      }
      return r;
    }

    // Normal form of a word in the pc generators.
    ExpVec collect(Word const& w) const {
      ExpVec e = identity();
      for (auto const& s : w.syllables()) {
        if (s.gen >= _n) {
          throw InvalidArgument("collect: generator index out of range");
        }
        if (s.exp > 0) {
          for (std::int64_t t = 0; t < s.exp; ++t) {
            mul_gen(e, s.gen);
          }
        } else {
          ExpVec inv = inverse(generator(s.gen));
          for (std::int64_t t = 0; t < -s.exp; ++t) {
            mul(e, inv);
          }
        }
      }
      return e;
    }

    std::uint64_t element_order(ExpVec const& v) const {
      std::uint64_t o = 1;
      ExpVec        x = v;
      while (x != identity()) {
        x = pow(x, _p);
        o *= _p;
      }
      return o;
    }

    // Runs the standard overlap tests; each entry describes a failed test.
    std::vector<std::string> consistency_failures() const {
      std::vector<std::string> bad;
      for (auto const& t : overlap_tests(_central_from)) {
        if (t.first != t.second) {
          bad.push_back("overlap test " + std::to_string(bad.size()));
        }
      }
      return bad;
    }
    bool is_consistent() const {
      return consistency_failures().empty();
    }

    // Pairs of normal forms that must agree, for overlaps among generators
    // below `limit`.
    std::vector<std::pair<ExpVec, ExpVec>> overlap_tests(std::size_t limit) const {
      std::vector<std::pair<ExpVec, ExpVec>> out;
      limit = std::min(limit, _n);
      for (std::size_t k = 0; k < limit; ++k) {
        for (std::size_t j = 0; j < k; ++j) {
          for (std::size_t i = 0; i < j; ++i) {
            // (g_k g_j) g_i = g_k (g_j g_i)
            ExpVec lhs = generator(k);
            mul_gen(lhs, j);
            mul_gen(lhs, i);
            ExpVec b = generator(j);
            mul_gen(b, i);
            ExpVec rhs = generator(k);
            mul(rhs, b);
            out.emplace_back(std::move(lhs), std::move(rhs));
          }
        }
      }
      for (std::size_t j = 0; j < limit; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
          // g_j^p g_i = g_j^{p-1} (g_j g_i)
          ExpVec lhs = power(j);
          mul_gen(lhs, i);
          ExpVec b = generator(j);
          mul_gen(b, i);
          ExpVec rhs = generator(j, _p - 1);
          mul(rhs, b);
          out.emplace_back(std::move(lhs), std::move(rhs));
          // g_j g_i^p = (g_j g_i^{p-1}) g_i
          ExpVec l2 = generator(j);
          mul(l2, power(i));
          ExpVec r2 = generator(j);
          for (unsigned t = 0; t < _p; ++t) {
            mul_gen(r2, i);
          }
          out.emplace_back(std::move(l2), std::move(r2));
        }
        // g_j^p g_j = g_j g_j^p
        ExpVec lhs = power(j);
        mul_gen(lhs, j);
        ExpVec rhs = generator(j);
        mul(rhs, power(j));
        out.emplace_back(std::move(lhs), std::move(rhs));
      }
      return out;
    }

    // As a finite presentation on g1..gn.
    Presentation to_presentation() const {
      std::vector<std::string> names;
      for (std::size_t i = 0; i < _n; ++i) {
        names.push_back("g" + std::to_string(i + 1));
      }
      auto as_word = [&](ExpVec const& v) {
        Word w;
        for (std::size_t l = 0; l < _n; ++l) {
          if (v[l]) {
            w *= Word::gen(l, v[l]);
          }
        }
        return w;
      };
      std::vector<Word> rels;
      for (std::size_t i = 0; i < _n; ++i) {
        rels.push_back(Word::gen(i, _p) * as_word(power(i)).inverse());
      }
      for (std::size_t j = 0; j < _n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
          rels.push_back(sfsgrp::commutator(Word::gen(j), Word::gen(i))
                         * as_word(this->commutator(j, i)).inverse());
        }
      }
      return Presentation(std::move(names), std::move(rels));
    }

   private:
    void check_tail(ExpVec const& v, std::size_t after) const {
      if (v.size() != _n) {
        throw InvalidArgument("PcPresentation: tail has wrong length");
      }
      for (std::size_t l = 0; l < _n; ++l) {
        if (v[l] >= _p || (v[l] && l <= after)) {
          throw InvalidArgument("PcPresentation: tail not in normal form over later generators");
        }
      }
    }
    bool is_central_trivial(std::size_t k) const {
      if (std::any_of(_power[k].begin(), _power[k].end(), [](auto x) { return x != 0; })) {
        return false;
      }
      for (std::size_t j = 0; j < _comm.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
          if ((i == k || j == k)
              && std::any_of(_comm[j][i].begin(), _comm[j][i].end(),
                             [](auto x) { return x != 0; })) {
            return false;
          }
        }
      }
      return true;
    }

    unsigned                         _p = 2;
    std::size_t                      _n = 0;
    std::vector<unsigned>            _weights;
    std::vector<ExpVec>              _power;
    std::vector<std::vector<ExpVec>> _comm;
    std::size_t                      _central_from = 0;
  };

  ////////////////////////////////////////////////////////////////////////
  // Subgroups
  ////////////////////////////////////////////////////////////////////////

  // Subgroup of a pc group held as an induced generating sequence: at most
  // one element per leading generator, with leading exponent 1.
  class PcSubgroup {
   public:
    // Subgroup generated by gens and closed under conjugation by normalizers.
    PcSubgroup(PcPresentation const& pc, std::vector<ExpVec> const& gens,
               std::vector<ExpVec> const& normalizers = {})
        : _pc(&pc), _table(pc.num_generators()), _inv(pc.num_generators()) {
      std::vector<ExpVec> queue(gens.rbegin(), gens.rend());
      auto comm = [&](ExpVec const& x, ExpVec const& y) {
        ExpVec c = pc.inverse(x);
        pc.mul(c, pc.inverse(y));
        pc.mul(c, x);
        pc.mul(c, y);
        return c;
      };
      while (!queue.empty()) {
        ExpVec x = sift(queue.back());
        queue.pop_back();
        std::size_t i = lead(x);
        if (i == x.size()) {
          continue;
        }
        unsigned e = x[i];
        if (e != 1) {
          x = pc.pow(x, modp::inverse(e, pc.prime()));
        }
        queue.push_back(pc.pow(x, pc.prime()));
        for (auto const& t : _table) {
          if (!t.empty()) {
            queue.push_back(comm(x, t));
          }
        }
        for (auto const& s : normalizers) {
          queue.push_back(comm(x, s));
        }
        _inv[i]   = pc.inverse(x);
        _table[i] = std::move(x);
        ++_size;
      }
    }

    std::size_t log_order() const noexcept {
      return _size;
    }
    std::vector<ExpVec> sequence() const {
      std::vector<ExpVec> out;
      for (auto const& t : _table) {
        if (!t.empty()) {
          out.push_back(t);
        }
      }
      return out;
    }
    bool contains(ExpVec const& x) const {
      ExpVec r = sift(x);
      return lead(r) == r.size();
    }

   private:
    static std::size_t lead(ExpVec const& x) {
      std::size_t i = 0;
      while (i < x.size() && x[i] == 0) {
        ++i;
      }
      return i;
    }
    ExpVec sift(ExpVec x) const {
      for (std::size_t i = lead(x); i < x.size(); i = lead(x)) {
        if (_table[i].empty()) {
          break;
        }
        for (unsigned e = x[i]; e > 0; --e) {
          _pc->mul(x, _inv[i]);
        }
      }
      return x;
    }

    PcPresentation const* _pc;
    std::vector<ExpVec>   _table, _inv;
    std::size_t           _size = 0;
  };

  // Abelian invariants of H/[H,H] for H generated by gens, as p-powers.
  inline AbelianInvariants pc_subgroup_abelianization(PcPresentation const&      pc,
                                                      std::vector<ExpVec> const& gens) {
    std::vector<ExpVec> comms;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        ExpVec c = pc.inverse(gens[i]);
        pc.mul(c, pc.inverse(gens[j]));
        pc.mul(c, gens[i]);
        pc.mul(c, gens[j]);
        comms.push_back(std::move(c));
      }
    }
    PcSubgroup  H(pc, gens);
    PcSubgroup  D(pc, comms, gens);
    std::size_t top = H.log_order() - D.log_order();
    // a_k = log |A^{p^k}|; factors of order >= p^{k+1} number a_k - a_{k+1}
    std::vector<std::size_t> a{top};
    std::vector<ExpVec>      pw = gens;
    while (a.back() > 0) {
      for (auto& g : pw) {
        g = pc.pow(g, pc.prime());
      }
      std::vector<ExpVec> seeds = D.sequence();
      seeds.insert(seeds.end(), pw.begin(), pw.end());
      a.push_back(PcSubgroup(pc, seeds).log_order() - D.log_order());
    }
    std::vector<Int> cyclic;
    for (std::size_t k = 0; k + 1 < a.size(); ++k) {
      std::size_t at_least = a[k] - a[k + 1];
      std::size_t next     = k + 2 < a.size() ? a[k + 1] - a[k + 2] : 0;
      Int         order    = 1;
      for (std::size_t t = 0; t <= k; ++t) {
        order *= pc.prime();
      }
      for (std::size_t t = next; t < at_least; ++t) {
        cyclic.push_back(order);
      }
    }
    return abelian_invariants_from_cyclic(cyclic);
  }

  ////////////////////////////////////////////////////////////////////////
  // Quotient algorithm
  ////////////////////////////////////////////////////////////////////////

  // How a pc generator was introduced.
  struct PcDefinition {
    enum class Kind { source, power, commutator } kind = Kind::source;
    std::size_t a = 0;  // source generator, or the powered generator, or j
    std::size_t b = 0;  // i for [g_j, g_i]
  };

  struct PQuotientStage {
    unsigned                  cls = 0;
    PcPresentation            pc;
    std::vector<ExpVec>       images;  // of the source generators
    std::vector<PcDefinition> definitions;
  };

  struct PQuotientResult {
    Presentation                source;
    unsigned                    prime = 2;
    std::vector<PQuotientStage> stages;
    bool                        terminated = false;  // series became stationary
  };

  namespace detail {
    inline ExpVec extend(ExpVec v, std::size_t n) {
      v.resize(n, 0);
      return v;
    }

    inline ExpVec evaluate_source(PcPresentation const& pc, Word const& w,
                                  std::vector<ExpVec> const& images) {
      ExpVec e = pc.identity();
      for (auto const& s : w.syllables()) {
        ExpVec g = s.exp > 0 ? images[s.gen] : pc.inverse(images[s.gen]);
        for (std::int64_t t = 0; t < std::abs(s.exp); ++t) {
          pc.mul(e, g);
        }
      }
      return e;
    }

    struct TailSlot {
      PcDefinition def;
    };

    // One step of the tails method: from the class-c quotient (possibly
    // empty) to the class-(c+1) quotient.
    inline std::optional<PQuotientStage> next_stage(Presentation const&   P,
                                                    unsigned              p,
                                                    PQuotientStage const& cur) {
      std::size_t const n   = cur.pc.num_generators();
      unsigned const    cls = cur.cls;
      using Kind            = PcDefinition::Kind;

      auto is_definition = [&](PcDefinition const& d) {
        for (auto const& e : cur.definitions) {
          if (e.kind == d.kind && e.a == d.a && e.b == d.b) {
            return true;
          }
        }
        return false;
      };

      // slots in definition order; source slots come last
      std::vector<PcDefinition> slots;
      std::vector<long>         power_slot(n, -1), source_slot(P.num_generators(), -1);
      std::vector<std::vector<long>> comm_slot(n);
      for (std::size_t j = 0; j < n; ++j) {
        comm_slot[j].assign(j, -1);
      }
      auto const& w = cur.pc.weights();
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          PcDefinition d{Kind::commutator, j, i};
          if (w[i] + w[j] <= cls + 1 && !is_definition(d)) {
            comm_slot[j][i] = long(slots.size());
            slots.push_back(d);
          }
        }
        PcDefinition d{Kind::power, i, 0};
        if (!is_definition(d)) {
          power_slot[i] = long(slots.size());
          slots.push_back(d);
        }
      }
      for (std::size_t s = 0; s < P.num_generators(); ++s) {
        PcDefinition d{Kind::source, s, 0};
        if (!is_definition(d)) {
          source_slot[s] = long(slots.size());
          slots.push_back(d);
        }
      }
      std::size_t const m = slots.size();
      std::size_t const N = n + m;

      // the extension by central tails
      std::vector<ExpVec>              power(n);
      std::vector<std::vector<ExpVec>> comm(n);
      for (std::size_t i = 0; i < n; ++i) {
        power[i] = extend(cur.pc.power(i), N);
        if (power_slot[i] >= 0) {
          power[i][n + std::size_t(power_slot[i])] = 1;
        }
        for (std::size_t k = 0; k < i; ++k) {
          comm[i].push_back(extend(cur.pc.commutator(i, k), N));
          if (comm_slot[i][k] >= 0) {
            comm[i][k][n + std::size_t(comm_slot[i][k])] = 1;
          }
        }
      }
      std::vector<unsigned> weights = w;
      weights.resize(N, cls + 1);
      PcPresentation E(p, weights, power, comm);

      std::vector<ExpVec> images;
      for (std::size_t s = 0; s < P.num_generators(); ++s) {
        ExpVec v = extend(cur.images.empty() ? ExpVec{} : cur.images[s], N);
        if (source_slot[s] >= 0) {
          v[n + std::size_t(source_slot[s])] = 1;
        }
        images.push_back(std::move(v));
      }

      // linear conditions on the tails; columns reversed so that early
      // slots survive as generators
      std::vector<modp::Row> rows;
      auto add_row = [&](ExpVec const& a, ExpVec const& b) {
        for (std::size_t l = 0; l < n; ++l) {
          if (a[l] != b[l]) {
            throw std::logic_error("pquotient: inconsistent previous stage");
          }
        }
        modp::Row r(m, 0);
        bool      nz = false;
        for (std::size_t t = 0; t < m; ++t) {
          r[m - 1 - t] = std::uint8_t((a[n + t] + p - b[n + t]) % p);
          nz           = nz || r[m - 1 - t];
        }
        if (nz) {
          rows.push_back(std::move(r));
        }
      };
      for (auto const& [a, b] : E.overlap_tests(n)) {
        add_row(a, b);
      }
      for (auto const& r : P.relators()) {
        add_row(evaluate_source(E, r, images), E.identity());
      }
      auto pivots = modp::rref(rows, p);

      std::vector<char> is_pivot(m, 0);
      for (auto c : pivots) {
        is_pivot[c] = 1;
      }
      // surviving slots, in slot order
      std::vector<std::size_t> survivors;
      std::vector<long>        new_index(m, -1);
      for (std::size_t t = 0; t < m; ++t) {
        if (!is_pivot[m - 1 - t]) {
          new_index[t] = long(survivors.size());
          survivors.push_back(t);
        }
      }
      std::size_t const k = survivors.size();
      if (k == 0) {
        return std::nullopt;
      }
      if (n + k > pc_max_generators) {
        throw BudgetExceeded("pquotient: stage " + std::to_string(cls + 1)
                             + " needs " + std::to_string(n + k)
                             + " generators, above the cap of "
                             + std::to_string(pc_max_generators));
      }
      std::size_t const Nq = n + k;
      // value of slot t as a vector over the new generators
      auto slot_value = [&](std::size_t t) {
        ExpVec v(Nq, 0);
        if (new_index[t] >= 0) {
          v[n + std::size_t(new_index[t])] = 1;
          return v;
        }
        std::size_t col = m - 1 - t;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
          if (pivots[r] != col) {
            continue;
          }
          for (std::size_t u : survivors) {
            std::uint8_t c = rows[r][m - 1 - u];
            v[n + std::size_t(new_index[u])] = std::uint8_t((p - c) % p);
          }
        }
        return v;
      };
      auto add_into = [&](ExpVec base, long slot) {
        base = extend(std::move(base), Nq);
        if (slot >= 0) {
          ExpVec t = slot_value(std::size_t(slot));
          for (std::size_t l = n; l < Nq; ++l) {
            base[l] = std::uint8_t((base[l] + t[l]) % p);
          }
        }
        return base;
      };

      std::vector<ExpVec>              qpower(n);
      std::vector<std::vector<ExpVec>> qcomm(n);
      for (std::size_t i = 0; i < n; ++i) {
        qpower[i] = add_into(cur.pc.power(i), power_slot[i]);
        for (std::size_t q = 0; q < i; ++q) {
          qcomm[i].push_back(add_into(cur.pc.commutator(i, q), comm_slot[i][q]));
        }
      }
      std::vector<unsigned> qweights = w;
      qweights.resize(Nq, cls + 1);

      PQuotientStage next;
      next.cls         = cls + 1;
      next.pc          = PcPresentation(p, qweights, qpower, qcomm);
      next.definitions = cur.definitions;
      for (std::size_t t : survivors) {
        next.definitions.push_back(slots[t]);
      }
      for (std::size_t s = 0; s < P.num_generators(); ++s) {
        next.images.push_back(add_into(cur.images.empty() ? ExpVec{} : cur.images[s],
                                       source_slot[s]));
      }
      return next;
    }
  }  // namespace detail

  inline PQuotientResult compute_pquotient(Presentation const& P, unsigned p,
                                           unsigned max_class) {
    if (p != 2 && p != 3) {
      throw InvalidArgument("compute_pquotient: prime must be 2 or 3");
    }
    if (max_class < 1 || max_class > 6) {
      throw InvalidArgument("compute_pquotient: class must be in [1, 6]");
    }
    if (P.num_generators() > 8) {
      throw InvalidArgument("compute_pquotient: at most 8 source generators");
    }
    PQuotientResult R;
    R.source = P;
    R.prime  = p;
    PQuotientStage cur;
    cur.pc = PcPresentation(p, {}, {}, {});
    cur.images.assign(P.num_generators(), ExpVec{});
    for (unsigned c = 1; c <= max_class; ++c) {
      auto next = detail::next_stage(P, p, cur);
      if (!next) {
        R.terminated = true;
        break;
      }
      cur = std::move(*next);
      R.stages.push_back(cur);
    }
    return R;
  }

  // Problems found in a result: inconsistent stages, relators not killed,
  // generator images not projecting to the previous stage.
  inline std::vector<std::string> check_pquotient(PQuotientResult const& R) {
    std::vector<std::string> bad;
    for (std::size_t s = 0; s < R.stages.size(); ++s) {
      auto const& st  = R.stages[s];
      std::string tag = "stage " + std::to_string(st.cls) + ": ";
      if (!st.pc.is_consistent()) {
        bad.push_back(tag + "inconsistent");
      }
      for (auto const& r : R.source.relators()) {
        if (detail::evaluate_source(st.pc, r, st.images) != st.pc.identity()) {
          bad.push_back(tag + "relator " + R.source.word_to_string(r) + " survives");
        }
      }
      if (s > 0) {
        auto const& prev = R.stages[s - 1];
        std::size_t n0   = prev.pc.num_generators();
        for (std::size_t g = 0; g < st.images.size(); ++g) {
          ExpVec head(st.images[g].begin(), st.images[g].begin() + std::ptrdiff_t(n0));
          if (head != prev.images[g]) {
            bad.push_back(tag + "image of " + R.source.name(g) + " does not project");
          }
        }
        if (st.pc.num_generators() < n0) {
          bad.push_back(tag + "order decreased");
        }
      }
    }
    return bad;
  }

  ////////////////////////////////////////////////////////////////////////
  // Invariants
  ////////////////////////////////////////////////////////////////////////

  struct InvariantProfile {
    unsigned                                prime     = 2;
    std::size_t                             log_order = 0;
    AbelianInvariants                       abelian;
    std::vector<std::size_t>                ranks;  // generators per weight
    std::size_t                             log_derived = 0;
    bool                                    partial     = false;
    // element sweep statistics (absent when partial)
    std::optional<std::size_t>              log_center;
    std::optional<std::uint64_t>            exponent;
    std::map<std::uint64_t, std::uint64_t>  histogram;
    std::optional<std::uint64_t>            power_image;  // |{x^p}|

    friend bool operator==(InvariantProfile const&, InvariantProfile const&) = default;
  };

  namespace detail {
    inline std::size_t log_p(Int v, unsigned p) {
      std::size_t k = 0;
      while (v > 1) {
        v /= p;
        ++k;
      }
      return k;
    }
  }  // namespace detail

  inline InvariantProfile invariant_profile(PcPresentation const& pc) {
    InvariantProfile pr;
    std::size_t const n = pc.num_generators();
    unsigned const    p = pc.prime();
    pr.prime     = p;
    pr.log_order = n;
    pr.abelian   = abelianization(pc.to_presentation());
    pr.log_derived = n - detail::log_p(*pr.abelian.order(), p);
    for (unsigned w : pc.weights()) {
      if (pr.ranks.size() < w) {
        pr.ranks.resize(w, 0);
      }
      ++pr.ranks[w - 1];
    }
    if (n > pc_max_sweep_generators) {
      pr.partial = true;
      return pr;
    }
    std::vector<std::size_t> gens;  // weight-one generators generate
    for (std::size_t i = 0; i < n; ++i) {
      if (pc.weights()[i] == 1) {
        gens.push_back(i);
      }
    }
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
      total *= p;
    }
    auto encode = [&](ExpVec const& v) {
      std::uint64_t c = 0;
      for (std::size_t i = n; i-- > 0;) {
        c = c * p + v[i];
      }
      return c;
    };
    std::vector<char> is_power(total, 0);
    std::uint64_t     center = 0, exponent = 1;
    ExpVec            x(n, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::uint64_t r = idx;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::uint8_t(r % p);
        r /= p;
      }
      bool central = true;
      for (std::size_t g : gens) {
        ExpVec a = x;
        pc.mul_gen(a, g);
        ExpVec b = pc.generator(g);
        pc.mul(b, x);
        if (a != b) {
          central = false;
          break;
        }
      }
      center += central;
      ExpVec        y = pc.pow(x, p);
      is_power[encode(y)] = 1;
      std::uint64_t o = x == pc.identity() ? 1 : p;
      while (y != pc.identity()) {
        y = pc.pow(y, p);
        o *= p;
      }
      ++pr.histogram[o];
      exponent = std::max(exponent, o);
    }
    pr.log_center  = detail::log_p(Int(center), p);
    pr.exponent    = exponent;
    pr.power_image = std::uint64_t(std::count(is_power.begin(), is_power.end(), 1));
    return pr;
  }

  // First field in which two profiles differ, or empty when they agree.
  inline std::optional<std::string> first_profile_difference(InvariantProfile const& a,
                                                             InvariantProfile const& b) {
    if (a.log_order != b.log_order) return "order";
    if (!(a.abelian == b.abelian)) return "abelian invariants";
    if (a.ranks != b.ranks) return "lower exponent-p central ranks";
    if (a.log_center != b.log_center) return "center order";
    if (a.log_derived != b.log_derived) return "derived subgroup order";
    if (a.exponent != b.exponent) return "exponent";
    if (a.histogram != b.histogram) return "element order histogram";
    if (a.power_image != b.power_image) return "power image size";
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Cross-check against direct enumeration
  ////////////////////////////////////////////////////////////////////////

  // Exponent-p class of a finite p-group, or empty if T is not a p-group.
  inline std::optional<unsigned> exponent_p_class(FiniteGroup const& T, unsigned p) {
    std::size_t o = T.order();
    while (o % p == 0) {
      o /= p;
    }
    if (o != 1) {
      return std::nullopt;
    }
    std::vector<Elem> cur(T.order());
    for (Elem x = 0; x < T.order(); ++x) {
      cur[x] = x;
    }
    unsigned c = 0;
    while (cur.size() > 1) {
      std::vector<Elem> seeds;
      for (Elem x : cur) {
        seeds.push_back(T.pow(x, p));
        for (Elem g : T.generators()) {
          seeds.push_back(T.commutator(x, g));
        }
      }
      // closure of normal generators; the result is normal since cur is
      auto next = T.normal_closure(seeds);
      if (next.size() == cur.size()) {
        return std::nullopt;
      }
      cur = std::move(next);
      ++c;
    }
    return c;
  }

  struct CrosscheckResult {
    std::string   target;
    std::uint64_t source_homs = 0;
    std::uint64_t stage_homs  = 0;
    bool          equal       = false;
  };

  inline CrosscheckResult pquotient_hom_crosscheck(Presentation const&   P,
                                                   PQuotientStage const& stage,
                                                   FiniteGroup const&    T,
                                                   HomSearchOptions const& opts = {}) {
    auto c = exponent_p_class(T, stage.pc.prime());
    if (!c || *c > stage.cls) {
      throw InvalidArgument("pquotient_hom_crosscheck: " + T.label()
                            + " is not a " + std::to_string(stage.pc.prime())
                            + "-group of exponent-p class <= "
                            + std::to_string(stage.cls));
    }
    CrosscheckResult r;
    r.target      = T.label();
    r.source_homs = count_homs(P, T, opts).homs;
    r.stage_homs  = count_homs(stage.pc.to_presentation(), T, opts).homs;
    r.equal       = r.source_homs == r.stage_homs;
    return r;
  }

}  // namespace sfsgrp

namespace sfsgrp {

  ////////////////////////////////////////////////////////////////////////
  // Epimorphisms onto a pc group
  ////////////////////////////////////////////////////////////////////////

  struct PcEpiSearch {
    std::optional<std::vector<ExpVec>> images;  // per original generator
    std::uint64_t                      nodes = 0;
  };

  namespace detail {
    // Elements as integers whose base-p digits are exponents.
    class PcCodeArith {
     public:
      explicit PcCodeArith(PcPresentation const& H) : _H(&H), _n(H.num_generators()) {}

      std::uint64_t size() const {
        std::uint64_t t = 1;
        for (std::size_t i = 0; i < _n; ++i) {
          t *= _H->prime();
        }
        return t;
      }
      unsigned digit(std::uint64_t c, std::size_t i) const {
        for (std::size_t t = 0; t < i; ++t) {
          c /= _H->prime();
        }
        return unsigned(c % _H->prime());
      }
      std::uint64_t encode(ExpVec const& v) const {
        std::uint64_t c = 0;
        for (std::size_t i = _n; i-- > 0;) {
          c = c * _H->prime() + v[i];
        }
        return c;
      }
      ExpVec decode(std::uint64_t c) const {
        ExpVec v(_n);
        for (std::size_t i = 0; i < _n; ++i) {
          v[i] = std::uint8_t(c % _H->prime());
          c /= _H->prime();
        }
        return v;
      }
      std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        ExpVec x = decode(a);
        _H->mul(x, decode(b));
        return encode(x);
      }
      std::uint64_t inv(std::uint64_t a) const {
        return encode(_H->inverse(decode(a)));
      }
      std::uint64_t conj_by_gen(std::uint64_t a, std::size_t g) const {
        ExpVec y = _H->inverse(_H->generator(g));
        _H->mul(y, decode(a));
        _H->mul_gen(y, g);
        return encode(y);
      }

     protected:
      PcPresentation const* _H;
      std::size_t           _n;
    };

    // p = 2: x * g_k = prefix * g_k^{e+1} * (suffix)^{g_k}, with conjugation
    // of suffixes tabulated.
    class Pc2Arith : public PcCodeArith {
     public:
      explicit Pc2Arith(PcPresentation const& H) : PcCodeArith(H) {
        if (H.prime() != 2 || _n > 30) {
          throw InvalidArgument("Pc2Arith: needs p = 2 and at most 30 generators");
        }
        _conj.resize(_n);
        _power.resize(_n);
        for (std::size_t k = 0; k < _n; ++k) {
          _power[k] = std::uint32_t(encode(H.power(k)));
          std::size_t const m = _n - k - 1;
          _conj[k].resize(std::size_t(1) << m);
          ExpVec gi = H.inverse(H.generator(k));
          for (std::uint64_t s = 0; s < (std::uint64_t(1) << m); ++s) {
            ExpVec y = gi;
            H.mul(y, decode(s << (k + 1)));
            H.mul_gen(y, k);
            _conj[k][s] = std::uint32_t(encode(y));
          }
        }
      }
      std::uint32_t mul_gen(std::uint32_t x, std::size_t k) const {
        std::uint32_t c   = _conj[k][x >> (k + 1)];
        std::uint32_t pre = x & ((std::uint32_t(1) << k) - 1);
        if (!((x >> k) & 1u)) {
          return pre | (std::uint32_t(1) << k) | c;
        }
        return pre | mul32(_power[k], c);
      }
      std::uint32_t mul32(std::uint32_t x, std::uint32_t y) const {
        while (y) {
          std::size_t l = std::size_t(__builtin_ctz(y));
          x             = mul_gen(x, l);
          y &= y - 1;
        }
        return x;
      }
      std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return mul32(std::uint32_t(a), std::uint32_t(b));
      }
      std::uint64_t inv(std::uint64_t a) const {
        std::uint32_t r = std::uint32_t(a), z = 0;
        while (r) {
          std::size_t i = std::size_t(__builtin_ctz(r));
          r             = mul_gen(r, i);
          z             = mul_gen(z, i);
        }
        return z;
      }
      std::uint64_t conj_by_gen(std::uint64_t a, std::size_t g) const {
        return mul(mul(inv(std::uint64_t(1) << g), a), std::uint64_t(1) << g);
      }

     private:
      std::vector<std::vector<std::uint32_t>> _conj;
      std::vector<std::uint32_t>              _power;
    };

    template <class A>
    PcEpiSearch pc_epimorphism_search(Presentation const& P, PcPresentation const& H,
                                      A const& ar, std::uint64_t max_nodes) {
      unsigned const      p     = H.prime();
      std::uint64_t const total = ar.size();
      std::vector<std::size_t> top;  // weight-one generators
      for (std::size_t i = 0; i < H.num_generators(); ++i) {
        if (H.weights()[i] == 1) {
          top.push_back(i);
        }
      }

      // conjugacy class representatives (least code in each class)
      std::vector<std::uint32_t> parent(total);
      for (std::uint64_t i = 0; i < total; ++i) {
        parent[i] = std::uint32_t(i);
      }
      auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
          parent[x] = parent[parent[x]];
          x         = parent[x];
        }
        return x;
      };
      for (std::uint64_t i = 0; i < total; ++i) {
        for (std::size_t g : top) {
          std::uint32_t a = find(std::uint32_t(i));
          std::uint32_t b = find(std::uint32_t(ar.conj_by_gen(i, g)));
          if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
          }
        }
      }
      std::vector<std::uint64_t> reps;
      for (std::uint64_t i = 0; i < total; ++i) {
        if (find(std::uint32_t(i)) == i) {
          reps.push_back(i);
        }
      }

      auto        E = eliminate_generators(P);
      auto const& R = E.reduced.relators();
      std::size_t const k = E.reduced.num_generators();

      // plan: generator order and, per step, an optional root constraint
      struct Step {
        std::size_t  gen = 0;
        std::int64_t m   = 0;  // g^m U = 1
        Word         U;
      };
      std::vector<Step> steps;
      std::vector<char> assigned(k, 0);
      for (std::size_t pos = 0; pos < k; ++pos) {
        Step st;
        bool found = false;
        for (std::size_t g = 0; g < k && !found && pos > 0; ++g) {
          if (assigned[g]) {
            continue;
          }
          for (auto const& r : R) {
            auto const& syl  = r.syllables();
            std::size_t hits = 0, at = 0;
            for (std::size_t i = 0; i < syl.size(); ++i) {
              if (syl[i].gen == g) {
                ++hits;
                at = i;
              }
            }
            if (hits != 1) {
              continue;
            }
            Word rot = r.rotated(at);
            Word U(std::vector<Syllable>(rot.syllables().begin() + 1, rot.syllables().end()));
            bool ok = true;
            for (auto const& s : U.syllables()) {
              ok = ok && assigned[s.gen];
            }
            if (ok) {
              st    = {g, rot.syllables()[0].exp, U};
              found = true;
              break;
            }
          }
        }
        if (!found) {
          std::size_t g = 0;
          while (assigned[g]) {
            ++g;
          }
          st.gen = g;
        }
        assigned[st.gen] = 1;
        steps.push_back(std::move(st));
      }

      auto pw = [&](std::uint64_t x, std::uint64_t m) {
        std::uint64_t r = 0;
        for (std::uint64_t t = 0; t < m; ++t) {
          r = ar.mul(r, x);
        }
        return r;
      };
      std::map<std::uint64_t, std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>>
           roots;
      auto root_table = [&](std::uint64_t m) -> auto& {
        auto it = roots.find(m);
        if (it != roots.end()) {
          return it->second;
        }
        auto& t = roots[m];
        for (std::uint64_t i = 0; i < total; ++i) {
          t[pw(i, m)].push_back(std::uint32_t(i));
        }
        return t;
      };

      PcEpiSearch                out;
      std::vector<std::uint64_t> im(k, 0), iminv(k, 0);
      auto eval = [&](Word const& w) {
        std::uint64_t e = 0;
        for (auto const& s : w.syllables()) {
          std::uint64_t g = s.exp > 0 ? im[s.gen] : iminv[s.gen];
          for (std::int64_t t = 0; t < std::abs(s.exp); ++t) {
            e = ar.mul(e, g);
          }
        }
        return e;
      };
      auto frattini_rank = [&](std::size_t upto) {
        std::vector<modp::Row> rows;
        for (std::size_t q = 0; q < upto; ++q) {
          modp::Row row;
          for (std::size_t g : top) {
            row.push_back(std::uint8_t(ar.digit(im[steps[q].gen], g)));
          }
          rows.push_back(std::move(row));
        }
        return modp::rank(rows, p);
      };

      std::function<bool(std::size_t)> descend = [&](std::size_t pos) -> bool {
        if (pos == k) {
          for (auto const& r : R) {
            if (eval(r) != 0) {
              return false;
            }
          }
          return frattini_rank(k) == top.size();
        }
        // the images so far must extend to a basis modulo the Frattini
        if (pos > 0 && frattini_rank(pos) + (k - pos) < top.size()) {
          return false;
        }
        Step const& st      = steps[pos];
        auto        try_one = [&](std::uint64_t code) {
          if (++out.nodes > max_nodes) {
            throw BudgetExceeded("pc epimorphism search exceeded "
                                 + std::to_string(max_nodes) + " nodes");
          }
          im[st.gen]    = code;
          iminv[st.gen] = ar.inv(code);
          return descend(pos + 1);
        };
        if (pos == 0) {
          for (auto c : reps) {
            if (try_one(c)) {
              return true;
            }
          }
          return false;
        }
        if (st.m != 0) {
          // g^m = U^-1
          std::uint64_t target = eval(st.U);
          if (st.m > 0) {
            target = ar.inv(target);
          }
          auto& table = root_table(std::uint64_t(std::abs(st.m)));
          auto  it    = table.find(target);
          if (it == table.end()) {
            return false;
          }
          for (auto c : it->second) {
            if (try_one(c)) {
              return true;
            }
          }
          return false;
        }
        for (std::uint64_t c = 0; c < total; ++c) {
          if (try_one(c)) {
            return true;
          }
        }
        return false;
      };
      if (descend(0)) {
        std::vector<ExpVec> full;
        for (auto const& w : E.expressions) {
          full.push_back(ar.decode(eval(w)));
        }
        out.images = std::move(full);
      }
      return out;
    }
  }  // namespace detail

  // Looks for a surjection P -> H. The first searched generator runs over
  // conjugacy class representatives; a generator constrained by a relator
  // g^m U with U already assigned runs over m-th roots of U^-1.
  inline PcEpiSearch find_pc_epimorphism(Presentation const& P, PcPresentation const& H,
                                         std::uint64_t max_nodes = default_max_nodes) {
    if (H.num_generators() > pc_max_sweep_generators) {
      throw BudgetExceeded("find_pc_epimorphism: target has more than "
                           + std::to_string(pc_max_sweep_generators) + " generators");
    }
    if (H.prime() == 2) {
      return detail::pc_epimorphism_search(P, H, detail::Pc2Arith(H), max_nodes);
    }
    return detail::pc_epimorphism_search(P, H, detail::PcCodeArith(H), max_nodes);
  }

}  // namespace sfsgrp
