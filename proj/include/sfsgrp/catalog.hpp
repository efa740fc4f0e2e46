#pragma once

// Catalog of small finite groups addressed by string keys: C8, D16, S4, A5,
// PSL2_7, PSL3_3, PSU3_3, M11, order16_#3.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <regex>
#include <string>
#include <tuple>
#include <vector>

#include "coset_enum.hpp"
#include "errors.hpp"
#include "finite_group.hpp"
#include "galois_field.hpp"
#include "presentation.hpp"

namespace sfsgrp {

  enum class Family {
    cyclic,
    dihedral,
    symmetric,
    alternating,
    psl2,
    psl3,
    psu3,
    mathieu,
    explicit_pc,
  };

  struct CatalogKey {
    Family      family = Family::cyclic;
    unsigned    param  = 1;  // n, q, or the group order for explicit_pc
    unsigned    index  = 0;  // SmallGroup number for explicit_pc

    std::string to_string() const {
      switch (family) {
        case Family::cyclic: return "C" + std::to_string(param);
        case Family::dihedral: return "D" + std::to_string(param);
        case Family::symmetric: return "S" + std::to_string(param);
        case Family::alternating: return "A" + std::to_string(param);
        case Family::psl2: return "PSL2_" + std::to_string(param);
        case Family::psl3: return "PSL3_" + std::to_string(param);
        case Family::psu3: return "PSU3_" + std::to_string(param);
        case Family::mathieu: return "M" + std::to_string(param);
        case Family::explicit_pc:
          return "order" + std::to_string(param) + "_#" + std::to_string(index);
      }
      return "?";
    }

    friend bool operator==(CatalogKey const&, CatalogKey const&) = default;
  };

  namespace detail {
    inline bool is_prime_power(unsigned q) {
      if (q < 2) {
        return false;
      }
      unsigned p = 2;
      while (q % p != 0) {
        ++p;
      }
      while (q % p == 0) {
        q /= p;
      }
      return q == 1;
    }

    inline unsigned gcd(unsigned a, unsigned b) {
      while (b != 0) {
        a %= b;
        std::swap(a, b);
      }
      return a;
    }

    // Hand-written presentations; numbering follows the SmallGroups library.
    inline std::map<std::pair<unsigned, unsigned>, char const*> const&
    explicit_presentations() {
      static std::map<std::pair<unsigned, unsigned>, char const*> const table = {
          {{1, 1}, "<a|a>"},
          {{2, 1}, "<a|a^2>"},
          {{3, 1}, "<a|a^3>"},
          {{4, 1}, "<a|a^4>"},
          {{4, 2}, "<a,b|a^2,b^2,[a,b]>"},
          {{5, 1}, "<a|a^5>"},
          {{6, 1}, "<a,b|a^3,b^2,(a*b)^2>"},
          {{6, 2}, "<a|a^6>"},
          {{7, 1}, "<a|a^7>"},
          {{8, 1}, "<a|a^8>"},
          {{8, 2}, "<a,b|a^4,b^2,[a,b]>"},
          {{8, 3}, "<a,b|a^4,b^2,(a*b)^2>"},
          {{8, 4}, "<a,b|a^4,a^2*b^-2,b^-1*a*b*a>"},
          {{8, 5}, "<a,b,c|a^2,b^2,c^2,[a,b],[a,c],[b,c]>"},
          {{9, 1}, "<a|a^9>"},
          {{9, 2}, "<a,b|a^3,b^3,[a,b]>"},
          {{10, 1}, "<a,b|a^5,b^2,(a*b)^2>"},
          {{10, 2}, "<a|a^10>"},
          {{11, 1}, "<a|a^11>"},
          {{12, 1}, "<a,b|a^6,b^2*a^-3,b^-1*a*b*a>"},
          {{12, 2}, "<a|a^12>"},
          {{12, 3}, "<a,b|a^2,b^3,(a*b)^3>"},
          {{12, 4}, "<a,b|a^6,b^2,(a*b)^2>"},
          {{12, 5}, "<a,b|a^6,b^2,[a,b]>"},
          {{16, 1}, "<a|a^16>"},
          {{16, 2}, "<a,b|a^4,b^4,[a,b]>"},
          {{16, 3}, "<a,b,c|a^4,b^2,c^2,[a,b],[b,c],c^-1*a*c*b^-1*a^-1>"},
          {{16, 4}, "<a,b|a^4,b^4,b^-1*a*b*a>"},
          {{16, 5}, "<a,b|a^8,b^2,[a,b]>"},
          {{16, 6}, "<a,b|a^8,b^2,b^-1*a*b*a^-5>"},
          {{16, 7}, "<a,b|a^8,b^2,(a*b)^2>"},
          {{16, 8}, "<a,b|a^8,b^2,b^-1*a*b*a^-3>"},
          {{16, 9}, "<a,b|a^8,b^2*a^-4,b^-1*a*b*a>"},
          {{16, 10}, "<a,b,c|a^4,b^2,c^2,[a,b],[a,c],[b,c]>"},
          {{16, 11}, "<a,b,c|a^4,b^2,(a*b)^2,c^2,[a,c],[b,c]>"},
          {{16, 12}, "<a,b,c|a^4,a^2*b^-2,b^-1*a*b*a,c^2,[a,c],[b,c]>"},
          {{16, 13}, "<a,b,c|a^4,b^2,c^2,[a,b],[a,c],[b,c]*a^-2>"},
          {{16, 14},
           "<a,b,c,d|a^2,b^2,c^2,d^2,[a,b],[a,c],[a,d],[b,c],[b,d],[c,d]>"},
      };
      return table;
    }

    inline Perm cycle_perm(unsigned n, std::vector<unsigned> const& cyc) {
      Perm p(n);
      for (unsigned i = 0; i < n; ++i) {
        p[i] = i;
      }
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        p[cyc[i]] = cyc[(i + 1) % cyc.size()];
      }
      return p;
    }

    inline Perm compose(Perm const& a, Perm const& b) {  // a then b
      Perm c(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        c[i] = b[a[i]];
      }
      return c;
    }

    // PSL(2,q) on the projective line {0..q-1} u {inf = q}.
    inline std::vector<Perm> psl2_generators(unsigned q) {
      GaloisField       F(q);
      unsigned const    inf = q;
      std::vector<Perm> gens;
      for (unsigned b : F.prime_field_basis()) {
        Perm t(q + 1);
        for (unsigned x = 0; x < q; ++x) {
          t[x] = F.add(x, b);
        }
        t[inf] = inf;
        gens.push_back(t);
      }
      Perm w(q + 1);
      w[0]   = inf;
      w[inf] = 0;
      for (unsigned x = 1; x < q; ++x) {
        w[x] = F.neg(F.inv(x));
      }
      gens.push_back(w);
      unsigned sq = F.mul(F.primitive(), F.primitive());
      Perm     m(q + 1);
      for (unsigned x = 0; x < q; ++x) {
        m[x] = F.mul(sq, x);
      }
      m[inf] = inf;
      gens.push_back(m);
      return gens;
    }

    using Vec3 = std::array<unsigned, 3>;
    using Mat3 = std::array<std::array<unsigned, 3>, 3>;

    inline Vec3 vec_mat(GaloisField const& F, Vec3 const& v, Mat3 const& M) {
      Vec3 out{0, 0, 0};
      for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
          out[j] = F.add(out[j], F.mul(v[i], M[i][j]));
        }
      }
      return out;
    }

    // Scale so the first nonzero coordinate is 1.
    inline Vec3 normalize(GaloisField const& F, Vec3 v) {
      for (int i = 0; i < 3; ++i) {
        if (v[i] != 0) {
          unsigned s = F.inv(v[i]);
          for (auto& x : v) {
            x = F.mul(x, s);
          }
          break;
        }
      }
      return v;
    }

    inline std::vector<Perm> projective_action(GaloisField const&       F,
                                               std::vector<Vec3> const& points,
                                               std::vector<Mat3> const& mats) {
      std::map<Vec3, unsigned> where;
      for (unsigned i = 0; i < points.size(); ++i) {
        where[points[i]] = i;
      }
      std::vector<Perm> gens;
      for (auto const& M : mats) {
        Perm p(points.size());
        for (unsigned i = 0; i < points.size(); ++i) {
          auto it = where.find(normalize(F, vec_mat(F, points[i], M)));
          if (it == where.end()) {
            throw Error("projective_action: point set not invariant");
          }
          p[i] = it->second;
        }
        gens.push_back(p);
      }
      return gens;
    }

    // PSL(3,3) = SL(3,3) on the 13 points of the projective plane.
    inline std::vector<Perm> psl3_3_generators() {
      GaloisField       F(3);
      std::vector<Vec3> pts;
      for (unsigned a = 0; a < 3; ++a) {
        for (unsigned b = 0; b < 3; ++b) {
          for (unsigned c = 0; c < 3; ++c) {
            Vec3 v{a, b, c};
            if ((a || b || c) && normalize(F, v) == v) {
              pts.push_back(v);
            }
          }
        }
      }
      std::vector<Mat3> mats;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          if (i != j) {
            Mat3 M{};
            for (int k = 0; k < 3; ++k) {
              M[k][k] = 1;
            }
            M[i][j] = 1;
            mats.push_back(M);
          }
        }
      }
      return projective_action(F, pts, mats);
    }

    // PSU(3,3) = SU(3,3) on the 28 isotropic points of the hermitian form
    // u1 v3^3 + u2 v2^3 + u3 v1^3 over GF(9); generated by the unitriangular
    // isometries above and below the diagonal.
    inline std::vector<Perm> psu3_3_generators() {
      GaloisField F(9);
      auto        bar = [&](unsigned x) { return F.frobenius(x); };
      auto        form = [&](Vec3 const& u, Vec3 const& v) {
        unsigned s = F.mul(u[0], bar(v[2]));
        s          = F.add(s, F.mul(u[1], bar(v[1])));
        return F.add(s, F.mul(u[2], bar(v[0])));
      };
      std::vector<Vec3> pts;
      for (unsigned a = 0; a < 9; ++a) {
        for (unsigned b = 0; b < 9; ++b) {
          for (unsigned c = 0; c < 9; ++c) {
            Vec3 v{a, b, c};
            if ((a || b || c) && normalize(F, v) == v && form(v, v) == 0) {
              pts.push_back(v);
            }
          }
        }
      }
      // M preserves the form iff the images of the unit vectors do.
      auto isometry = [&](Mat3 const& M) {
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            Vec3 ei{0, 0, 0}, ej{0, 0, 0};
            ei[i] = 1;
            ej[j] = 1;
            if (form(vec_mat(F, ei, M), vec_mat(F, ej, M)) != form(ei, ej)) {
              return false;
            }
          }
        }
        return true;
      };
      std::vector<Mat3> mats;
      for (bool lower : {false, true}) {
        for (unsigned a = 0; a < 9; ++a) {
          for (unsigned b = 0; b < 9; ++b) {
            for (unsigned c = 0; c < 9; ++c) {
              if (!(a || b || c)) {
                continue;
              }
              Mat3 M{};
              for (int k = 0; k < 3; ++k) {
                M[k][k] = 1;
              }
              if (lower) {
                M[1][0] = a;
                M[2][0] = b;
                M[2][1] = c;
              } else {
                M[0][1] = a;
                M[0][2] = b;
                M[1][2] = c;
              }
              if (isometry(M)) {
                mats.push_back(M);
              }
            }
          }
        }
      }
      return projective_action(F, pts, mats);
    }

    // Keeps a generator only when it enlarges the group generated so far.
    inline std::vector<Perm> prune_generators(std::vector<Perm> const& gens,
                                              std::size_t max_order) {
      std::vector<Perm> kept;
      std::size_t       current = 1;
      for (auto const& g : gens) {
        auto trial = kept;
        trial.push_back(g);
        std::size_t n = FiniteGroup::from_permutations("tmp", trial, max_order)
                            .order();
        if (n > current) {
          kept    = std::move(trial);
          current = n;
        }
      }
      return kept;
    }

    inline unsigned expected_order(CatalogKey const& k) {
      unsigned long n = 0;
      switch (k.family) {
        case Family::cyclic:
        case Family::dihedral:
        case Family::explicit_pc: return k.param;
        case Family::symmetric:
        case Family::alternating:
          n = 1;
          for (unsigned i = 2; i <= k.param; ++i) {
            n *= i;
          }
          return unsigned(k.family == Family::alternating ? n / 2 : n);
        case Family::psl2: {
          unsigned long q = k.param;
          return unsigned(q * (q * q - 1) / gcd(2, unsigned(q - 1)));
        }
        case Family::psl3: return 5616;
        case Family::psu3: return 6048;
        case Family::mathieu: return 7920;
      }
      return 0;
    }
  }  // namespace detail

  inline CatalogKey parse_catalog_key(std::string const& s) {
    std::smatch m;
    auto        num = [&](int i) { return unsigned(std::stoul(m[i].str())); };
    CatalogKey  k;
    if (std::regex_match(s, m, std::regex(R"(C(\d+))"))) {
      k = {Family::cyclic, num(1), 0};
    } else if (std::regex_match(s, m, std::regex(R"(D(\d+))"))) {
      k = {Family::dihedral, num(1), 0};
    } else if (std::regex_match(s, m, std::regex(R"(S(\d+))"))) {
      k = {Family::symmetric, num(1), 0};
    } else if (std::regex_match(s, m, std::regex(R"(A(\d+))"))) {
      k = {Family::alternating, num(1), 0};
    } else if (std::regex_match(s, m, std::regex(R"(PSL2_(\d+))"))) {
      k = {Family::psl2, num(1), 0};
    } else if (s == "PSL3_3") {
      k = {Family::psl3, 3, 0};
    } else if (s == "PSU3_3") {
      k = {Family::psu3, 3, 0};
    } else if (s == "M11") {
      k = {Family::mathieu, 11, 0};
    } else if (std::regex_match(s, m, std::regex(R"(order(\d+)_#(\d+))"))) {
      k = {Family::explicit_pc, num(1), num(2)};
    } else {
      throw InvalidArgument("unknown catalog key '" + s + "'");
    }
    bool ok = true;
    switch (k.family) {
      case Family::cyclic: ok = k.param >= 1; break;
      case Family::dihedral: ok = k.param >= 4 && k.param % 2 == 0; break;
      case Family::symmetric: ok = k.param >= 1 && k.param <= 8; break;
      case Family::alternating: ok = k.param >= 3 && k.param <= 8; break;
      case Family::psl2: ok = detail::is_prime_power(k.param) && k.param <= 255; break;
      case Family::explicit_pc:
        ok = detail::explicit_presentations().count({k.param, k.index}) > 0;
        break;
      default: break;
    }
    if (!ok) {
      throw InvalidArgument("invalid parameter in catalog key '" + s + "'");
    }
    return k;
  }

  inline unsigned catalog_order(CatalogKey const& k) {
    return detail::expected_order(k);
  }

  inline FiniteGroup build_group(CatalogKey const& key,
                                 std::size_t max_order = default_order_budget) {
    if (detail::expected_order(key) > max_order) {
      throw BudgetExceeded("catalog group " + key.to_string() + " has order "
                           + std::to_string(detail::expected_order(key))
                           + " > budget " + std::to_string(max_order));
    }
    std::string const label = key.to_string();
    std::vector<Perm> gens;
    unsigned const    n = key.param;
    switch (key.family) {
      case Family::cyclic: {
        std::vector<unsigned> cyc(n);
        std::iota(cyc.begin(), cyc.end(), 0u);
        gens.push_back(detail::cycle_perm(n, cyc));
        break;
      }
      case Family::dihedral: {
        unsigned m = n / 2;
        if (m == 2) {
          gens = {detail::compose(detail::cycle_perm(4, {0, 1}),
                                  detail::cycle_perm(4, {2, 3})),
                  detail::compose(detail::cycle_perm(4, {0, 2}),
                                  detail::cycle_perm(4, {1, 3}))};
          break;
        }
        std::vector<unsigned> cyc(m);
        std::iota(cyc.begin(), cyc.end(), 0u);
        Perm r = detail::cycle_perm(m, cyc);
        Perm s(m);
        for (unsigned i = 0; i < m; ++i) {
          s[i] = (m - i) % m;
        }
        gens = {r, s};
        break;
      }
      case Family::symmetric: {
        if (n == 1) {
          gens = {Perm{0}};
          break;
        }
        std::vector<unsigned> cyc(n);
        std::iota(cyc.begin(), cyc.end(), 0u);
        gens = {detail::cycle_perm(n, {0, 1}), detail::cycle_perm(n, cyc)};
        break;
      }
      case Family::alternating: {
        std::vector<unsigned> cyc;
        for (unsigned i = (n % 2 == 0 ? 1 : 0); i < n; ++i) {
          cyc.push_back(i);
        }
        gens = {detail::cycle_perm(n, {0, 1, 2})};
        if (n > 3) {
          gens.push_back(detail::cycle_perm(n, cyc));
        }
        break;
      }
      case Family::psl2: gens = detail::psl2_generators(n); break;
      case Family::psl3: gens = detail::psl3_3_generators(); break;
      case Family::psu3:
        gens = detail::prune_generators(detail::psu3_3_generators(), max_order);
        break;
      case Family::mathieu:
        gens = {detail::cycle_perm(11, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}),
                detail::compose(detail::cycle_perm(11, {2, 6, 10, 7}),
                                detail::cycle_perm(11, {3, 9, 4, 5}))};
        break;
      case Family::explicit_pc: {
        auto P = parse_presentation(
            detail::explicit_presentations().at({key.param, key.index}));
        auto T = enumerate_cosets(P, {}, 4096);
        if (T.num_cosets() != key.param) {
          throw Error("catalog: presentation for " + label + " has order "
                      + std::to_string(T.num_cosets()));
        }
        gens = T.generator_permutations();
        break;
      }
    }
    auto G = FiniteGroup::from_permutations(label, gens, max_order);
    if (G.order() != detail::expected_order(key)) {
      throw Error("catalog: " + label + " built with order "
                  + std::to_string(G.order()) + ", expected "
                  + std::to_string(detail::expected_order(key)));
    }
    return G;
  }

  inline FiniteGroup build_group(std::string const& key,
                                 std::size_t max_order = default_order_budget) {
    return build_group(parse_catalog_key(key), max_order);
  }

  // Process-wide cache of built groups, keyed by catalog string.
  inline std::shared_ptr<FiniteGroup const> catalog_group(std::string const& key) {
    static std::mutex                                                  mu;
    static std::map<std::string, std::shared_ptr<FiniteGroup const>> cache;
    CatalogKey const k    = parse_catalog_key(key);
    std::string const canon = k.to_string();
    {
      std::lock_guard<std::mutex> lock(mu);
      auto                        it = cache.find(canon);
      if (it != cache.end()) {
        return it->second;
      }
    }
    auto G = std::make_shared<FiniteGroup const>(build_group(k));
    std::lock_guard<std::mutex> lock(mu);
    return cache.emplace(canon, std::move(G)).first->second;
  }

  // Sort order for fingerprints and reports: (order, family, parameter, index).
  inline bool catalog_less(CatalogKey const& a, CatalogKey const& b) {
    return std::make_tuple(detail::expected_order(a), int(a.family), a.param, a.index)
           < std::make_tuple(detail::expected_order(b), int(b.family), b.param,
                             b.index);
  }

  inline std::vector<CatalogKey> sorted_keys(std::vector<CatalogKey> keys) {
    std::sort(keys.begin(), keys.end(), catalog_less);
    return keys;
  }

  // Every key the catalog ships, sorted.
  inline std::vector<CatalogKey> default_catalog() {
    std::vector<CatalogKey> keys;
    for (unsigned n = 2; n <= 32; ++n) {
      keys.push_back({Family::cyclic, n, 0});
    }
    for (unsigned n = 4; n <= 32; n += 2) {
      keys.push_back({Family::dihedral, n, 0});
    }
    for (unsigned n = 3; n <= 5; ++n) {
      keys.push_back({Family::symmetric, n, 0});
    }
    for (unsigned n = 4; n <= 7; ++n) {
      keys.push_back({Family::alternating, n, 0});
    }
    for (unsigned q : {4u, 5u, 7u, 8u, 9u, 11u, 13u, 16u, 17u, 19u, 23u, 25u, 27u}) {
      keys.push_back({Family::psl2, q, 0});
    }
    keys.push_back({Family::psl3, 3, 0});
    keys.push_back({Family::psu3, 3, 0});
    keys.push_back({Family::mathieu, 11, 0});
    for (auto const& [k, pres] : detail::explicit_presentations()) {
      keys.push_back({Family::explicit_pc, k.first, k.second});
    }
    return sorted_keys(keys);
  }

  inline std::vector<CatalogKey> catalog_up_to(std::size_t max_order) {
    std::vector<CatalogKey> out;
    for (auto const& k : default_catalog()) {
      if (catalog_order(k) <= max_order) {
        out.push_back(k);
      }
    }
    return out;
  }

  // One key per isomorphism type of nonabelian simple group of order below
  // 10^4; A5 stands for PSL2_4 and PSL2_5, A6 for PSL2_9.
  inline std::vector<CatalogKey> nonabelian_simple_catalog(std::size_t max_order) {
    std::vector<CatalogKey> all = {
        {Family::alternating, 5, 0}, {Family::psl2, 7, 0},
        {Family::alternating, 6, 0}, {Family::psl2, 8, 0},
        {Family::psl2, 11, 0},       {Family::psl2, 13, 0},
        {Family::psl2, 17, 0},       {Family::alternating, 7, 0},
        {Family::psl2, 19, 0},       {Family::psl2, 16, 0},
        {Family::psl3, 3, 0},        {Family::psu3, 3, 0},
        {Family::psl2, 23, 0},       {Family::psl2, 25, 0},
        {Family::mathieu, 11, 0},    {Family::psl2, 27, 0},
    };
    std::vector<CatalogKey> out;
    for (auto const& k : all) {
      if (catalog_order(k) <= max_order) {
        out.push_back(k);
      }
    }
    return sorted_keys(out);
  }

  // Every order below this has its nonabelian simple groups listed above.
  inline constexpr std::size_t simple_catalog_complete_below = 10000;

}  // namespace sfsgrp
