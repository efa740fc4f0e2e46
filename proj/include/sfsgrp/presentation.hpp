#pragma once

// Finitely presented groups: the Presentation container, the text grammar,
// abelianization, and presentation-level products.

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "word.hpp"

namespace sfsgrp {

  class Presentation {
   public:
    Presentation() = default;

    Presentation(std::vector<std::string> generators, std::vector<Word> relators)
        : _names(std::move(generators)) {
      std::set<std::string> seen;
      for (auto const& n : _names) {
        if (n.empty()) {
          throw InvalidArgument("Presentation: empty generator name");
        }
        if (!seen.insert(n).second) {
          throw InvalidArgument("Presentation: duplicate generator name '" + n
                                + "'");
        }
      }
      for (auto const& r : relators) {
        add_relator(r);
      }
    }

    std::size_t num_generators() const noexcept {
      return _names.size();
    }
    std::vector<std::string> const& generators() const noexcept {
      return _names;
    }
    std::vector<Word> const& relators() const noexcept {
      return _rels;
    }
    std::string const& name(std::size_t g) const {
      return _names.at(g);
    }

    std::optional<std::size_t> index_of(std::string_view n) const {
      for (std::size_t i = 0; i < _names.size(); ++i) {
        if (_names[i] == n) {
          return i;
        }
      }
      return std::nullopt;
    }

    // Stores the cyclically reduced form; trivial relators are dropped.
    void add_relator(Word const& w) {
      for (auto const& s : w.syllables()) {
        if (s.gen >= _names.size()) {
          throw InvalidArgument("Presentation: relator mentions generator "
                                + std::to_string(s.gen) + " of "
                                + std::to_string(_names.size()));
        }
      }
      Word r = w.cyclically_reduced();
      if (!r.empty()) {
        _rels.push_back(std::move(r));
      }
    }

    // Rows are relators, columns generators.
    IntMatrix relation_matrix() const {
      IntMatrix M(_rels.size(), _names.size());
      for (std::size_t i = 0; i < _rels.size(); ++i) {
        for (auto const& s : _rels[i].syllables()) {
          M(i, s.gen) += static_cast<long>(s.exp);
        }
      }
      return M;
    }

    std::string word_to_string(Word const& w) const {
      return w.to_string(_names);
    }

    std::string to_string() const {
      std::string out = "< ";
      for (std::size_t i = 0; i < _names.size(); ++i) {
        out += (i == 0 ? "" : ",") + _names[i];
      }
      out += " | ";
      for (std::size_t i = 0; i < _rels.size(); ++i) {
        out += (i == 0 ? "" : ", ") + word_to_string(_rels[i]);
      }
      out += " >";
      return out;
    }

    friend bool operator==(Presentation const&, Presentation const&) = default;

   private:
    std::vector<std::string> _names;
    std::vector<Word>        _rels;
  };

  ////////////////////////////////////////////////////////////////////////
  // Abelian invariants
  ////////////////////////////////////////////////////////////////////////

  struct AbelianInvariants {
    std::vector<Int> torsion;  // each >= 2, divisibility chain
    std::size_t      free_rank = 0;

    bool is_finite() const noexcept {
      return free_rank == 0;
    }

    std::optional<Int> order() const {
      if (free_rank != 0) {
        return std::nullopt;
      }
      Int n = 1;
      for (auto const& d : torsion) {
        n *= d;
      }
      return n;
    }

    std::vector<long> torsion_as_longs() const {
      std::vector<long> out;
      for (auto const& d : torsion) {
        out.push_back(d.get_si());
      }
      return out;
    }

    std::string to_string() const {
      std::string out;
      if (free_rank > 0) {
        out = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
      }
      for (auto const& d : torsion) {
        out += (out.empty() ? "C" : " x C") + d.get_str();
      }
      return out.empty() ? "1" : out;
    }

    friend bool operator==(AbelianInvariants const&,
                           AbelianInvariants const&) = default;
  };

  // Invariant factors of Z^cols / rowspace(M).
  inline AbelianInvariants cokernel_invariants(IntMatrix const& M) {
    AbelianInvariants inv;
    auto              snf = smith_normal_form(M);
    std::size_t       rk  = 0;
    for (auto const& d : snf.diagonal()) {
      if (d == 0) {
        continue;
      }
      ++rk;
      if (d > 1) {
        inv.torsion.push_back(d);
      }
    }
    inv.free_rank = M.cols() - rk;
    return inv;
  }

  // Builds invariants from an arbitrary list of cyclic orders (0 = infinite).
  inline AbelianInvariants abelian_invariants_from_cyclic(
      std::vector<Int> const& orders) {
    IntMatrix M(orders.size(), orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
      M(i, i) = orders[i];
    }
    return cokernel_invariants(M);
  }

  inline AbelianInvariants abelianization(Presentation const& P) {
    return cokernel_invariants(P.relation_matrix());
  }

  ////////////////////////////////////////////////////////////////////////
  // Text grammar
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    class PresentationParser {
     public:
      explicit PresentationParser(std::string_view text) : _s(text) {}

      Presentation parse_presentation() {
        skip();
        expect('<');
        std::vector<std::string> names;
        skip();
        if (peek() != '|') {
          names.push_back(ident());
          skip();
          while (peek() == ',') {
            advance();
            skip();
            names.push_back(ident());
            skip();
          }
        }
        expect('|');
        _names = &names;
        std::vector<Word> rels;
        skip();
        if (peek() != '>') {
          rels.push_back(relation());
          skip();
          while (peek() == ',') {
            advance();
            rels.push_back(relation());
            skip();
          }
        }
        expect('>');
        skip();
        if (!at_end()) {
          fail("trailing characters after presentation");
        }
        return Presentation(std::move(names), std::move(rels));
      }

      Word parse_word(std::vector<std::string> const& names) {
        _names = &names;
        Word w = relation();
        skip();
        if (!at_end()) {
          fail("trailing characters after word");
        }
        return w;
      }

      // Comma separated list of words.
      std::vector<Word> parse_word_list(std::vector<std::string> const& names) {
        _names = &names;
        std::vector<Word> out;
        skip();
        if (at_end()) {
          return out;
        }
        out.push_back(relation());
        skip();
        while (peek() == ',') {
          advance();
          out.push_back(relation());
          skip();
        }
        if (!at_end()) {
          fail("unexpected character in word list");
        }
        return out;
      }

     private:
      // product ('=' product)?  ->  lhs * rhs^-1
      Word relation() {
        Word lhs = product();
        skip();
        if (peek() == '=') {
          advance();
          Word rhs = product();
          return lhs * rhs.inverse();
        }
        return lhs;
      }

      Word product() {
        Word w = factor();
        skip();
        while (peek() == '*') {
          advance();
          w *= factor();
          skip();
        }
        return w;
      }

      Word factor() {
        Word base = atom();
        skip();
        if (peek() == '^') {
          advance();
          skip();
          base = base.pow(integer());
        }
        return base;
      }

      Word atom() {
        skip();
        char c = peek();
        if (c == '[') {
          advance();
          Word x = product();
          skip();
          expect(',');
          Word y = product();
          skip();
          expect(']');
          return commutator(x, y);
        }
        if (c == '(') {
          advance();
          Word x = product();
          skip();
          expect(')');
          return x;
        }
        if (c == '1') {
          advance();
          return Word();
        }
        std::size_t line = _line, col = _col;
        std::string n    = ident();
        for (std::size_t i = 0; i < _names->size(); ++i) {
          if ((*_names)[i] == n) {
            return Word::gen(i);
          }
        }
        throw ParseError("unknown generator '" + n + "'", line, col);
      }

      std::int64_t integer() {
        bool neg = false;
        if (peek() == '-' || peek() == '+') {
          neg = peek() == '-';
          advance();
        }
        skip();
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
          fail("expected integer exponent");
        }
        std::int64_t v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
          v = v * 10 + (peek() - '0');
          if (v > (std::int64_t(1) << 40)) {
            fail("exponent too large");
          }
          advance();
        }
        return neg ? -v : v;
      }

      std::string ident() {
        skip();
        char c = peek();
        if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
          fail("expected generator name");
        }
        std::string out;
        while (std::isalnum(static_cast<unsigned char>(peek()))
               || peek() == '_') {
          out += peek();
          advance();
        }
        return out;
      }

      // Whitespace and '#' comments up to end of line.
      void skip() {
        while (!at_end()) {
          if (peek() == '#') {
            while (!at_end() && peek() != '\n') {
              advance();
            }
          } else if (std::isspace(static_cast<unsigned char>(peek()))) {
            advance();
          } else {
            break;
          }
        }
      }
      bool at_end() const {
        return _pos >= _s.size();
      }
      char peek() const {
        return at_end() ? '\0' : _s[_pos];
      }
      void advance() {
        if (_s[_pos] == '\n') {
          ++_line;
          _col = 1;
        } else {
          ++_col;
        }
        ++_pos;
      }
      void expect(char c) {
        skip();
        if (peek() != c) {
          fail(std::string("expected '") + c + "'");
        }
        advance();
      }
      [[noreturn]] void fail(std::string const& msg) const {
        throw ParseError(msg, _line, _col);
      }

      std::string_view                _s;
      std::size_t                     _pos   = 0;
      std::size_t                     _line  = 1;
      std::size_t                     _col   = 1;
      std::vector<std::string> const* _names = nullptr;
    };
  }  // namespace detail

  // Grammar: "< a,b | a^4*b, [a,b], a*b = b*a >"; whitespace-insensitive;
  // [x,y] expands to x^-1 y^-1 x y; "u = v" means u v^-1.
  inline Presentation parse_presentation(std::string_view text) {
    return detail::PresentationParser(text).parse_presentation();
  }

  inline Word parse_word(Presentation const& P, std::string_view text) {
    return detail::PresentationParser(text).parse_word(P.generators());
  }

  inline std::vector<Word> parse_word_list(Presentation const& P,
                                           std::string_view    text) {
    return detail::PresentationParser(text).parse_word_list(P.generators());
  }

  ////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////

  inline std::string fresh_name(Presentation const& P, std::string base) {
    if (!P.index_of(base)) {
      return base;
    }
    for (int i = 1;; ++i) {
      std::string n = base + std::to_string(i);
      if (!P.index_of(n)) {
        return n;
      }
    }
  }

  // P x| <t | t^m> where t acts by the endomorphism g -> images[g]:
  // relators of P, t^m, and t g t^-1 images[g]^-1 for every generator g.
  inline Presentation semidirect_presentation(Presentation const&     P,
                                              std::vector<Word> const& images,
                                              std::int64_t             m,
                                              std::string t_name = "t") {
    if (images.size() != P.num_generators()) {
      throw InvalidArgument("semidirect_presentation: " + std::to_string(images.size())
                            + " images for " + std::to_string(P.num_generators())
                            + " generators");
    }
    if (m < 2) {
      throw InvalidArgument("semidirect_presentation: m must be >= 2");
    }
    auto names = P.generators();
    names.push_back(fresh_name(P, std::move(t_name)));
    std::size_t const t = P.num_generators();
    std::vector<Word> rels = P.relators();
    rels.push_back(Word::gen(t, m));
    for (std::size_t g = 0; g < P.num_generators(); ++g) {
      if (!images[g].empty() && images[g].max_generator() >= t) {
        throw InvalidArgument("semidirect_presentation: image outside P");
      }
      rels.push_back(Word::gen(t) * Word::gen(g) * Word::gen(t, -1)
                     * images[g].inverse());
    }
    return Presentation(std::move(names), std::move(rels));
  }

  // Disjoint union of generators; relators of both plus every cross
  // commutator [g_P, g_Q]. Clashing names get suffixes 1 and 2.
  inline Presentation direct_product_presentation(Presentation const& P,
                                                  Presentation const& Q) {
    bool clash = false;
    for (auto const& n : Q.generators()) {
      clash = clash || P.index_of(n).has_value();
    }
    std::vector<std::string> names;
    for (auto const& n : P.generators()) {
      names.push_back(clash ? n + "1" : n);
    }
    for (auto const& n : Q.generators()) {
      names.push_back(clash ? n + "2" : n);
    }
    std::size_t const        shift = P.num_generators();
    std::vector<std::size_t> qmap(Q.num_generators());
    for (std::size_t i = 0; i < qmap.size(); ++i) {
      qmap[i] = shift + i;
    }
    std::vector<Word> rels = P.relators();
    for (auto const& r : Q.relators()) {
      rels.push_back(r.relabelled(qmap));
    }
    for (std::size_t i = 0; i < P.num_generators(); ++i) {
      for (std::size_t j = 0; j < Q.num_generators(); ++j) {
        rels.push_back(commutator(Word::gen(i), Word::gen(shift + j)));
      }
    }
    return Presentation(std::move(names), std::move(rels));
  }

  // Free group on the given names.
  inline Presentation free_group(std::vector<std::string> names) {
    return Presentation(std::move(names), {});
  }

}  // namespace sfsgrp
