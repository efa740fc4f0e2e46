#pragma once

#include <algorithm>
#include <cstdlib>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sfsgrp {

  struct Syllable {
    std::size_t  gen;
    std::int64_t exp;

    friend bool operator==(Syllable const&, Syllable const&) = default;
    friend auto operator<=>(Syllable const&, Syllable const&) = default;
  };

  // A freely reduced word: adjacent syllables have distinct generators and
  // every exponent is nonzero. Construction always reduces, so equality of
  // Words is equality of group elements of the free group.
  class Word {
   public:
    Word() = default;

    explicit Word(std::vector<Syllable> raw) {
      for (auto const& s : raw) {
        push(s);
      }
    }

    static Word gen(std::size_t g, std::int64_t e = 1) {
      return Word({Syllable{g, e}});
    }

    // Letters as signed generator numbers: +(g+1) or -(g+1).
    static Word from_letters(std::vector<int> const& letters) {
      Word w;
      for (int l : letters) {
        w.push(Syllable{static_cast<std::size_t>(std::abs(l) - 1),
                        l > 0 ? 1 : -1});
      }
      return w;
    }

    std::vector<Syllable> const& syllables() const noexcept {
      return _syl;
    }
    bool empty() const noexcept {
      return _syl.empty();
    }
    std::size_t num_syllables() const noexcept {
      return _syl.size();
    }

    std::size_t length() const {
      std::size_t n = 0;
      for (auto const& s : _syl) {
        n += static_cast<std::size_t>(std::abs(s.exp));
      }
      return n;
    }

    std::int64_t exponent_sum(std::size_t g) const {
      std::int64_t n = 0;
      for (auto const& s : _syl) {
        if (s.gen == g) {
          n += s.exp;
        }
      }
      return n;
    }

    // Number of letters g^{+-1} in the word.
    std::size_t occurrences(std::size_t g) const {
      std::size_t n = 0;
      for (auto const& s : _syl) {
        if (s.gen == g) {
          n += static_cast<std::size_t>(std::abs(s.exp));
        }
      }
      return n;
    }

    bool mentions(std::size_t g) const {
      return std::any_of(_syl.begin(), _syl.end(), [g](Syllable const& s) {
        return s.gen == g;
      });
    }

    std::size_t max_generator() const {
      std::size_t m = 0;
      for (auto const& s : _syl) {
        m = std::max(m, s.gen);
      }
      return m;
    }

    std::vector<int> letters() const {
      std::vector<int> out;
      for (auto const& s : _syl) {
        int l = static_cast<int>(s.gen) + 1;
        for (std::int64_t i = 0; i < std::abs(s.exp); ++i) {
          out.push_back(s.exp > 0 ? l : -l);
        }
      }
      return out;
    }

    Word inverse() const {
      Word w;
      w._syl.reserve(_syl.size());
      for (auto it = _syl.rbegin(); it != _syl.rend(); ++it) {
        w._syl.push_back(Syllable{it->gen, -it->exp});
      }
      return w;
    }

    Word& operator*=(Word const& other) {
      for (auto const& s : other._syl) {
        push(s);
      }
      return *this;
    }

    friend Word operator*(Word a, Word const& b) {
      a *= b;
      return a;
    }

    Word pow(std::int64_t k) const {
      Word base = k < 0 ? inverse() : *this;
      Word out;
      for (std::int64_t i = 0; i < std::abs(k); ++i) {
        out *= base;
      }
      return out;
    }

    // Cyclically reduced form: strips u ... u^{-1} and merges the two ends.
    Word cyclically_reduced() const {
      std::vector<Syllable> s = _syl;
      while (s.size() >= 2 && s.front().gen == s.back().gen) {
        std::int64_t e = s.front().exp + s.back().exp;
        std::size_t  g = s.front().gen;
        s.pop_back();
        s.erase(s.begin());
        if (e != 0) {
          s.insert(s.begin(), Syllable{g, e});
        }
      }
      Word w;
      w._syl = std::move(s);
      return w;
    }

    // Rotation starting at syllable i.
    Word rotated(std::size_t i) const {
      std::vector<Syllable> s(_syl.begin() + i, _syl.end());
      s.insert(s.end(), _syl.begin(), _syl.begin() + i);
      return Word(std::move(s));
    }

    // Replace every generator g by images[g].
    Word substitute(std::vector<Word> const& images) const {
      Word out;
      for (auto const& s : _syl) {
        out *= images.at(s.gen).pow(s.exp);
      }
      return out;
    }

    Word relabelled(std::vector<std::size_t> const& gen_map) const {
      std::vector<Syllable> s;
      s.reserve(_syl.size());
      for (auto const& x : _syl) {
        s.push_back(Syllable{gen_map.at(x.gen), x.exp});
      }
      return Word(std::move(s));
    }

    std::string to_string(std::vector<std::string> const& names) const {
      if (_syl.empty()) {
        return "1";
      }
      std::string out;
      for (std::size_t i = 0; i < _syl.size(); ++i) {
        if (i > 0) {
          out += "*";
        }
        out += names.at(_syl[i].gen);
        if (_syl[i].exp != 1) {
          out += "^" + std::to_string(_syl[i].exp);
        }
      }
      return out;
    }

    friend bool operator==(Word const&, Word const&) = default;
    friend auto operator<=>(Word const& a, Word const& b) {
      return a._syl <=> b._syl;
    }

   private:
    void push(Syllable s) {
      if (s.exp == 0) {
        return;
      }
      if (!_syl.empty() && _syl.back().gen == s.gen) {
        _syl.back().exp += s.exp;
        if (_syl.back().exp == 0) {
          _syl.pop_back();
        }
        return;
      }
      _syl.push_back(s);
    }

    std::vector<Syllable> _syl;
  };

  // x^-1 y^-1 x y
  inline Word commutator(Word const& x, Word const& y) {
    return x.inverse() * y.inverse() * x * y;
  }

  // Freely reduces a raw syllable sequence, validating generator indices.
  inline Word reduce_word(std::vector<Syllable> const& raw,
                          std::size_t                  num_gens) {
    for (auto const& s : raw) {
      if (s.gen >= num_gens) {
        throw InvalidArgument("reduce_word: generator index "
                              + std::to_string(s.gen) + " out of range [0, "
                              + std::to_string(num_gens) + ")");
      }
    }
    return Word(raw);
  }

}  // namespace sfsgrp
