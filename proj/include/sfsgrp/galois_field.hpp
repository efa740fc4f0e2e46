#pragma once

// Small finite fields GF(p^k), elements encoded as integers 0..q-1 whose
// base-p digits are polynomial coefficients (digit i <-> X^i).

#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace sfsgrp {

  class GaloisField {
   public:
    explicit GaloisField(unsigned q) : _q(q) {
      if (q < 2 || q > 256) {
        throw InvalidArgument("GaloisField: q must be in [2, 256]");
      }
      for (unsigned p = 2; p <= q; ++p) {
        if (q % p == 0) {
          _p = p;
          break;
        }
      }
      unsigned r = q;
      while (r % _p == 0) {
        r /= _p;
        ++_k;
      }
      if (r != 1) {
        throw InvalidArgument("GaloisField: " + std::to_string(q)
                              + " is not a prime power");
      }
      build_addition();
      find_primitive_modulus();
    }

    unsigned size() const noexcept {
      return _q;
    }
    unsigned characteristic() const noexcept {
      return _p;
    }
    unsigned degree() const noexcept {
      return _k;
    }

    unsigned add(unsigned a, unsigned b) const {
      return _add[a * _q + b];
    }
    unsigned neg(unsigned a) const {
      return _neg[a];
    }
    unsigned sub(unsigned a, unsigned b) const {
      return add(a, neg(b));
    }
    unsigned mul(unsigned a, unsigned b) const {
      if (a == 0 || b == 0) {
        return 0;
      }
      return _exp[(_log[a] + _log[b]) % (_q - 1)];
    }
    unsigned inv(unsigned a) const {
      if (a == 0) {
        throw InvalidArgument("GaloisField: inverse of zero");
      }
      return _exp[(_q - 1 - _log[a]) % (_q - 1)];
    }
    unsigned pow(unsigned a, unsigned long e) const {
      if (a == 0) {
        return e == 0 ? 1 : 0;
      }
      return _exp[(_log[a] * (e % (_q - 1))) % (_q - 1)];
    }
    // x -> x^p
    unsigned frobenius(unsigned a) const {
      return pow(a, _p);
    }
    unsigned primitive() const noexcept {
      return _exp[1 % (_q - 1)];
    }
    // 1, X, ..., X^{k-1}
    std::vector<unsigned> prime_field_basis() const {
      std::vector<unsigned> b;
      unsigned              v = 1;
      for (unsigned i = 0; i < _k; ++i, v *= _p) {
        b.push_back(v);
      }
      return b;
    }

   private:
    std::vector<unsigned> digits(unsigned a) const {
      std::vector<unsigned> d(_k);
      for (unsigned i = 0; i < _k; ++i, a /= _p) {
        d[i] = a % _p;
      }
      return d;
    }
    unsigned encode(std::vector<unsigned> const& d) const {
      unsigned a = 0;
      for (unsigned i = _k; i-- > 0;) {
        a = a * _p + d[i];
      }
      return a;
    }

    void build_addition() {
      _add.resize(_q * _q);
      _neg.resize(_q);
      for (unsigned a = 0; a < _q; ++a) {
        auto da = digits(a);
        std::vector<unsigned> dn(_k);
        for (unsigned i = 0; i < _k; ++i) {
          dn[i] = (_p - da[i]) % _p;
        }
        _neg[a] = encode(dn);
        for (unsigned b = 0; b < _q; ++b) {
          auto db = digits(b);
          std::vector<unsigned> ds(_k);
          for (unsigned i = 0; i < _k; ++i) {
            ds[i] = (da[i] + db[i]) % _p;
          }
          _add[a * _q + b] = encode(ds);
        }
      }
    }

    // First monic f of degree k (coefficients in lexicographic order) for
    // which X has multiplicative order q-1 modulo f.
    void find_primitive_modulus() {
      unsigned const n = _q - 1;
      for (unsigned low = 0; low < _q; ++low) {
        auto f = digits(low);  // f = X^k + sum f_i X^i
        if (_k > 1 && f[0] == 0) {
          continue;
        }
        std::vector<unsigned> x(_k, 0);
        x[0] = 1;  // X^0
        _exp.assign(n, 0);
        _log.assign(_q, 0);
        std::vector<char> seen(_q, 0);
        bool              ok = true;
        for (unsigned i = 0; i < n; ++i) {
          unsigned e = encode(x);
          if (e == 0 || seen[e]) {
            ok = false;
            break;
          }
          seen[e] = 1;
          _exp[i] = e;
          _log[e] = i;
          // x <- x * X mod f
          if (_k == 1) {
            // degree one: the multiplier is the constant root -f0
            unsigned root = (_p - f[0]) % _p;
            x[0]          = (x[0] * root) % _p;
          } else {
            unsigned top = x[_k - 1];
            for (unsigned j = _k - 1; j > 0; --j) {
              x[j] = x[j - 1];
            }
            x[0] = 0;
            for (unsigned j = 0; j < _k; ++j) {
              x[j] = (x[j] + (_p - f[j]) % _p * top) % _p;
            }
          }
        }
        if (ok && encode(x) == 1) {
          return;
        }
      }
      throw InvalidArgument("GaloisField: no primitive modulus found");
    }

    unsigned              _q = 0, _p = 0, _k = 0;
    std::vector<unsigned> _add, _neg, _exp, _log;
  };

}  // namespace sfsgrp
