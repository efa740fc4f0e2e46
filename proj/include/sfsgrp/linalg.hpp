#pragma once

// Exact integer matrix algebra: Smith normal form with unimodular
// transforms, fraction-free determinants, the minor-gcd oracle for
// elementary divisors, and a small dense row reducer over F_p.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sfsgrp {

  using Int = mpz_class;

  class IntMatrix {
   public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols)
        : _rows(rows), _cols(cols), _entries(rows * cols, Int(0)) {}

    IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
      _rows = rows.size();
      _cols = _rows == 0 ? 0 : rows.begin()->size();
      _entries.reserve(_rows * _cols);
      for (auto const& r : rows) {
        if (r.size() != _cols) {
          throw InvalidArgument("IntMatrix: ragged initializer");
        }
        for (long x : r) {
          _entries.emplace_back(x);
        }
      }
    }

    static IntMatrix identity(std::size_t n) {
      IntMatrix I(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        I(i, i) = 1;
      }
      return I;
    }

    std::size_t rows() const noexcept {
      return _rows;
    }
    std::size_t cols() const noexcept {
      return _cols;
    }
    bool is_square() const noexcept {
      return _rows == _cols;
    }

    Int& operator()(std::size_t i, std::size_t j) {
      return _entries[i * _cols + j];
    }
    Int const& operator()(std::size_t i, std::size_t j) const {
      return _entries[i * _cols + j];
    }

    std::vector<Int> const& entries() const noexcept {
      return _entries;
    }

    void swap_rows(std::size_t i, std::size_t j) {
      if (i == j) {
        return;
      }
      for (std::size_t c = 0; c < _cols; ++c) {
        std::swap((*this)(i, c), (*this)(j, c));
      }
    }

    void swap_cols(std::size_t i, std::size_t j) {
      if (i == j) {
        return;
      }
      for (std::size_t r = 0; r < _rows; ++r) {
        std::swap((*this)(r, i), (*this)(r, j));
      }
    }

    // row[dst] += k * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, Int const& k) {
      for (std::size_t c = 0; c < _cols; ++c) {
        (*this)(dst, c) += k * (*this)(src, c);
      }
    }

    // col[dst] += k * col[src]
    void add_col_multiple(std::size_t dst, std::size_t src, Int const& k) {
      for (std::size_t r = 0; r < _rows; ++r) {
        (*this)(r, dst) += k * (*this)(r, src);
      }
    }

    void negate_row(std::size_t i) {
      for (std::size_t c = 0; c < _cols; ++c) {
        (*this)(i, c) = -(*this)(i, c);
      }
    }

    friend bool operator==(IntMatrix const& a, IntMatrix const& b) {
      return a._rows == b._rows && a._cols == b._cols
             && a._entries == b._entries;
    }

    friend IntMatrix operator*(IntMatrix const& a, IntMatrix const& b) {
      if (a._cols != b._rows) {
        throw InvalidArgument("IntMatrix: dimension mismatch in product");
      }
      IntMatrix c(a._rows, b._cols);
      for (std::size_t i = 0; i < a._rows; ++i) {
        for (std::size_t k = 0; k < a._cols; ++k) {
          Int const& aik = a(i, k);
          if (aik == 0) {
            continue;
          }
          for (std::size_t j = 0; j < b._cols; ++j) {
            c(i, j) += aik * b(k, j);
          }
        }
      }
      return c;
    }

    std::string to_string() const {
      std::ostringstream os;
      os << "[";
      for (std::size_t i = 0; i < _rows; ++i) {
        os << (i == 0 ? "[" : ", [");
        for (std::size_t j = 0; j < _cols; ++j) {
          os << (j == 0 ? "" : ", ") << (*this)(i, j).get_str();
        }
        os << "]";
      }
      os << "]";
      return os.str();
    }

   private:
    std::size_t      _rows = 0;
    std::size_t      _cols = 0;
    std::vector<Int> _entries;
  };

  struct SnfResult {
    IntMatrix S;
    IntMatrix U;
    IntMatrix V;

    // Diagonal of S, including zeros, of length min(rows, cols).
    std::vector<Int> diagonal() const {
      std::vector<Int> d;
      std::size_t      k = std::min(S.rows(), S.cols());
      d.reserve(k);
      for (std::size_t i = 0; i < k; ++i) {
        d.push_back(S(i, i));
      }
      return d;
    }

    std::vector<Int> nonzero_divisors() const {
      std::vector<Int> d;
      for (auto const& x : diagonal()) {
        if (x != 0) {
          d.push_back(x);
        }
      }
      return d;
    }

    std::size_t rank() const {
      return nonzero_divisors().size();
    }
  };

  // U * A * V = S with U, V unimodular and S diagonal, s_i >= 0, s_i | s_{i+1}.
  // Pivot: smallest nonzero absolute value in the active block, ties broken by
  // lowest (row, col).
  inline SnfResult smith_normal_form(IntMatrix const& A) {
    std::size_t const m = A.rows();
    std::size_t const n = A.cols();
    SnfResult         r{A, IntMatrix::identity(m), IntMatrix::identity(n)};
    IntMatrix&        S = r.S;
    std::size_t const k = std::min(m, n);

    Int q;
    for (std::size_t t = 0; t < k;) {
      bool        found = false;
      std::size_t pr = 0, pc = 0;
      Int         best;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (S(i, j) == 0) {
            continue;
          }
          Int a = abs(S(i, j));
          if (!found || a < best) {
            found = true;
            best  = a;
            pr    = i;
            pc    = j;
          }
        }
      }
      if (!found) {
        break;
      }
      S.swap_rows(t, pr);
      r.U.swap_rows(t, pr);
      S.swap_cols(t, pc);
      r.V.swap_cols(t, pc);

      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (S(i, t) == 0) {
          continue;
        }
        q = S(i, t) / S(t, t);
        if (q != 0) {
          S.add_row_multiple(i, t, -q);
          r.U.add_row_multiple(i, t, -q);
        }
        if (S(i, t) != 0) {
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (S(t, j) == 0) {
          continue;
        }
        q = S(t, j) / S(t, t);
        if (q != 0) {
          S.add_col_multiple(j, t, -q);
          r.V.add_col_multiple(j, t, -q);
        }
        if (S(t, j) != 0) {
          clean = false;
        }
      }
      if (!clean) {
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i) {
        for (std::size_t j = t + 1; j < n; ++j) {
          if (S(i, j) % S(t, t) != 0) {
            S.add_row_multiple(t, i, Int(1));
            r.U.add_row_multiple(t, i, Int(1));
            divides = false;
            break;
          }
        }
      }
      if (!divides) {
        continue;
      }
      if (S(t, t) < 0) {
        S.negate_row(t);
        r.U.negate_row(t);
      }
      ++t;
    }
    return r;
  }

  // Fraction-free (Bareiss) elimination.
  inline Int determinant(IntMatrix const& A) {
    if (!A.is_square()) {
      throw InvalidArgument("determinant: matrix is not square ("
                            + std::to_string(A.rows()) + "x"
                            + std::to_string(A.cols()) + ")");
    }
    std::size_t const n = A.rows();
    if (n == 0) {
      return Int(1);
    }
    IntMatrix M    = A;
    Int       prev = 1;
    int       sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (M(k, k) == 0) {
        std::size_t i = k + 1;
        while (i < n && M(i, k) == 0) {
          ++i;
        }
        if (i == n) {
          return Int(0);
        }
        M.swap_rows(k, i);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          M(i, j) = (M(i, j) * M(k, k) - M(i, k) * M(k, j)) / prev;
        }
        M(i, k) = 0;
      }
      prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
  }

  namespace detail {
    inline void
    combinations(std::size_t n,
                 std::size_t k,
                 std::vector<std::vector<std::size_t>>& out) {
      std::vector<std::size_t> c(k);
      for (std::size_t i = 0; i < k; ++i) {
        c[i] = i;
      }
      while (true) {
        out.push_back(c);
        std::size_t i = k;
        while (i > 0 && c[i - 1] == n - k + i - 1) {
          --i;
        }
        if (i == 0) {
          return;
        }
        ++c[i - 1];
        for (std::size_t j = i; j < k; ++j) {
          c[j] = c[j - 1] + 1;
        }
      }
    }
  }  // namespace detail

  inline constexpr std::size_t minor_oracle_max_dim = 6;

  // Independent route to the elementary divisors: d_k = gcd of all k x k
  // minors, s_k = d_k / d_{k-1}. Returns the nonzero s_k.
  inline std::vector<Int> elementary_divisors_oracle(IntMatrix const& A) {
    if (A.rows() > minor_oracle_max_dim || A.cols() > minor_oracle_max_dim) {
      throw BudgetExceeded("elementary_divisors_oracle: matrix "
                           + std::to_string(A.rows()) + "x"
                           + std::to_string(A.cols()) + " exceeds "
                           + std::to_string(minor_oracle_max_dim) + "x"
                           + std::to_string(minor_oracle_max_dim));
    }
    std::vector<Int>  result;
    Int               prev = 1;
    std::size_t const kmax = std::min(A.rows(), A.cols());
    for (std::size_t k = 1; k <= kmax; ++k) {
      std::vector<std::vector<std::size_t>> rs, cs;
      detail::combinations(A.rows(), k, rs);
      detail::combinations(A.cols(), k, cs);
      Int       g = 0;
      IntMatrix minor(k, k);
      for (auto const& ri : rs) {
        for (auto const& ci : cs) {
          for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) {
              minor(a, b) = A(ri[a], ci[b]);
            }
          }
          Int d = determinant(minor);
          mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        }
      }
      if (g == 0) {
        break;
      }
      result.push_back(g / prev);
      prev = g;
    }
    return result;
  }

  ////////////////////////////////////////////////////////////////////////
  // Dense linear algebra over F_p for small primes
  ////////////////////////////////////////////////////////////////////////

  namespace modp {

    using Row = std::vector<std::uint8_t>;

    inline unsigned inverse(unsigned a, unsigned p) {
      for (unsigned x = 1; x < p; ++x) {
        if ((a * x) % p == 1) {
          return x;
        }
      }
      throw InvalidArgument("modp::inverse: non-invertible element");
    }

    // Reduced row echelon form in place; returns the pivot column of each
    // surviving row. Zero rows are removed.
    inline std::vector<std::size_t> rref(std::vector<Row>& rows, unsigned p) {
      std::vector<std::size_t> pivots;
      if (rows.empty()) {
        return pivots;
      }
      std::size_t const ncols = rows.front().size();
      std::size_t       r     = 0;
      for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) {
          ++piv;
        }
        if (piv == rows.size()) {
          continue;
        }
        std::swap(rows[r], rows[piv]);
        unsigned inv = inverse(rows[r][c], p);
        if (inv != 1) {
          for (auto& x : rows[r]) {
            x = static_cast<std::uint8_t>((x * inv) % p);
          }
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (i == r || rows[i][c] == 0) {
            continue;
          }
          unsigned f = rows[i][c];
          for (std::size_t j = c; j < ncols; ++j) {
            rows[i][j] = static_cast<std::uint8_t>(
                (rows[i][j] + (p - f) * rows[r][j]) % p);
          }
        }
        pivots.push_back(c);
        ++r;
      }
      rows.resize(r);
      return pivots;
    }

    inline std::size_t rank(std::vector<Row> rows, unsigned p) {
      return rref(rows, p).size();
    }

    inline std::size_t rank(IntMatrix const& A, unsigned p) {
      std::vector<Row> rows(A.rows(), Row(A.cols(), 0));
      for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) {
          Int v = A(i, j) % static_cast<unsigned long>(p);
          if (v < 0) {
            v += p;
          }
          rows[i][j] = static_cast<std::uint8_t>(v.get_ui());
        }
      }
      return rank(std::move(rows), p);
    }

  }  // namespace modp

}  // namespace sfsgrp
