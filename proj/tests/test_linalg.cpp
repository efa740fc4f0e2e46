#include <gtest/gtest.h>

#include <random>

#include "sfsgrp/linalg.hpp"

using namespace sfsgrp;

namespace {

  // Laplace expansion along the first row; independent of Bareiss.
  Int cofactor_det(IntMatrix const& A) {
    std::size_t n = A.rows();
    if (n == 0) {
      return 1;
    }
    if (n == 1) {
      return A(0, 0);
    }
    Int total = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (A(0, j) == 0) {
        continue;
      }
      IntMatrix M(n - 1, n - 1);
      for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t c = 0, cc = 0; c < n; ++c) {
          if (c != j) {
            M(r - 1, cc++) = A(r, c);
          }
        }
      }
      Int t = A(0, j) * cofactor_det(M);
      total += (j % 2 == 0) ? t : Int(-t);
    }
    return total;
  }

  void check_snf_invariants(IntMatrix const& A, SnfResult const& r) {
    ASSERT_EQ(r.U * A * r.V, r.S);
    Int du = abs(cofactor_det(r.U));
    Int dv = abs(cofactor_det(r.V));
    EXPECT_EQ(du, 1);
    EXPECT_EQ(dv, 1);
    for (std::size_t i = 0; i < r.S.rows(); ++i) {
      for (std::size_t j = 0; j < r.S.cols(); ++j) {
        if (i != j) {
          ASSERT_EQ(r.S(i, j), 0);
        }
      }
    }
    auto d = r.diagonal();
    for (std::size_t i = 0; i < d.size(); ++i) {
      ASSERT_GE(d[i], 0);
      if (i + 1 < d.size() && d[i] != 0) {
        ASSERT_EQ(d[i + 1] % d[i], 0) << A.to_string();
      }
      if (d[i] == 0 && i + 1 < d.size()) {
        ASSERT_EQ(d[i + 1], 0);
      }
    }
  }

  IntMatrix seifert_334() {
    return IntMatrix{{1, 3, 0, 0}, {1, 0, 3, 0}, {1, 0, 0, 4}, {0, 1, 1, 1}};
  }

}  // namespace

TEST(Snf, IdentityIsFixed) {
  auto r = smith_normal_form(IntMatrix::identity(2));
  EXPECT_EQ(r.S, IntMatrix::identity(2));
  EXPECT_EQ(r.U, IntMatrix::identity(2));
  EXPECT_EQ(r.V, IntMatrix::identity(2));
}

TEST(Snf, Diag4And6) {
  IntMatrix A{{4, 0}, {0, 6}};
  auto      r = smith_normal_form(A);
  EXPECT_EQ(r.S, (IntMatrix{{2, 0}, {0, 12}}));
  check_snf_invariants(A, r);
  // oracle: d1 = gcd(4,6) = 2, d2 = 24
  EXPECT_EQ(elementary_divisors_oracle(A), (std::vector<Int>{2, 12}));
}

TEST(Snf, SeifertMatrix334) {
  auto A = seifert_334();
  auto r = smith_normal_form(A);
  check_snf_invariants(A, r);
  EXPECT_EQ(r.diagonal(), (std::vector<Int>{1, 1, 1, 33}));
  EXPECT_EQ(elementary_divisors_oracle(A), (std::vector<Int>{1, 1, 1, 33}));
}

TEST(Snf, EmptyAndRectangular) {
  IntMatrix E(0, 3);
  auto      r = smith_normal_form(E);
  EXPECT_EQ(r.S.rows(), 0u);
  EXPECT_EQ(r.V.rows(), 3u);
  IntMatrix A{{2, 4, 6}};
  auto      s = smith_normal_form(A);
  check_snf_invariants(A, s);
  EXPECT_EQ(s.diagonal(), (std::vector<Int>{2}));
  EXPECT_EQ(s.rank(), 1u);
}

TEST(Snf, ZeroMatrix) {
  IntMatrix Z(2, 2);
  EXPECT_TRUE(smith_normal_form(Z).nonzero_divisors().empty());
  EXPECT_TRUE(elementary_divisors_oracle(Z).empty());
}

TEST(Snf, OracleSmallCases) {
  EXPECT_EQ(elementary_divisors_oracle(IntMatrix{{2, 0}, {0, 4}}),
            (std::vector<Int>{2, 4}));
  EXPECT_EQ(elementary_divisors_oracle(IntMatrix{{6, 0}, {0, 4}}),
            (std::vector<Int>{2, 12}));
}

TEST(Snf, OracleRejectsLargeInput) {
  EXPECT_THROW(elementary_divisors_oracle(IntMatrix(7, 2)), BudgetExceeded);
}

TEST(Determinant, Examples) {
  EXPECT_EQ(determinant(IntMatrix::identity(3)), 1);
  // (3,3,5), e = (1,1,1), d = 0
  IntMatrix A335{{1, 3, 0, 0}, {1, 0, 3, 0}, {1, 0, 0, 5}, {0, 1, 1, 1}};
  EXPECT_EQ(abs(determinant(A335)), 3 * (5 + 5 + 3));
  EXPECT_EQ(determinant(A335), cofactor_det(A335));
  IntMatrix A444{{1, 4, 0, 0}, {1, 0, 4, 0}, {1, 0, 0, 4}, {0, 1, 1, 1}};
  EXPECT_EQ(abs(determinant(A444)), 48);
  EXPECT_EQ(determinant(A444), cofactor_det(A444));
  EXPECT_THROW(determinant(IntMatrix(2, 3)), InvalidArgument);
}

TEST(Determinant, LargeEntriesStayExact) {
  IntMatrix A(3, 3);
  Int       big("123456789012345678901234567890");
  A(0, 0) = big;
  A(1, 1) = big;
  A(2, 2) = 7;
  A(0, 1) = 1;
  EXPECT_EQ(determinant(A), big * big * 7);
}

TEST(SnfProperty, RandomAgainstMinorOracle) {
  std::mt19937                       rng(20260101);
  std::uniform_int_distribution<int> dim(1, 6), val(-20, 20), sparse(0, 3);
  for (int trial = 0; trial < 1200; ++trial) {
    std::size_t m = dim(rng), n = dim(rng);
    IntMatrix   A(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) = sparse(rng) == 0 ? 0 : val(rng);
      }
    }
    auto r = smith_normal_form(A);
    check_snf_invariants(A, r);
    ASSERT_EQ(r.nonzero_divisors(), elementary_divisors_oracle(A))
        << A.to_string();
    if (m == n) {
      Int det = cofactor_det(A);
      ASSERT_EQ(determinant(A), det);
      if (det != 0) {
        Int prod = 1;
        for (auto const& d : r.diagonal()) {
          prod *= d;
        }
        ASSERT_EQ(prod, abs(det));
      }
    }
  }
}

TEST(SnfProperty, Deterministic) {
  auto A = seifert_334();
  auto r1 = smith_normal_form(A);
  auto r2 = smith_normal_form(A);
  EXPECT_EQ(r1.U, r2.U);
  EXPECT_EQ(r1.V, r2.V);
}

TEST(ModP, RankMatchesSnf) {
  std::mt19937                       rng(7);
  std::uniform_int_distribution<int> dim(1, 5), val(-9, 9);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t m = dim(rng), n = dim(rng);
    IntMatrix   A(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        A(i, j) = val(rng);
      }
    }
    for (unsigned p : {2u, 3u}) {
      std::size_t expect = 0;
      for (auto const& d : smith_normal_form(A).nonzero_divisors()) {
        if (d % p != 0) {
          ++expect;
        }
      }
      ASSERT_EQ(modp::rank(A, p), expect);
    }
  }
}
