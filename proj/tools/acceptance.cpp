// Runs acceptance criteria 1..12 and prints PASS/FAIL per criterion.
// Usage: sfsgrp_acceptance [id ...]

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>

#include "suites.hpp"

using namespace sfsgrp;
using namespace sfsgrp::tools;

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    int id = std::atoi(argv[i]);
    if (id < 1 || id > 12) {
      std::cerr << "usage: sfsgrp_acceptance [criterion id 1..12 ...]\n";
      return 1;
    }
    only.insert(id);
  }
  auto want = [&](int id) { return only.empty() || only.count(id) > 0; };

  Budgets                       b;
  std::optional<GammaQuotients> gq;
  auto gamma = [&]() -> GammaQuotients const& {
    if (!gq) {
      gq = GammaQuotients::compute();
    }
    return *gq;
  };

  int failed = 0;
  auto report = [&](CriterionResult const& r) {
    std::printf("Criterion %2d %s  %-32s %s (%.1f s)\n", r.id, r.passed ? "PASS" : "FAIL",
                r.title.c_str(), r.summary.c_str(), double(r.runtime_ms) / 1000.0);
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  };

  if (want(1)) report(criterion_lemma_sweep());
  if (want(2)) report(criterion_triangles());
  if (want(3)) report(criterion_gamma_h1());
  if (want(4)) report(criterion_gamma_orders(gamma()));
  if (want(5)) report(criterion_gamma_consistency(gamma(), b));
  if (want(6)) report(criterion_coxeter(b));
  if (want(7)) report(criterion_euler_scaling(b));
  if (want(8)) report(criterion_c3_kernel(b));
  if (want(9)) report(criterion_higman_scan(b));
  if (want(10)) report(criterion_pt_density(b));
  if (want(11)) report(criterion_allodd());
  if (want(12)) report(criterion_tie_pairs(gamma(), b));

  std::printf("%s: %d criteria failed\n", failed ? "FAIL" : "PASS", failed);
  return failed ? 2 : 0;
}
