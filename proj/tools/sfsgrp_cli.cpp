// Command-line front end. Exit codes: 0 ok, 2 verification FAIL, 1 usage or
// budget error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <regex>
#include <string>

#include "sfsgrp/validate.hpp"
#include "suites.hpp"

using namespace sfsgrp;
using namespace sfsgrp::tools;

namespace {

  constexpr char const* version = "1.0.0";

  struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  // key=value lines; '#' starts a comment.
  void apply_config(std::string const& path, Budgets& b) {
    std::ifstream in(path);
    if (!in) {
      throw UsageError("cannot read config file '" + path + "'");
    }
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      line = line.substr(0, line.find('#'));
      line.erase(0, line.find_first_not_of(" \t\r"));
      line.erase(line.find_last_not_of(" \t\r") + 1);
      if (line.empty()) {
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw UsageError(path + ":" + std::to_string(n) + ": expected key=value");
      }
      std::string key = line.substr(0, eq), val = line.substr(eq + 1);
      key.erase(key.find_last_not_of(" \t") + 1);
      val.erase(0, val.find_first_not_of(" \t"));
      std::replace(key.begin(), key.end(), '_', '-');
      std::uint64_t v = 0;
      try {
        std::size_t used = 0;
        v                = std::stoull(val, &used);
        if (used != val.size()) {
          throw std::invalid_argument(val);
        }
      } catch (std::exception const&) {
        throw UsageError(path + ":" + std::to_string(n) + ": '" + val + "' is not a count");
      }
      if (key == "max-nodes") {
        b.max_nodes = v;
      } else if (key == "order-budget") {
        b.order_budget = v;
      } else if (key == "max-cosets") {
        b.max_cosets = v;
      } else {
        throw UsageError(path + ":" + std::to_string(n) + ": unknown key '" + key + "'");
      }
    }
  }

  // Where a group comes from: exactly one of these options.
  struct Source {
    std::string data, group_file, pres, family, triangle;

    void add_to(CLI::App* app) {
      app->add_option("--data", data, "Seifert data, e.g. \"SFS[(3,1),(3,1),(4,1); d=0]\"");
      app->add_option("--group", group_file, "file holding a presentation <gens | rels>");
      app->add_option("--pres", pres, "inline presentation");
      app->add_option("--family", family, "gamma444:<+|->:<d>");
      app->add_option("--triangle", triangle, "triangle key, e.g. T(3,3,4)");
    }

    std::optional<SeifertData> seifert() const {
      if (!data.empty()) {
        return parse_seifert(data);
      }
      if (!family.empty()) {
        auto [s, d] = parse_family(family);
        return gamma444_data(s, d);
      }
      return std::nullopt;
    }

    static std::pair<GammaSign, std::int64_t> parse_family(std::string const& f) {
      static std::regex const re(R"(gamma444:([+-]):(-?\d+))");
      std::smatch             m;
      if (!std::regex_match(f, m, re)) {
        throw UsageError("--family expects gamma444:<+|->:<d>, got '" + f + "'");
      }
      return {m[1] == "+" ? GammaSign::plus : GammaSign::minus, std::stoll(m[2])};
    }

    Presentation presentation(json& inputs) const {
      int given = !data.empty() + !group_file.empty() + !pres.empty() + !family.empty()
                  + !triangle.empty();
      if (given != 1) {
        throw UsageError("give exactly one of --data, --group, --pres, --family, --triangle");
      }
      if (!data.empty()) {
        auto s         = parse_seifert(data);
        inputs["data"] = s.to_string();
        return presentation_of(s);
      }
      if (!group_file.empty()) {
        inputs["group"] = group_file;
        return parse_file(group_file);
      }
      if (!pres.empty()) {
        auto P         = parse_presentation(pres);
        inputs["pres"] = P.to_string();
        return P;
      }
      if (!family.empty()) {
        auto [s, d]      = parse_family(family);
        inputs["family"] = gamma_label(s, d);
        return gamma444(s, d);
      }
      auto k             = parse_triangle_key(triangle);
      inputs["triangle"] = k.to_string();
      return triangle_presentation(k);
    }

    static Presentation parse_file(std::string const& path) {
      try {
        return parse_presentation(read_file(path));
      } catch (ParseError const& e) {
        throw UsageError(path + ": " + e.what());
      }
    }
  };

  std::vector<Word> parse_words_in(Presentation const& P, std::string const& text) {
    return parse_word_list(P, text);
  }

  json word_list(Presentation const& P, std::vector<Word> const& ws) {
    json a = json::array();
    for (auto const& w : ws) {
      a.push_back(P.word_to_string(w));
    }
    return a;
  }

  json presentation_json(Presentation const& P) {
    return {{"generators", P.generators()},
            {"relators", word_list(P, P.relators())},
            {"text", P.to_string()}};
  }

  json criterion_json(CriterionResult const& r) {
    return {{"criterion", r.id},     {"title", r.title},     {"verdict", r.passed ? "PASS" : "FAIL"},
            {"summary", r.summary},  {"details", r.details}, {"runtime-ms", r.runtime_ms}};
  }

  // Aligned key: value text.
  void print_text(json const& j, std::ostream& out, int indent) {
    std::string const pad(indent, ' ');
    std::size_t       width = 0;
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) {
        width = std::max(width, it.key().size());
      }
    }
    auto scalar = [](json const& v) {
      return v.is_string() ? v.get<std::string>() : v.dump();
    };
    auto simple_array = [](json const& v) {
      for (auto const& x : v) {
        if (x.is_structured()) {
          return false;
        }
      }
      return true;
    };
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) {
        auto const& v = it.value();
        out << pad << it.key() << ":";
        if (v.is_object() || (v.is_array() && !simple_array(v))) {
          out << "\n";
        } else {
          out << std::string(width - it.key().size() + 1, ' ');
        }
        if (v.is_object()) {
          print_text(v, out, indent + 2);
        } else if (v.is_array() && simple_array(v)) {
          std::string s = "[";
          for (std::size_t i = 0; i < v.size(); ++i) {
            s += (i ? ", " : "") + scalar(v[i]);
          }
          out << s << "]\n";
        } else if (v.is_array()) {
          for (auto const& x : v) {
            out << pad << "  -\n";
            print_text(x, out, indent + 4);
          }
        } else {
          out << scalar(v) << "\n";
        }
      }
    } else {
      out << pad << scalar(j) << "\n";
    }
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sfsgrp: groups of Seifert fibred spaces and their finite quotients"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", version);

  std::string   format = "text";
  std::string   config;
  std::uint64_t max_nodes = 0, max_cosets = 0;
  std::size_t   order_budget = 0;
  app.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  auto* o_nodes  = app.add_option("--max-nodes", max_nodes, "hom search node budget");
  auto* o_order  = app.add_option("--order-budget", order_budget, "largest target order");
  auto* o_cosets = app.add_option("--max-cosets", max_cosets, "coset enumeration budget");
  app.add_option("--config", config, "key=value budget file (default: $SFSGRP_CONFIG)");

  Source src;
  auto*  present = app.add_subcommand("present", "print a presentation");
  auto*  h1      = app.add_subcommand("h1", "abelianization");
  auto*  euler   = app.add_subcommand("euler", "euler number of Seifert data");
  auto*  tri     = app.add_subcommand("triangle", "triangle group");
  auto*  cox     = app.add_subcommand("coxeter", "Coxeter extension and its index-2 kernel");
  auto*  root    = app.add_subcommand("root", "central root extension");
  auto*  g444    = app.add_subcommand("gamma444", "the S^2(4,4,4) family");
  auto*  cls     = app.add_subcommand("classify444", "identify a group over S^2(4,4,4)");
  auto*  pq      = app.add_subcommand("pquotient", "lower exponent-p central series");
  auto*  fp      = app.add_subcommand("fingerprint", "hom and epi counts into catalog groups");
  auto*  cos     = app.add_subcommand("cosets", "coset enumeration");
  auto*  sub     = app.add_subcommand("subgroup", "Reidemeister-Schreier presentation");
  auto*  gro     = app.add_subcommand("grothendieck", "finite-level fibre product report");
  auto*  ver     = app.add_subcommand("verify", "run a verification suite");
  auto*  val     = app.add_subcommand("validate", "try to refute that a map is an endomorphism");

  for (auto* c : {present, h1, cox, cls, pq, fp, cos, sub, val}) {
    src.add_to(c);
  }
  euler->add_option("--data", src.data, "Seifert data")->required();
  root->add_option("--data", src.data, "Seifert data")->required();
  std::int64_t root_n = 1;
  root->add_option("--n", root_n, "root order N")->required();

  std::string tri_key, epis_to;
  tri->add_option("--key", tri_key, "e.g. T(3,3,4)")->required();
  tri->add_option("--epis-to", epis_to, "catalog key to count epimorphisms onto");

  std::string  sign = "+";
  std::int64_t gd   = 0;
  g444->add_option("--sign", sign, "+ or -")->check(CLI::IsMember({"+", "-"}));
  g444->add_option("--d", gd, "parameter d")->allow_extra_args(false);

  unsigned prime = 2, cls_max = 5;
  pq->add_option("--prime", prime, "2 or 3");
  pq->add_option("--class", cls_max, "largest class, 1..6");

  std::string targets;
  fp->add_option("--targets", targets, "comma-separated catalog keys (default: catalog up to --order-budget)");

  std::string subgens;
  cos->add_option("--subgroup", subgens, "comma-separated subgroup generators (empty: trivial)");
  sub->add_option("--subgroup", subgens, "comma-separated subgroup generators")->required();

  std::string kill_file;
  std::size_t slice_order = 120;
  gro->add_option("--group", src.group_file, "presentation file")->required();
  gro->add_option("--kill", kill_file, "file of extra relators, comma separated")->required();
  gro->add_option("--slice-order", slice_order, "largest catalog target for the pair checks");

  std::string suite, d_range = "-6..6";
  ver->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  ver->add_option("--d-range", d_range, "d range for lemma-small-ab, e.g. -6..6");

  std::string images;
  val->add_option("--images", images, "comma-separated images of the generators")->required();
  unsigned val_class = 3;
  val->add_option("--class", val_class, "largest class for the p-quotient checks");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::CallForVersion const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 1;
  }

  auto const t0 = std::chrono::steady_clock::now();
  json       report;
  json       inputs  = json::object();
  json       results = json::object();
  int        code    = 0;
  std::string command;
  Budgets    b;

  try {
    if (config.empty()) {
      if (char const* env = std::getenv("SFSGRP_CONFIG")) {
        config = env;
      }
    }
    if (!config.empty()) {
      apply_config(config, b);
    }
    if (o_nodes->count()) b.max_nodes = max_nodes;
    if (o_order->count()) b.order_budget = order_budget;
    if (o_cosets->count()) b.max_cosets = max_cosets;

    HomSearchOptions hopts;
    hopts.max_nodes = b.max_nodes;

    if (*present) {
      command = "present";
      auto P  = src.presentation(inputs);
      results = presentation_json(P);
    } else if (*h1) {
      command = "h1";
      auto P  = src.presentation(inputs);
      auto H  = abelianization(P);
      results = to_json(H);
      if (auto s = src.seifert(); s && s->cones.size() == 3) {
        TriangleKey k(s->cones[0].p, s->cones[1].p, s->cones[2].p);
        bool        sorted = k.p == s->cones[0].p && k.q == s->cones[1].p && k.r == s->cones[2].p;
        if (sorted && k.list() == TriangleKey::List::top) {
          std::array<std::int64_t, 3> e{s->cones[0].beta, s->cones[1].beta, s->cones[2].beta};
          auto cf               = h1_closed_form(k, e, s->d);
          results["closed-form"] = cf.to_string();
          results["determinant"] = to_json(lemma_determinant(k, e, s->d));
          results["agrees"]      = cf == H;
        }
      }
    } else if (*euler) {
      command = "euler";
      auto s  = parse_seifert(src.data);
      inputs["data"]        = s.to_string();
      results["euler"]      = rational_to_string(euler_number(s));
      results["normalized"] = s.normalized().to_string();
    } else if (*tri) {
      command = "triangle";
      auto k  = parse_triangle_key(tri_key);
      inputs["key"] = k.to_string();
      auto P = triangle_presentation(k);
      results["presentation"] = P.to_string();
      results["list"]         = k.list_name();
      results["hyperbolic"]   = k.is_hyperbolic();
      results["abelianization"] = to_json(abelianization(P));
      if (!epis_to.empty()) {
        auto c = count_homs(P, *catalog_group(epis_to), hopts);
        inputs["epis-to"] = epis_to;
        results["homs"]   = c.homs;
        results["epis"]   = c.epis;
      }
    } else if (*cox) {
      command = "coxeter";
      auto s  = src.seifert();
      if (!s || !src.group_file.empty() || !src.pres.empty() || !src.triangle.empty()) {
        throw UsageError("coxeter needs --data");
      }
      inputs["data"] = s->to_string();
      auto L  = coxeter_extension(*s);
      auto K  = coxeter_kernel(L, b.max_cosets);
      auto HP = abelianization(presentation_of(*s));
      auto HK = abelianization(K.presentation);
      results["extension"]        = L.to_string();
      results["extension-h1"]     = abelianization(L).to_string();
      results["kernel-index"]     = K.index;
      results["kernel-h1"]        = HK.to_string();
      results["data-h1"]          = HP.to_string();
      results["kernel-h1-agrees"] = HK == HP;
    } else if (*root) {
      command = "root";
      auto s  = parse_seifert(src.data);
      inputs["data"] = s.to_string();
      inputs["n"]    = root_n;
      auto r = root_extension(s, root_n);
      auto e0 = euler_number(s), e1 = euler_number(r);
      results["root"]          = r.to_string();
      results["euler"]         = rational_to_string(e0);
      results["root-euler"]    = rational_to_string(e1);
      results["scales-by-n"]   = e1 == root_n * e0;
    } else if (*g444) {
      command = "gamma444";
      auto s  = sign == "+" ? GammaSign::plus : GammaSign::minus;
      inputs["family"] = gamma_label(s, gd);
      auto P = gamma444(s, gd);
      Int  m = abs(Int(4 * gd - (s == GammaSign::plus ? 3 : 1)));
      auto H = abelianization(P);
      results["presentation"]   = P.to_string();
      results["data"]           = gamma444_data(s, gd).to_string();
      results["abelianization"] = to_json(H);
      results["expected"]       = abelian_invariants_from_cyclic({Int(4), Int(4), m}).to_string();
    } else if (*cls) {
      command = "classify444";
      auto P  = src.presentation(inputs);
      auto c  = classify_444(P, b.max_nodes);
      results["outcome"]    = c.outcome_name();
      results["label"]      = c.label();
      results["h1"]         = c.h1.to_string();
      results["candidates"] = c.candidates;
      results["separating"] = c.separating;
      results["stage-5-order"] = "2^" + std::to_string(c.log_order);
      results["epi-nodes"]  = c.epi_nodes;
    } else if (*pq) {
      command = "pquotient";
      auto P  = src.presentation(inputs);
      inputs["prime"] = prime;
      inputs["class"] = cls_max;
      auto R = compute_pquotient(P, prime, cls_max);
      json st = json::array();
      for (auto const& S : R.stages) {
        st.push_back({{"class", S.cls},
                      {"generators", S.pc.num_generators()},
                      {"order", to_json(S.pc.order())}});
      }
      results["stages"]     = st;
      results["order"]      = R.stages.empty() ? json(1) : to_json(R.stages.back().pc.order());
      results["terminated"] = R.terminated;
      results["consistent"] = check_pquotient(R).empty();
    } else if (*fp) {
      command = "fingerprint";
      auto P  = src.presentation(inputs);
      std::vector<CatalogKey> keys;
      if (targets.empty()) {
        keys = catalog_up_to(b.order_budget);
      } else {
        for (auto const& t : CLI::detail::split(targets, ',')) {
          keys.push_back(parse_catalog_key(t));
        }
        inputs["targets"] = targets;
      }
      auto F  = fingerprint(P, keys, hopts);
      json es = json::array();
      for (auto const& e : F.entries) {
        json x = {{"target", e.key.to_string()}};
        if (e.count) {
          x["homs"] = e.count->homs;
          x["epis"] = e.count->epis;
        } else {
          x["error"] = e.error;
          code       = 1;  // budget breach, reported per entry
        }
        es.push_back(x);
      }
      results["entries"] = es;
    } else if (*cos || *sub) {
      command = *cos ? "cosets" : "subgroup";
      auto P  = src.presentation(inputs);
      auto H  = subgens.empty() ? std::vector<Word>{} : parse_words_in(P, subgens);
      inputs["subgroup"] = word_list(P, H);
      auto T = enumerate_cosets(P, H, b.max_cosets);
      results["index"] = T.num_cosets();
      if (*sub) {
        auto S = reidemeister_schreier(P, T);
        results["presentation"]     = presentation_json(S.presentation);
        results["generator-words"]  = word_list(P, S.generator_words);
        results["abelianization"]   = to_json(abelianization(S.presentation));
      }
    } else if (*gro) {
      command = "grothendieck";
      auto G  = Source::parse_file(src.group_file);
      std::vector<Word> extra;
      try {
        extra = parse_word_list(G, read_file(kill_file));
      } catch (ParseError const& e) {
        throw UsageError(kill_file + ": " + e.what());
      }
      inputs["group"]       = src.group_file;
      inputs["kill"]        = word_list(G, extra);
      inputs["slice-order"] = slice_order;
      GrothendieckOptions o;
      o.hom = hopts;
      auto R = grothendieck_report(G, extra, catalog_up_to(slice_order), b.order_budget, o);
      json ts = json::array();
      for (auto const& t : R.targets) {
        json x = {{"target", t.target}, {"order", t.order}, {"homs", t.homs},
                  {"candidates", t.candidates}, {"pairs-checked", t.pairs_checked},
                  {"failures", t.failures}};
        if (t.full_epis) {
          x["onto-pairs"]     = to_json(*t.full_epis);
          x["onto-pairs-on-P"] = to_json(*t.p_epis);
        }
        if (!t.error.empty()) {
          x["error"] = t.error;
        }
        ts.push_back(x);
      }
      results["verdict"]   = R.verdict;
      results["summary"]   = R.summary();
      results["failed-at"] = R.failed_at;
      results["scan"]      = {{"budget", R.scan_budget}, {"quotients", R.scan_quotients},
                              {"scanned", R.scan_scanned}};
      results["targets"]   = ts;
      results["unchecked-hypotheses"] = R.unchecked;
      code = R.verdict == "FAIL" ? 2 : R.verdict == "INCOMPLETE" ? 1 : 0;
    } else if (*ver) {
      command = "verify";
      inputs["suite"] = suite;
      static std::regex const re(R"((-?\d+)\.\.(-?\d+))");
      std::smatch             m;
      if (!std::regex_match(d_range, m, re) || std::stoll(m[1]) > std::stoll(m[2])) {
        throw UsageError("--d-range expects lo..hi, got '" + d_range + "'");
      }
      if (suite == "lemma-small-ab") {
        inputs["d-range"] = d_range;
      }
      auto rs   = run_suite(suite, b, std::stoll(m[1]), std::stoll(m[2]));
      json cr   = json::array();
      bool pass = true;
      for (auto const& r : rs) {
        json x = criterion_json(r);
        x.erase("runtime-ms");  // keep reports byte-identical
        cr.push_back(x);
        pass = pass && r.passed;
      }
      results["verdict"]  = pass ? "PASS" : "FAIL";
      results["criteria"] = cr;
      code = pass ? 0 : 2;
    } else if (*val) {
      command = "validate";
      auto P  = src.presentation(inputs);
      auto im = parse_words_in(P, images);
      inputs["images"] = word_list(P, im);
      ValidateOptions vo;
      vo.max_class    = val_class;
      vo.order_budget = std::min<std::size_t>(b.order_budget, 120);
      vo.max_nodes    = b.max_nodes;
      auto R = validate_map_soundly(P, im, vo);
      results["verdict"] = R.verdict();
      if (R.refutation) {
        results["stage"]   = R.refutation->stage;
        results["relator"] = R.refutation->relator;
        results["detail"]  = R.refutation->detail;
      }
      results["checks-run"]    = R.checks_run;
      results["budget-errors"] = R.budget_errors;
    }
  } catch (UsageError const& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (BudgetExceeded const& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 1;
  } catch (ParseError const& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (Error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  report["command"]      = command;
  report["inputs"]       = inputs;
  report["results"]      = results;
  report["budgets-used"] = {{"max-nodes", b.max_nodes},
                            {"order-budget", b.order_budget},
                            {"max-cosets", b.max_cosets},
                            {"config", config.empty() ? json(nullptr) : json(config)}};
  report["runtime-ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  report["version"] = version;

  if (format == "json") {
    std::cout << report.dump(2) << "\n";
  } else {
    print_text(report, std::cout, 0);
  }
  return code;
}
