// pcirc: transformations, inference, and checks for polynomial-encoded
// distributions represented as arithmetic circuits.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pcirc/division_elim.hpp"
#include "pcirc/errors.hpp"
#include "pcirc/hardness.hpp"
#include "pcirc/inference.hpp"
#include "pcirc/io.hpp"
#include "pcirc/leaf_transforms.hpp"
#include "pcirc/oracle.hpp"
#include "pcirc/structured.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_parse = 2;
constexpr int exit_semantics = 3;
constexpr int exit_verify = 4;

struct CommonOpts {
  uint64_t seed = 0x5eed;
  std::size_t max_terms = pcirc::oracle::default_term_cap;
};

pcirc::Circuit load(const std::string& path) {
  if (path == "-") return pcirc::read_pcirc(std::cin);
  return pcirc::read_pcirc_file(path);
}

void emit(const pcirc::Circuit& c, const std::string& out_path) {
  if (out_path.empty())
    pcirc::write_pcirc(std::cout, c);
  else
    pcirc::write_pcirc_file(out_path, c);
}

int cmd_transform(const CommonOpts& common, const std::string& input_path,
                  const std::string& to_name, const std::string& route_text, bool verify,
                  bool keep_intermediate, const std::string& force_name,
                  const std::string& objective_name, const std::string& out_path) {
  pcirc::Circuit c = load(input_path);
  if (!force_name.empty()) {
    if (c.semantics().kind != pcirc::Semantics::raw) {
      std::cerr << "--force only applies to raw circuits\n";
      return exit_semantics;
    }
    auto forced = pcirc::parse_semantics(force_name);
    if (!forced) {
      std::cerr << "unknown semantics '" << force_name << "'\n";
      return exit_semantics;
    }
    c = pcirc::retag(c, *forced);
  }
  auto to = pcirc::parse_semantics(to_name);
  if (!to) {
    std::cerr << "unknown semantics '" << to_name << "'\n";
    return exit_semantics;
  }

  pcirc::Route route;
  if (!route_text.empty()) {
    auto parsed = pcirc::parse_route(route_text);
    if (!parsed) {
      std::cerr << "bad route '" << route_text << "'\n";
      return exit_semantics;
    }
    route = *parsed;
    pcirc::SemanticsTag at = c.semantics();
    for (int e : route) {
      if (!(pcirc::edge_source(e) == at)) {
        std::cerr << "route edge " << e << " expects " << semantics_name(pcirc::edge_source(e))
                  << " but the circuit is " << semantics_name(at) << "\n";
        return exit_semantics;
      }
      at = pcirc::edge_target(e);
    }
    if (!(at == *to)) {
      std::cerr << "route ends at " << semantics_name(at) << ", not " << semantics_name(*to)
                << "\n";
      return exit_semantics;
    }
  } else if (!(c.semantics() == *to)) {
    route = pcirc::plan_route(c.semantics(), *to,
                              objective_name == "edges" ? pcirc::RouteObjective::min_edges
                                                        : pcirc::RouteObjective::min_size);
  }

  std::cerr << "route: " << (route.empty() ? "(none)" : pcirc::route_str(route)) << "\n";
  std::cerr << "size before: " << c.size() << "\n";
  pcirc::Circuit out = c;
  int step = 0;
  for (int e : route) {
    ++step;
    if (keep_intermediate && pcirc::edge_is_starred(e)) {
      pcirc::EdgePipelineArtifacts artifacts;
      out = pcirc::edge_transform(out, e, &artifacts);
      std::string stem = out_path.empty() ? "pcirc_step" + std::to_string(step) : out_path;
      pcirc::write_pcirc_file(stem + ".gadget.pcirc", *artifacts.gadget);
      pcirc::write_pcirc_file(stem + ".split.pcirc", *artifacts.split_host);
      std::cerr << "kept intermediates: " << stem << ".gadget.pcirc, " << stem
                << ".split.pcirc\n";
    } else {
      out = pcirc::apply_edge(out, e);
    }
  }
  std::cerr << "size after: " << out.size() << "\n";

  if (verify && c.semantics().distribution_tag() && c.var_count() <= 10) {
    pcirc::DistTable before = pcirc::oracle::dist_from(c);
    pcirc::DistTable after = pcirc::oracle::dist_from(out);
    if (!(before == after)) {
      std::cerr << "verification FAILED: distributions differ\n";
      return exit_verify;
    }
    std::cerr << "verified: distribution preserved (" << (std::size_t{1} << c.var_count())
              << " masses)\n";
  }
  emit(out, out_path);
  return exit_ok;
}

int cmd_query(const std::string& input_path, const std::vector<std::string>& query_texts,
              bool compile) {
  pcirc::Circuit c = load(input_path);
  if (compile) {
    switch (c.semantics().kind) {
      case pcirc::Semantics::fourier: c = pcirc::fourier_to_generating(c); break;
      case pcirc::Semantics::likelihood: c = pcirc::edge_transform(c, 4); break;
      case pcirc::Semantics::generating: c = pcirc::edge_transform(c, 1); break;
      default: break;
    }
    std::cerr << "compiled to " << semantics_name(c.semantics()) << ", size " << c.size()
              << "\n";
  }
  for (const std::string& text : query_texts) {
    auto q = pcirc::Query::parse(text);
    if (!q || q->states.size() != static_cast<std::size_t>(c.var_count())) {
      std::cerr << "malformed query '" << text << "' (expected " << c.var_count()
                << " symbols over {1,0,?})\n";
      return exit_parse;
    }
    std::cout << text << "\t" << pcirc::marginal(c, *q).str() << "\n";
  }
  return exit_ok;
}

int cmd_check(const CommonOpts& common, const std::string& input_path) {
  pcirc::Circuit c = load(input_path);
  std::cout << "semantics: " << semantics_name(c.semantics()) << "\n";
  std::cout << "vars: " << c.var_count() << "\n";
  std::cout << "size: " << c.size() << "\n";
  std::cout << "divisions: " << (c.has_divisions() ? "yes" : "no") << "\n";

  if (auto w = pcirc::decomposability_witness(c))
    std::cout << "decomposable: no (product n" << w->node << " children share x" << w->variable
              << ")\n";
  else
    std::cout << "decomposable: yes\n";

  if (auto w = pcirc::smoothness_witness(c))
    std::cout << "smooth: no (sum n" << w->node << " children have unequal scopes)\n";
  else
    std::cout << "smooth: yes\n";

  bool consistent = true;
  std::string multilinear = "unknown (expansion too large)";
  if (!c.has_divisions()) {
    try {
      pcirc::SparsePoly p = pcirc::oracle::expand(c, common.max_terms);
      multilinear = p.is_multilinear() ? "yes" : "no";
      if (c.semantics().kind == pcirc::Semantics::categorical_generating) {
        int k = c.semantics().categories;
        bool ok = p.max_exponent() <= k - 1;
        std::cout << "multilinear: " << multilinear << "\n";
        std::cout << "tag-consistent: " << (ok ? "yes" : "no") << " (per-variable degree "
                  << p.max_exponent() << ", k-1 = " << k - 1 << ")\n";
        return ok ? exit_ok : exit_verify;
      }
    } catch (const pcirc::term_blowup_error&) {
    }
  }
  std::cout << "multilinear: " << multilinear << "\n";

  if (c.semantics().distribution_tag() && c.var_count() <= 10 && !c.has_divisions()) {
    try {
      pcirc::DistTable table = pcirc::oracle::extract_table(c);
      auto v = table.validate();
      if (v.proper) {
        std::cout << "tag-consistent: yes (masses nonnegative, total 1)\n";
      } else if (v.negative_witness) {
        consistent = false;
        std::cout << "tag-consistent: no (negative mass at assignment mask "
                  << *v.negative_witness << ")\n";
      } else {
        consistent = false;
        std::cout << "tag-consistent: no (mass total " << v.total.str() << ")\n";
      }
    } catch (const pcirc::semantics_mismatch& e) {
      consistent = false;
      std::cout << "tag-consistent: no (" << e.what() << ")\n";
    }
  } else {
    std::cout << "tag-consistent: n/a\n";
  }
  return consistent ? exit_ok : exit_verify;
}

pcirc::IntMatrix read_matrix(std::istream& in) {
  std::vector<std::vector<uint8_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<uint8_t> row;
    int v;
    while (ls >> v) {
      if (v != 0 && v != 1) throw pcirc::error("matrix entries must be 0 or 1");
      row.push_back(static_cast<uint8_t>(v));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw pcirc::error("empty matrix");
  pcirc::IntMatrix m = pcirc::IntMatrix::zero(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw pcirc::error("matrix is not square");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

void print_matrix(const pcirc::IntMatrix& m) {
  for (int i = 0; i < m.order; ++i) {
    for (int j = 0; j < m.order; ++j) std::cout << (j ? " " : "") << int(m.at(i, j));
    std::cout << "\n";
  }
}

int cmd_permdemo(const CommonOpts& common, const std::string& input_path,
                 const std::string& out_path) {
  pcirc::IntMatrix m = [&] {
    if (input_path == "-") return read_matrix(std::cin);
    std::ifstream in(input_path);
    if (!in) throw pcirc::error("cannot open " + input_path);
    return read_matrix(in);
  }();
  if (m.order > 8) throw pcirc::error("demo caps the input order at 8");

  pcirc::Integer per = pcirc::oracle::permanent(m);
  std::cout << "permanent: " << per.get_str() << "\n";

  auto [sparse, trace] = pcirc::sparsify(m);
  std::cout << "sparsified order: " << sparse.order << " (" << trace.size() << " steps)\n";
  for (const auto& step : trace)
    std::cout << "  moved rows " << step.row_a + 1 << "," << step.row_b + 1 << " of column "
              << step.column + 1 << " -> order " << step.new_order << "\n";
  print_matrix(sparse);
  if (!(pcirc::replay_trace(m, trace) == sparse)) {
    std::cerr << "trace replay FAILED\n";
    return exit_verify;
  }

  pcirc::Circuit circuit = pcirc::valiant_circuit(sparse);
  if (!out_path.empty()) {
    pcirc::write_pcirc_file(out_path, circuit);
    std::cout << "circuit: " << out_path << " (size " << circuit.size() << ")\n";
  } else {
    std::cout << "circuit size: " << circuit.size() << "\n";
  }

  try {
    pcirc::Rational coef = pcirc::coefficient_of_all_ones(circuit, common.max_terms);
    if (!(coef == pcirc::Rational(per))) {
      std::cerr << "verification FAILED: coefficient " << coef.str() << " != permanent\n";
      return exit_verify;
    }
    std::cout << "verified: coefficient of x1..x" << sparse.order << " equals the permanent\n";
  } catch (const pcirc::term_blowup_error&) {
    std::cout << "coefficient check skipped (expansion above --max-terms)\n";
  }
  return exit_ok;
}

int cmd_oracle_expand(const CommonOpts& common, const std::string& input_path) {
  pcirc::Circuit c = load(input_path);
  std::cout << pcirc::oracle::expand(c, common.max_terms).str();
  return exit_ok;
}

int cmd_oracle_compare(const CommonOpts& common, const std::string& a_path,
                       const std::string& b_path, const std::string& mode, int trials) {
  pcirc::Circuit a = load(a_path);
  pcirc::Circuit b = load(b_path);
  pcirc::oracle::IdentityResult r;
  if (mode == "exact") {
    r = pcirc::oracle::identical(a, b, pcirc::oracle::ExactMode{common.max_terms});
    if (!r.equal && r.differing_monomial)
      std::cout << "witness monomial: " << r.differing_monomial->str() << "\n";
  } else {
    r = pcirc::oracle::identical(a, b,
                                 pcirc::oracle::ProbabilisticMode{trials, common.seed,
                                                                  pcirc::identity_prime});
    if (!r.equal && r.counterexample) {
      std::cout << "witness point (mod 2^61-1):";
      for (uint64_t v : r.counterexample->plain) std::cout << " " << v;
      for (uint64_t v : r.counterexample->bar) std::cout << " " << v;
      std::cout << "\n";
    }
  }
  std::cout << (r.equal ? "identical" : "different") << "\n";
  return r.equal ? exit_ok : exit_verify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"arithmetic-circuit encodings of discrete distributions: "
               "transformations, inference, structural checks"};
  app.require_subcommand(1);
  app.fallthrough();
  CommonOpts common;
  app.add_option("--seed", common.seed, "seed for randomized checks");
  app.add_option("--max-terms", common.max_terms, "term cap for brute-force expansion");

  auto* transform = app.add_subcommand("transform", "rewrite a circuit into another semantics");
  std::string t_input, t_to, t_route, t_force, t_out, t_objective = "size";
  bool t_verify = false, t_keep = false;
  transform->add_option("input", t_input, "input .pcirc (or - for stdin)")->required();
  transform->add_option("--to", t_to, "target semantics")->required();
  transform->add_option("--route", t_route, "comma-separated edge numbers, e.g. 1,3");
  transform->add_option("--objective", t_objective, "route objective: size|edges")
      ->check(CLI::IsMember({"size", "edges"}));
  transform->add_flag("--verify", t_verify, "oracle check that the distribution is preserved");
  transform->add_flag("--keep-intermediate", t_keep,
                      "dump gadget and split circuits of division-elimination edges");
  transform->add_option("--force", t_force, "treat a raw input as this semantics");
  transform->add_option("-o,--output", t_out, "output path (default stdout)");

  auto* query = app.add_subcommand("query", "marginal probabilities");
  std::string q_input;
  std::vector<std::string> q_queries;
  bool q_compile = false;
  query->add_option("input", q_input, "input .pcirc")->required();
  query->add_option("queries", q_queries, "queries like \"1 ? 0\"")->required();
  query->add_flag("--compile", q_compile, "pre-transform once for batch queries");

  auto* check = app.add_subcommand("check", "structural and semantic audit");
  std::string c_input;
  check->add_option("input", c_input, "input .pcirc")->required();

  auto* permdemo = app.add_subcommand("permdemo", "permanent reduction demo");
  std::string p_input, p_out;
  permdemo->add_option("matrix", p_input, "0/1 matrix file (or - for stdin)")->required();
  permdemo->add_option("-o,--output", p_out, "write the generating circuit here");

  auto* orc = app.add_subcommand("oracle", "brute-force polynomial tools");
  orc->require_subcommand(1);
  auto* orc_expand = orc->add_subcommand("expand", "canonical sparse expansion");
  std::string oe_input;
  orc_expand->add_option("input", oe_input, "input .pcirc")->required();
  auto* orc_compare = orc->add_subcommand("compare", "polynomial identity test");
  std::string oc_a, oc_b, oc_mode = "exact";
  int oc_trials = 8;
  orc_compare->add_option("a", oc_a, "first .pcirc")->required();
  orc_compare->add_option("b", oc_b, "second .pcirc")->required();
  orc_compare->add_option("--mode", oc_mode, "exact|prob")
      ->check(CLI::IsMember({"exact", "prob"}));
  orc_compare->add_option("--trials", oc_trials, "probabilistic trials");

  // let --seed / --max-terms appear after a subcommand too
  for (CLI::App* sub : {transform, query, check, permdemo, orc, orc_expand, orc_compare})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*transform)
      return cmd_transform(common, t_input, t_to, t_route, t_verify, t_keep, t_force,
                           t_objective, t_out);
    if (*query) return cmd_query(q_input, q_queries, q_compile);
    if (*check) return cmd_check(common, c_input);
    if (*permdemo) return cmd_permdemo(common, p_input, p_out);
    if (*orc_expand) return cmd_oracle_expand(common, oe_input);
    if (*orc_compare) return cmd_oracle_compare(common, oc_a, oc_b, oc_mode, oc_trials);
  } catch (const pcirc::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const pcirc::not_a_distribution& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_verify;
  } catch (const pcirc::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_semantics;
  }
  return exit_ok;
}
