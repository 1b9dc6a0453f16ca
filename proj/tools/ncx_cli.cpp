#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ncx/errors.hpp"
#include "ncx/harness.hpp"

namespace {

std::vector<long> parse_kset(const std::string& arg) {
  std::vector<long> out;
  if (arg.empty()) return out;
  std::stringstream ss(arg);
  std::string token;
  while (std::getline(ss, token, ',')) {
    size_t used = 0;
    const long value = std::stol(token, &used);
    if (used != token.size()) throw std::invalid_argument("trailing characters in kset entry");
    out.push_back(value);
  }
  return out;
}

void write_payload(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ncx::error("cannot open output file: " + path);
  f << payload;
  if (!f) throw ncx::error("failed writing output file: " + path);
}

void print_summary(std::ostream& os, const ncx::ExperimentSummary& summary) {
  os << "rows=" << summary.rows << " failed=" << summary.failed
     << " all_invariants=" << (summary.all_invariants_hold ? "true" : "false") << "\n";
  for (const auto& [kind, ratio] : summary.max_ratio_construction) {
    os << kind << ": max_ratio_construction=" << ratio
       << " max_ratio_solver=" << summary.max_ratio_solver.at(kind) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ncx: splitting-norm verification for Khintchine and Paley inequalities"};
  app.require_subcommand(1);
  const std::string kinds_help = "khintchine|paley1|paley2|steinhaus";

  std::string v_kind;
  int v_dim = 2;
  int v_terms = 3;
  int v_count = 10;
  unsigned long v_seed = 0;
  std::string v_kset, v_out, v_format = "json";
  CLI::App* verify = app.add_subcommand(
      "verify", "Generate instances, run the matching construction and the solver, report rows");
  verify->add_option("kind", v_kind, kinds_help)
      ->required()
      ->check(CLI::IsMember({"khintchine", "paley1", "paley2", "steinhaus"}));
  verify->add_option("--dim", v_dim, "matrix dimension d");
  verify->add_option("--terms", v_terms, "coefficient count (khintchine) or |K|");
  verify->add_option("--kset", v_kset, "explicit lacunary set, comma separated (overrides --terms)");
  verify->add_option("--count", v_count, "number of instances");
  verify->add_option("--seed", v_seed, "base seed; instance i uses seed + i")->envname("NCX_SEED");
  verify->add_option("--out", v_out, "write rows to this file instead of stdout");
  verify->add_option("--format", v_format, "output format")
      ->check(CLI::IsMember({"json", "csv"}));
  verify->footer(std::string("CSV column order: ") + ncx::kCsvHeader);

  CLI::App* norm = app.add_subcommand("norm", "Sequence-norm operations");
  norm->require_subcommand(1);
  std::string solve_file;
  CLI::App* solve = norm->add_subcommand("solve", "Splitting norm of an OpSequence JSON file");
  solve->add_option("file", solve_file, "OpSequence JSON path")->required();

  std::string g_file, g_kind = "khintchine";
  int g_dim = 2;
  int g_terms = 3;
  unsigned long g_seed = 0;
  std::string g_kset;
  CLI::App* gen = app.add_subcommand("gen", "Emit one generated instance as JSON");
  gen->add_option("file", g_file, "output path, '-' for stdout")->required();
  gen->add_option("--kind", g_kind, kinds_help)
      ->check(CLI::IsMember({"khintchine", "paley1", "paley2", "steinhaus"}));
  gen->add_option("--dim", g_dim, "matrix dimension d");
  gen->add_option("--terms", g_terms, "coefficient count (khintchine) or |K|");
  gen->add_option("--kset", g_kset, "explicit lacunary set, comma separated");
  gen->add_option("--seed", g_seed, "seed")->envname("NCX_SEED");

  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::endl;
    return 64;
  }

  try {
    if (*verify) {
      ncx::InstanceSpec base;
      base.kind = ncx::kind_from_name(v_kind);
      base.dim = v_dim;
      base.terms = v_terms;
      try {
        base.kset = parse_kset(v_kset);
      } catch (const std::exception&) {
        std::cerr << "invalid --kset value\n\n" << app.help() << std::endl;
        return 64;
      }
      if (!base.kset.empty()) base.terms = static_cast<int>(base.kset.size());
      if (v_count < 1) {
        std::cerr << "--count must be positive\n\n" << app.help() << std::endl;
        return 64;
      }
      std::vector<ncx::InstanceSpec> specs;
      for (int i = 0; i < v_count; ++i) {
        ncx::InstanceSpec spec = base;
        spec.seed = v_seed + static_cast<unsigned long>(i);
        specs.push_back(spec);
      }
      const std::vector<ncx::ReportRow> rows = ncx::run_experiment(specs);
      const ncx::ExperimentSummary summary = ncx::summarize(rows);
      const std::string payload = v_format == "csv"
                                      ? ncx::rows_to_csv(rows)
                                      : ncx::rows_to_json(rows).dump(2) + "\n";
      write_payload(v_out, payload);
      print_summary(v_out.empty() ? std::cerr : std::cout, summary);
      if (summary.any_hypothesis_error) return 2;
      return summary.all_invariants_hold ? 0 : 1;
    }
    if (*solve) {
      std::ifstream f(solve_file);
      if (!f) throw ncx::error("cannot open input file: " + solve_file);
      const nlohmann::json doc = nlohmann::json::parse(f);
      const ncx::OpSequence c = ncx::sequence_from_json(doc);
      const ncx::SplitCertificate cert = ncx::triple_norm_solve(c);
      nlohmann::ordered_json out;
      out["value"] = cert.value;
      out["dual_lower"] = cert.dual_lower;
      out["duality_gap"] = cert.value - cert.dual_lower;
      out["iterations"] = cert.iterations;
      out["converged"] = cert.converged;
      out["column_norm"] = ncx::column_norm(c);
      out["row_norm"] = ncx::row_norm(c);
      out["a"] = ncx::sequence_to_json(cert.a);
      out["b"] = ncx::sequence_to_json(cert.b);
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (*gen) {
      ncx::InstanceSpec spec;
      spec.kind = ncx::kind_from_name(g_kind);
      spec.dim = g_dim;
      spec.terms = g_terms;
      spec.seed = g_seed;
      try {
        spec.kset = parse_kset(g_kset);
      } catch (const std::exception&) {
        std::cerr << "invalid --kset value\n\n" << app.help() << std::endl;
        return 64;
      }
      if (!spec.kset.empty()) spec.terms = static_cast<int>(spec.kset.size());
      const ncx::Instance inst = ncx::gen_instance(spec);
      write_payload(g_file, ncx::instance_to_json(inst).dump(2) + "\n");
      return 0;
    }
    if (*selftest_cmd) {
      return ncx::selftest(std::cout) == 0 ? 0 : 1;
    }
  } catch (const ncx::hypothesis_error& e) {
    std::cerr << "hypothesis error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
