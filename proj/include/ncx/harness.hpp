#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "ncx/construct.hpp"

namespace ncx {

enum class InstanceKind { khintchine, paley1, paley2, steinhaus };

const char* kind_name(InstanceKind kind);
InstanceKind kind_from_name(const std::string& name);  // throws domain_error

// Limits: d <= 16, 2^N * d^2 <= 2^16, M * d^2 <= 2^18. Grid sizes derived
// from a generated lacunary set are checked in gen_instance.
struct InstanceSpec {
  InstanceKind kind = InstanceKind::khintchine;
  int dim = 1;
  int terms = 1;               // khintchine coefficient count, else |K| when kset is empty
  std::vector<long> kset;      // explicit lacunary set; empty means generate from seed
  unsigned long seed = 0;
  int resolution_override = 0;  // 0 selects terms + 2
  int gridsize_override = 0;    // 0 selects 4 * (k_max + spectrum_bound + 1)
  long k0 = 1;

  void validate() const;
};

struct Instance {
  InstanceSpec spec;
  DyadicFn dyadic;  // khintchine
  TrigFn trig;      // paley / steinhaus
  LacunarySet kset;
  long tail_depth = 0;  // paley1
};

struct ReportRow {
  std::string id;
  std::string kind;
  int dim = 0;
  int terms = 0;
  unsigned long seed = 0;
  std::string status;  // ok | hypothesis_error | error
  double l1_norm = 0.0;
  double construction_value = 0.0;
  double solver_value = 0.0;
  double dual_lower = 0.0;
  double ratio_construction = 0.0;
  double ratio_solver = 0.0;
  double reconstruction_residual = 0.0;
  double duality_gap = 0.0;
  std::string error;

  bool ok() const { return status == "ok"; }
  // dual_lower <= solver_value <= construction_value + 1e-6 and
  // ratio_construction <= 2 * (1 + 1e-6).
  bool invariants_hold() const;
};

struct ExperimentSummary {
  std::map<std::string, double> max_ratio_construction;
  std::map<std::string, double> max_ratio_solver;
  long rows = 0;
  long failed = 0;
  bool all_invariants_hold = true;
  bool any_hypothesis_error = false;
};

// k_{j+1} = 2 k_j + 1 + jitter with jitter in [0, k_j]; seed 0 means no jitter.
LacunarySet gen_lacunary(unsigned long seed, int j_max, long k0);

Instance gen_instance(const InstanceSpec& spec);

ReportRow run_one(const InstanceSpec& spec, const SolveOptions& opts = {});
std::vector<ReportRow> run_experiment(const std::vector<InstanceSpec>& specs,
                                      const SolveOptions& opts = {});
ExperimentSummary summarize(const std::vector<ReportRow>& rows);

extern const char* const kCsvHeader;
nlohmann::ordered_json row_to_json(const ReportRow& r);
nlohmann::ordered_json rows_to_json(const std::vector<ReportRow>& rows);
std::string rows_to_csv(const std::vector<ReportRow>& rows);

nlohmann::ordered_json spec_to_json(const InstanceSpec& spec);
InstanceSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json instance_to_json(const Instance& inst);

// Runs the invariant suites on fixed seeds; prints one line per suite.
// Returns the number of failing suites.
int selftest(std::ostream& out);

}  // namespace ncx
