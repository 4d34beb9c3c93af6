#pragma once
// The end-to-end pipeline: sample every configured group, compute whatever
// sections the caller asked for, and serialize the results as a JSON report,
// plain-text tables, and per-curve plot-data files.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ordineq/comparison.hpp"
#include "ordineq/io.hpp"

namespace ordineq {

// Report sections, one bit per CLI verb. Estimates are always computed; the
// other sections are skipped when their bit is clear.
enum Section : unsigned {
  kEstimates = 1u << 0,
  kIndices = 1u << 1,
  kDominance = 1u << 2,
  kCurves = 1u << 3,
  kDensities = 1u << 4,
  kAllSections = (1u << 5) - 1,
};

struct IndexSummary {
  IndexId id;
  SummaryStats stats;
};

struct IndexDensity {
  IndexId id;
  DensityEstimate density;
};

struct GroupResult {
  std::string name;
  std::string label;
  std::vector<std::string> category_labels;  // empty unless the source had them
  long observations = 0;                     // count total, or record count
  Mat draws;                                 // M x K posterior draw matrix
  Vec mean_probs;                            // column means of draws
  std::vector<SummaryStats> proportions;     // one per category
  std::vector<IndexSummary> indices;         // H, J, then CF(alpha) per alpha
  std::vector<IndexDensity> densities;       // same order as indices
};

struct ComparisonResult {
  std::string x;
  std::string y;
  std::vector<DominanceReport> reports;   // one per configured criterion
  std::vector<ProbabilityCurve> curves;   // FSD and GLD only, both directions
};

struct AnalysisReport {
  long draws = 0;
  std::uint64_t seed = 0;
  unsigned sections = kAllSections;
  double gld_grid_step = 0.01;
  std::vector<GroupResult> groups;
  std::vector<ComparisonResult> comparisons;
  std::vector<std::string> artifacts;  // paths relative to the output dir
};

// Deterministic given (config, sections): group streams are derived from the
// config seed and the group name, never from processing order. Errors from
// loading or sampling are rethrown with the group or comparison attached.
AnalysisReport run_analysis(const AnalysisConfig& config, unsigned sections = kAllSections);

// Writes plots/*.csv under `dir` (GL curves `u,value`, probability curves
// `axis,prob`, densities `grid,density`), plus one SVG line chart per figure
// when `render` is set. Returns the written paths relative to `dir`.
std::vector<std::string> emit_plot_data(const AnalysisReport& report, const std::string& dir,
                                        bool render = false);

// Writes draws_<group>.csv under `dir`, one posterior draw per row. Returns
// the written paths relative to `dir`.
std::vector<std::string> emit_draws(const AnalysisReport& report, const std::string& dir);

// Machine-readable report. The generation timestamp is confined to the
// single generated_at field; everything else is deterministic.
void write_report_json(const AnalysisReport& report, const std::string& path);

// Aligned text tables for the sections present in the report.
void write_tables(const AnalysisReport& report, std::ostream& out);

}  // namespace ordineq
