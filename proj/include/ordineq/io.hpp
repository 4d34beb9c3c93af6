#pragma once
// File formats: counts and microdata tables (comma-separated, UTF-8) and the
// JSON run configuration. All loaders throw ValidationError subtypes that
// carry the path and a 1-based line number where one applies.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ordineq/comparison.hpp"
#include "ordineq/errors.hpp"
#include "ordineq/sampling.hpp"

namespace ordineq {

struct LoadedCounts {
  CountData data;
  // Per-category display labels from the optional third column, in category
  // order; empty when the file has none.
  std::vector<std::string> category_labels;
};

// Header `category,count` or `category,count,label`; categories must cover
// 1..K exactly once each (any order in the file).
LoadedCounts load_counts(const std::string& path);

// Two-column form only; load_counts on the result reproduces `data`.
void save_counts(const CountData& data, const std::string& path);

// Header `unit_id,category,weight[,group]`. The group column, when present,
// splits records into named datasets; without it the whole file is one
// dataset under the empty key. K is the largest category seen anywhere in
// the file and is shared by every returned dataset.
std::map<std::string, WeightedMicrodata> load_microdata(const std::string& path);

enum class SourceKind { Counts, Microdata };

struct GroupSpec {
  std::string name;
  SourceKind kind = SourceKind::Counts;
  std::string path;
  std::string label;  // display label; falls back to name
  std::string group;  // microdata only: group-column value to select
};

struct ComparisonSpec {
  std::string x;
  std::string y;
  std::vector<Criterion> criteria;  // nonempty after config validation
};

struct AnalysisConfig {
  std::vector<GroupSpec> groups;
  long draws = 10000;
  std::uint64_t seed = 0;
  std::vector<double> alphas = {0.1, 0.9};
  double gld_grid_step = 0.01;
  std::vector<ComparisonSpec> comparisons;
};

// Strict JSON: unknown keys anywhere are rejected. Relative data paths are
// resolved against the config file's directory.
AnalysisConfig load_config(const std::string& path);

// Structural checks (unique names, referenced names exist, value ranges).
// load_config calls this; callers that build a config in code may too.
void validate(const AnalysisConfig& config);

}  // namespace ordineq
