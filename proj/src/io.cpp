#include "ordineq/io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ordineq {

namespace {

using json = nlohmann::json;

std::string trim(std::string s) {
  const auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_space(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_long(const std::string& s, long& value) {
  if (s.empty()) return false;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

bool parse_double(const std::string& s, double& value) {
  if (s.empty()) return false;
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

// Reads one logical line, trimming the trailing CR of CRLF files.
bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

}  // namespace

LoadedCounts load_counts(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  long line_no = 0;

  if (!next_line(in, line)) throw ParseError(path, 1, "missing header");
  ++line_no;
  auto header = split_fields(line);
  bool has_labels = false;
  if (header.size() == 3 && header[2] == "label") {
    has_labels = true;
  } else if (header.size() != 2) {
    throw ParseError(path, line_no, "expected header category,count[,label]");
  }
  if (header[0] != "category" || header[1] != "count")
    throw ParseError(path, line_no, "expected header category,count[,label]");

  struct Row {
    long count;
    std::string label;
    long line;
  };
  std::map<long, Row> rows;
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw ParseError(path, line_no, "wrong number of fields");
    long category = 0, count = 0;
    if (!parse_long(fields[0], category))
      throw ParseError(path, line_no, "category is not an integer: " + fields[0]);
    if (!parse_long(fields[1], count))
      throw ParseError(path, line_no, "count is not an integer: " + fields[1]);
    if (count < 0) throw ParseError(path, line_no, "negative count");
    if (category < 1) throw ParseError(path, line_no, "category must be >= 1");
    auto [it, inserted] = rows.emplace(category, Row{count, has_labels ? fields[2] : "", line_no});
    if (!inserted)
      throw ParseError(path, line_no, "duplicate category " + fields[0] + " (first at line " +
                                          std::to_string(it->second.line) + ")");
  }

  if (rows.size() < 2) throw ParseError(path, line_no, "need at least two categories");
  long expected = 1;
  for (const auto& [category, row] : rows) {
    if (category != expected)
      throw ParseError(path, row.line,
                       "categories must be contiguous 1..K; missing " + std::to_string(expected));
    ++expected;
  }

  CountVec counts(static_cast<Eigen::Index>(rows.size()));
  std::vector<std::string> labels;
  Eigen::Index k = 0;
  for (const auto& [category, row] : rows) {
    counts(k++) = row.count;
    if (has_labels) labels.push_back(row.label);
  }
  return {CountData(counts), std::move(labels)};
}

void save_counts(const CountData& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "category,count\n";
  for (Eigen::Index k = 0; k < data.categories(); ++k)
    out << (k + 1) << ',' << data.counts()(k) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

std::map<std::string, WeightedMicrodata> load_microdata(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  long line_no = 0;

  if (!next_line(in, line)) throw ParseError(path, 1, "missing header");
  ++line_no;
  auto header = split_fields(line);
  bool has_group = false;
  if (header.size() == 4 && header[3] == "group") {
    has_group = true;
  } else if (header.size() != 3) {
    throw ParseError(path, line_no, "expected header unit_id,category,weight[,group]");
  }
  if (header[0] != "unit_id" || header[1] != "category" || header[2] != "weight")
    throw ParseError(path, line_no, "expected header unit_id,category,weight[,group]");

  std::map<std::string, std::vector<MicroRecord>> groups;
  long max_category = 0;
  while (next_line(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw ParseError(path, line_no, "wrong number of fields");
    if (fields[0].empty()) throw ParseError(path, line_no, "empty unit_id");
    long category = 0;
    double weight = 0.0;
    if (!parse_long(fields[1], category))
      throw ParseError(path, line_no, "category is not an integer: " + fields[1]);
    if (category < 1) throw ParseError(path, line_no, "category must be >= 1");
    if (!parse_double(fields[2], weight) || !std::isfinite(weight))
      throw ParseError(path, line_no, "weight is not a finite number: " + fields[2]);
    if (weight <= 0.0) throw ParseError(path, line_no, "weight must be positive");
    max_category = std::max(max_category, category);
    groups[has_group ? fields[3] : std::string()].push_back(
        {static_cast<int>(category), weight});
  }

  if (groups.empty()) throw ParseError(path, line_no, "no data rows");
  if (max_category < 2) throw ParseError(path, line_no, "need at least two categories");

  std::map<std::string, WeightedMicrodata> out;
  for (auto& [name, records] : groups)
    out.emplace(name, WeightedMicrodata(std::move(records), static_cast<int>(max_category)));
  return out;
}

namespace {

// Rejects unknown keys and reports missing required ones; `where` names the
// enclosing object in messages.
void check_keys(const json& obj, const std::string& where,
                const std::vector<std::string>& required,
                const std::vector<std::string>& optional) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    const bool known = std::find(required.begin(), required.end(), key) != required.end() ||
                       std::find(optional.begin(), optional.end(), key) != optional.end();
    if (!known) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
  for (const auto& key : required)
    if (!obj.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
}

std::string get_string(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.at(key).is_string()) throw ConfigError(where + ": \"" + key + "\" must be a string");
  return obj.at(key).get<std::string>();
}

Criterion parse_criterion(const std::string& name, const std::string& where) {
  if (name == "FSD") return Criterion::FSD;
  if (name == "restricted-FSD") return Criterion::RestrictedFSD;
  if (name == "GLD") return Criterion::GLD;
  throw ConfigError(where + ": unknown criterion \"" + name +
                    "\" (expected FSD, restricted-FSD, or GLD)");
}

}  // namespace

AnalysisConfig load_config(const std::string& path) {
  auto in = open_input(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }

  const auto base_dir = std::filesystem::path(path).parent_path();
  const auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base_dir / fp).string();
  };

  AnalysisConfig config;
  check_keys(doc, path, {"groups"},
             {"draws", "seed", "alphas", "gld_grid_step", "comparisons"});

  const auto& groups = doc.at("groups");
  if (!groups.is_array()) throw ConfigError(path + ": \"groups\" must be an array");
  for (const auto& g : groups) {
    const std::string where = path + ": groups[" + std::to_string(config.groups.size()) + "]";
    check_keys(g, where, {"name", "kind", "path"}, {"label", "group"});
    GroupSpec spec;
    spec.name = get_string(g, where, "name");
    const auto kind = get_string(g, where, "kind");
    if (kind == "counts")
      spec.kind = SourceKind::Counts;
    else if (kind == "microdata")
      spec.kind = SourceKind::Microdata;
    else
      throw ConfigError(where + ": kind must be \"counts\" or \"microdata\"");
    spec.path = resolve(get_string(g, where, "path"));
    spec.label = g.contains("label") ? get_string(g, where, "label") : spec.name;
    if (g.contains("group")) {
      if (spec.kind != SourceKind::Microdata)
        throw ConfigError(where + ": \"group\" only applies to microdata sources");
      spec.group = get_string(g, where, "group");
    }
    config.groups.push_back(std::move(spec));
  }

  if (doc.contains("draws")) {
    if (!doc.at("draws").is_number_integer())
      throw ConfigError(path + ": \"draws\" must be an integer");
    config.draws = doc.at("draws").get<long>();
  }
  if (doc.contains("seed")) {
    const auto& s = doc.at("seed");
    if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() &&
                                   s.get<long long>() < 0))
      throw ConfigError(path + ": \"seed\" must be a nonnegative integer");
    config.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("alphas")) {
    const auto& alphas = doc.at("alphas");
    if (!alphas.is_array()) throw ConfigError(path + ": \"alphas\" must be an array");
    config.alphas.clear();
    for (const auto& a : alphas) {
      if (!a.is_number()) throw ConfigError(path + ": \"alphas\" entries must be numbers");
      config.alphas.push_back(a.get<double>());
    }
  }
  if (doc.contains("gld_grid_step")) {
    if (!doc.at("gld_grid_step").is_number())
      throw ConfigError(path + ": \"gld_grid_step\" must be a number");
    config.gld_grid_step = doc.at("gld_grid_step").get<double>();
  }
  if (doc.contains("comparisons")) {
    const auto& comparisons = doc.at("comparisons");
    if (!comparisons.is_array()) throw ConfigError(path + ": \"comparisons\" must be an array");
    for (const auto& c : comparisons) {
      const std::string where =
          path + ": comparisons[" + std::to_string(config.comparisons.size()) + "]";
      check_keys(c, where, {"x", "y"}, {"criteria"});
      ComparisonSpec spec;
      spec.x = get_string(c, where, "x");
      spec.y = get_string(c, where, "y");
      if (c.contains("criteria")) {
        const auto& criteria = c.at("criteria");
        if (!criteria.is_array() || criteria.empty())
          throw ConfigError(where + ": \"criteria\" must be a nonempty array");
        for (const auto& name : criteria) {
          if (!name.is_string()) throw ConfigError(where + ": criteria must be strings");
          const auto criterion = parse_criterion(name.get<std::string>(), where);
          if (std::find(spec.criteria.begin(), spec.criteria.end(), criterion) !=
              spec.criteria.end())
            throw ConfigError(where + ": duplicate criterion \"" + name.get<std::string>() + "\"");
          spec.criteria.push_back(criterion);
        }
      } else {
        spec.criteria = {Criterion::FSD, Criterion::RestrictedFSD, Criterion::GLD};
      }
      config.comparisons.push_back(std::move(spec));
    }
  }

  validate(config);
  return config;
}

void validate(const AnalysisConfig& config) {
  if (config.groups.empty()) throw ConfigError("config: needs at least one group");
  std::set<std::string> names;
  for (const auto& g : config.groups) {
    if (g.name.empty()) throw ConfigError("config: group names must be nonempty");
    if (!names.insert(g.name).second)
      throw ConfigError("config: duplicate group name \"" + g.name + "\"");
  }
  if (config.draws < 1) throw ConfigError("config: draws must be >= 1");
  for (double alpha : config.alphas)
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw ConfigError("config: alphas must lie in [0, 1)");
  if (!(config.gld_grid_step > 0.0 && config.gld_grid_step <= 0.5))
    throw ConfigError("config: gld_grid_step must lie in (0, 0.5]");
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& c : config.comparisons) {
    for (const auto& name : {c.x, c.y})
      if (names.find(name) == names.end())
        throw ConfigError("config: comparison references unknown group \"" + name + "\"");
    if (c.x == c.y)
      throw ConfigError("config: comparison of group \"" + c.x + "\" with itself");
    if (c.criteria.empty()) throw ConfigError("config: comparison has no criteria");
    if (!seen.insert({c.x, c.y}).second)
      throw ConfigError("config: duplicate comparison " + c.x + " vs " + c.y);
  }
}

}  // namespace ordineq
