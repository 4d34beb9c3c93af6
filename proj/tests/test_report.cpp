#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "ordineq/report.hpp"

using namespace ordineq;
using testutil::TempDir;

namespace {

GroupSpec counts_group(const std::string& name, const std::string& path,
                       const std::string& label = "") {
  GroupSpec g;
  g.name = name;
  g.kind = SourceKind::Counts;
  g.path = path;
  g.label = label.empty() ? name : label;
  return g;
}

std::string data_file(const char* name) {
  return std::string(ORDINEQ_DATA_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Parses a two-column plot CSV, skipping the header.
std::pair<std::vector<double>, std::vector<double>> read_xy(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string line;
  REQUIRE(std::getline(in, line));
  std::pair<std::vector<double>, std::vector<double>> xy;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    xy.first.push_back(std::stod(line.substr(0, comma)));
    xy.second.push_back(std::stod(line.substr(comma + 1)));
  }
  return xy;
}

bool contains(const std::vector<std::string>& haystack, const std::string& needle) {
  for (const auto& s : haystack)
    if (s == needle) return true;
  return false;
}

// Two groups with mirrored counts and a single FSD comparison.
AnalysisConfig toy_config(const TempDir& tmp, long draws, std::uint64_t seed) {
  AnalysisConfig cfg;
  cfg.groups.push_back(
      counts_group("a", tmp.write("a.csv", "category,count\n1,3\n2,1\n").string(), "First"));
  cfg.groups.push_back(
      counts_group("b", tmp.write("b.csv", "category,count\n1,1\n2,3\n").string(), "Second"));
  cfg.draws = draws;
  cfg.seed = seed;
  cfg.alphas = {0.1};
  cfg.comparisons.push_back({"a", "b", {Criterion::FSD}});
  return cfg;
}

}  // namespace

TEST_CASE("a two-group run produces estimates, indices, and dominance") {
  TempDir tmp("report_toy");
  AnalysisConfig cfg = toy_config(tmp, 4000, 11);
  AnalysisReport report = run_analysis(cfg);

  CHECK(report.draws == 4000);
  CHECK(report.seed == 11);
  REQUIRE(report.groups.size() == 2);
  REQUIRE(report.comparisons.size() == 1);

  const GroupResult& a = report.groups[0];
  CHECK(a.name == "a");
  CHECK(a.label == "First");
  CHECK(a.observations == 4);
  CHECK(a.draws.rows() == 4000);
  CHECK(a.draws.cols() == 2);
  // Conjugate posterior is Dirichlet(4, 2); its mean p(1) is 2/3.
  CHECK(a.mean_probs(0) == doctest::Approx(2.0 / 3.0).epsilon(0.03));
  REQUIRE(a.proportions.size() == 2);
  CHECK(a.proportions[0].mean == doctest::Approx(a.mean_probs(0)).epsilon(1e-12));

  // H, J, CF(0.1); H is constant 1 with two categories, so its density is
  // dropped while the others remain.
  REQUIRE(a.indices.size() == 3);
  CHECK(a.indices[0].id.name() == "H");
  CHECK(a.indices[0].stats.mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.indices[1].id.name() == "J");
  CHECK(a.indices[2].id.name() == "CF(0.1)");
  REQUIRE(a.densities.size() == 2);
  CHECK(a.densities[0].id.name() == "J");

  const ComparisonResult& cmp = report.comparisons[0];
  REQUIRE(cmp.reports.size() == 1);
  const DominanceReport& fsd = cmp.reports[0];
  CHECK(fsd.total() == 4000);
  // Pr[Beta(2,4) < Beta(4,2)] by quadrature; b holds the better counts.
  CHECK(fsd.prob_y() == doctest::Approx(0.896825396825397).epsilon(0.035));
  CHECK(fsd.prob_x() + fsd.prob_y() + fsd.prob_none() ==
        doctest::Approx(1.0).epsilon(1e-12));

  // FSD comparison with K = 2 gives one-point curves in both directions.
  REQUIRE(cmp.curves.size() == 2);
  CHECK(cmp.curves[0].axis.size() == 1);
  CHECK(cmp.curves[0].direction == Direction::XOverY);
  CHECK(cmp.curves[1].direction == Direction::YOverX);
}

TEST_CASE("sections gate what gets computed") {
  TempDir tmp("report_sections");
  AnalysisConfig cfg = toy_config(tmp, 200, 3);

  AnalysisReport estimates_only = run_analysis(cfg, kEstimates);
  CHECK(estimates_only.groups[0].indices.empty());
  CHECK(estimates_only.groups[0].densities.empty());
  CHECK(estimates_only.comparisons[0].reports.empty());
  CHECK(estimates_only.comparisons[0].curves.empty());
  CHECK(!estimates_only.groups[0].proportions.empty());

  AnalysisReport indices_only = run_analysis(cfg, kIndices);
  CHECK(!indices_only.groups[0].indices.empty());
  CHECK(indices_only.groups[0].densities.empty());

  AnalysisReport dominance_only = run_analysis(cfg, kDominance);
  CHECK(dominance_only.groups[0].indices.empty());
  CHECK(!dominance_only.comparisons[0].reports.empty());
  CHECK(dominance_only.comparisons[0].curves.empty());
}

TEST_CASE("the education fixture reproduces the published headcount") {
  AnalysisConfig cfg;
  cfg.groups.push_back(counts_group("y2001", data_file("edu7_2001.csv"), "2001"));
  cfg.draws = 3000;
  cfg.seed = 5;
  AnalysisReport report = run_analysis(cfg, kEstimates | kIndices);

  const GroupResult& g = report.groups[0];
  CHECK(g.observations == 10000);
  REQUIRE(g.category_labels.size() == 7);
  CHECK(g.category_labels[1] == "Year 12");
  REQUIRE(!g.indices.empty());
  CHECK(g.indices[0].id.name() == "H");
  // Survey proportions put H at 0.7017; N = 10000 pins the posterior there.
  CHECK(g.indices[0].stats.mean == doctest::Approx(0.7017).epsilon(0.03));
  CHECK(report.comparisons.empty());
}

TEST_CASE("runs are deterministic and streams are keyed by group name") {
  TempDir tmp("report_determinism");
  AnalysisConfig cfg = toy_config(tmp, 300, 21);

  AnalysisReport first = run_analysis(cfg);
  AnalysisReport second = run_analysis(cfg);
  for (std::size_t i = 0; i < first.groups.size(); ++i) {
    CHECK((first.groups[i].draws.array() == second.groups[i].draws.array()).all());
  }
  CHECK(first.comparisons[0].reports[0].count_x == second.comparisons[0].reports[0].count_x);

  AnalysisConfig reseeded = cfg;
  reseeded.seed = 22;
  AnalysisReport shifted = run_analysis(reseeded);
  CHECK(!(first.groups[0].draws.array() == shifted.groups[0].draws.array()).all());

  // Reversing group order must not move any group onto a different stream.
  AnalysisConfig reordered = cfg;
  std::swap(reordered.groups[0], reordered.groups[1]);
  reordered.comparisons[0] = {"b", "a", {Criterion::FSD}};
  AnalysisReport swapped = run_analysis(reordered);
  CHECK(swapped.groups[0].name == "b");
  CHECK((swapped.groups[0].draws.array() == first.groups[1].draws.array()).all());
  CHECK((swapped.groups[1].draws.array() == first.groups[0].draws.array()).all());
}

TEST_CASE("comparison errors name the comparison") {
  TempDir tmp("report_mismatch");
  AnalysisConfig cfg;
  cfg.groups.push_back(
      counts_group("two", tmp.write("two.csv", "category,count\n1,3\n2,1\n").string()));
  cfg.groups.push_back(counts_group(
      "three", tmp.write("three.csv", "category,count\n1,1\n2,1\n3,2\n").string()));
  cfg.draws = 50;
  cfg.comparisons.push_back({"two", "three", {Criterion::FSD}});

  try {
    run_analysis(cfg);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("comparison two vs three") != std::string::npos);
  }
}

TEST_CASE("group errors name the group and keep the parse location") {
  TempDir tmp("report_group_err");
  AnalysisConfig cfg;
  const std::string bad = tmp.write("bad.csv", "category,count\n1,3\n2,-1\n").string();
  cfg.groups.push_back(counts_group("g", bad));
  cfg.draws = 10;

  try {
    run_analysis(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("group \"g\"") != std::string::npos);
    CHECK(what.find(bad + ":3:") != std::string::npos);
  }
}

TEST_CASE("a missing microdata group lists what the file has") {
  AnalysisConfig cfg;
  GroupSpec g;
  g.name = "west";
  g.kind = SourceKind::Microdata;
  g.path = data_file("survey_micro.csv");
  g.label = "west";
  g.group = "west";
  cfg.groups.push_back(g);
  cfg.draws = 10;

  try {
    run_analysis(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("\"west\"") != std::string::npos);
    CHECK(what.find("north") != std::string::npos);
    CHECK(what.find("south") != std::string::npos);
  }
}

TEST_CASE("plot data lands in plots/ with predictable names") {
  TempDir tmp("report_plots");
  TempDir out("report_plots_out");
  AnalysisConfig cfg = toy_config(tmp, 400, 17);
  AnalysisReport report = run_analysis(cfg);

  std::vector<std::string> artifacts = emit_plot_data(report, out.path().string());
  CHECK(contains(artifacts, "plots/gl_a.csv"));
  CHECK(contains(artifacts, "plots/gl_b.csv"));
  CHECK(contains(artifacts, "plots/fsd_a_over_b.csv"));
  CHECK(contains(artifacts, "plots/fsd_b_over_a.csv"));
  CHECK(contains(artifacts, "plots/density_a_j.csv"));
  CHECK(contains(artifacts, "plots/density_a_cf_0.1.csv"));
  for (const auto& rel : artifacts) {
    CAPTURE(rel);
    CHECK(std::filesystem::exists(out.path() / rel));
    CHECK(rel.find(".svg") == std::string::npos);  // no charts unless rendered
  }

  // The GLD criterion was not configured, so no gld curve files appear.
  for (const auto& rel : artifacts) CHECK(rel.rfind("plots/gld_", 0) == std::string::npos);
}

TEST_CASE("rendered charts are standalone svg documents") {
  TempDir tmp("report_svg");
  TempDir out("report_svg_out");
  AnalysisConfig cfg = toy_config(tmp, 120, 9);
  AnalysisReport report = run_analysis(cfg);

  std::vector<std::string> artifacts = emit_plot_data(report, out.path().string(), true);
  CHECK(contains(artifacts, "plots/gl_curves.svg"));
  CHECK(contains(artifacts, "plots/fsd_a_vs_b.svg"));
  CHECK(contains(artifacts, "plots/density_j.svg"));
  for (const auto& rel : artifacts) {
    if (rel.find(".svg") == std::string::npos) continue;
    const std::string body = slurp((out.path() / rel).string());
    CHECK(body.rfind("<svg", 0) == 0);
    CHECK(body.find("</svg>") != std::string::npos);
  }
}

TEST_CASE("a degenerate posterior draws the diagonal lorenz curve") {
  TempDir tmp("report_degenerate");
  TempDir out("report_degenerate_out");
  AnalysisConfig cfg;
  GroupSpec g;
  g.name = "solo";
  g.kind = SourceKind::Microdata;
  g.path = tmp.write("solo.csv", "unit_id,category,weight\nu1,2,1.0\n").string();
  g.label = "solo";
  cfg.groups.push_back(g);
  cfg.draws = 50;

  AnalysisReport report = run_analysis(cfg);
  const GroupResult& solo = report.groups[0];
  CHECK(solo.observations == 1);
  CHECK((solo.draws.col(0).array() == 0.0).all());
  CHECK((solo.draws.col(1).array() == 1.0).all());
  CHECK(solo.densities.empty());  // every index posterior is flat

  emit_plot_data(report, out.path().string());
  auto [u, value] = read_xy((out.path() / "plots" / "gl_solo.csv").string());
  REQUIRE(u.size() >= 2);
  for (std::size_t i = 0; i < u.size(); ++i)
    CHECK(value[i] == doctest::Approx(u[i]).epsilon(1e-12));
}

TEST_CASE("density plot data integrates to one") {
  AnalysisConfig cfg;
  cfg.groups.push_back(counts_group("y2001", data_file("edu7_2001.csv")));
  cfg.draws = 2000;
  cfg.seed = 31;
  AnalysisReport report = run_analysis(cfg, kEstimates | kDensities);

  TempDir out("report_density_out");
  std::vector<std::string> artifacts = emit_plot_data(report, out.path().string());
  CHECK(contains(artifacts, "plots/density_y2001_h.csv"));

  auto [grid, density] = read_xy((out.path() / "plots" / "density_y2001_h.csv").string());
  double mass = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    mass += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  CHECK(std::abs(mass - 1.0) < 0.01);
}

TEST_CASE("well separated education years dominate with near certainty") {
  AnalysisConfig cfg;
  cfg.groups.push_back(counts_group("y2001", data_file("edu7_2001.csv")));
  cfg.groups.push_back(counts_group("y2017", data_file("edu7_2017.csv")));
  cfg.draws = 1000;
  cfg.seed = 13;
  cfg.comparisons.push_back({"y2001", "y2017", {Criterion::GLD}});

  AnalysisReport report = run_analysis(cfg, kDominance);
  const DominanceReport& gld = report.comparisons[0].reports[0];
  // 2001 has the lower education profile, hence the higher GL curve.
  CHECK(gld.prob_x() > 0.95);
}

TEST_CASE("emit_draws writes one row per draw") {
  TempDir tmp("report_draws");
  TempDir out("report_draws_out");
  AnalysisConfig cfg = toy_config(tmp, 25, 2);
  AnalysisReport report = run_analysis(cfg, kEstimates);

  std::vector<std::string> files = emit_draws(report, out.path().string());
  REQUIRE(files.size() == 2);
  CHECK(contains(files, "draws_a.csv"));

  const std::string body = slurp((out.path() / "draws_a.csv").string());
  CHECK(body.rfind("p1,p2\n", 0) == 0);
  long lines = 0;
  for (char c : body)
    if (c == '\n') ++lines;
  CHECK(lines == 26);  // header + 25 draws
}

TEST_CASE("the json report is complete and nearly deterministic") {
  TempDir tmp("report_json");
  TempDir out("report_json_out");
  AnalysisConfig cfg = toy_config(tmp, 500, 19);
  AnalysisReport report = run_analysis(cfg);
  report.artifacts = emit_plot_data(report, out.path().string());

  const std::string path = (out.path() / "report.json").string();
  write_report_json(report, path);
  const std::string body = slurp(path);

  // The timestamp is confined to the single generated_at line.
  std::size_t stamps = 0;
  for (std::size_t pos = body.find("generated_at"); pos != std::string::npos;
       pos = body.find("generated_at", pos + 1))
    ++stamps;
  CHECK(stamps == 1);

  const auto doc = nlohmann::json::parse(body);
  CHECK(doc.at("draws") == 500);
  CHECK(doc.at("seed") == 19);
  REQUIRE(doc.at("groups").size() == 2);
  REQUIRE(doc.at("comparisons").size() == 1);
  CHECK(doc.at("artifacts").size() == report.artifacts.size());

  const auto& g = doc.at("groups").at(0);
  CHECK(g.at("name") == "a");
  CHECK(g.at("label") == "First");
  CHECK(g.at("categories") == 2);
  double mean_sum = 0.0;
  for (const auto& v : g.at("mean")) mean_sum += v.get<double>();
  CHECK(mean_sum == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.at("proportions").size() == 2);
  CHECK(g.at("indices").size() == 3);

  const auto& dom = doc.at("comparisons").at(0).at("dominance").at(0);
  CHECK(dom.at("criterion") == "FSD");
  const double total = dom.at("prob_x").get<double>() + dom.at("prob_y").get<double>() +
                       dom.at("prob_none").get<double>();
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  // Same analysis serialized twice differs only in the timestamp line.
  const std::string path2 = (out.path() / "report2.json").string();
  write_report_json(report, path2);
  auto strip = [](const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
      if (line.find("generated_at") == std::string::npos) kept += line + '\n';
    return kept;
  };
  CHECK(strip(body) == strip(slurp(path2)));
}

TEST_CASE("text tables cover every requested section") {
  TempDir tmp("report_tables");
  AnalysisConfig cfg = toy_config(tmp, 300, 23);
  AnalysisReport report = run_analysis(cfg);

  std::ostringstream out;
  write_tables(report, out);
  const std::string text = out.str();
  CHECK(text.find("draws=300 seed=23") != std::string::npos);
  CHECK(text.find("Posterior category proportions") != std::string::npos);
  CHECK(text.find("First") != std::string::npos);
  CHECK(text.find("Second") != std::string::npos);
  CHECK(text.find("CF(0.1)") != std::string::npos);
  CHECK(text.find("Pr(no dominance)") != std::string::npos);
  CHECK(text.find("X = a, Y = b") != std::string::npos);
}

TEST_CASE("category labels from the counts file reach the tables") {
  AnalysisConfig cfg;
  cfg.groups.push_back(counts_group("y2001", data_file("edu7_2001.csv"), "2001"));
  cfg.draws = 60;
  AnalysisReport report = run_analysis(cfg, kEstimates);

  std::ostringstream out;
  write_tables(report, out);
  CHECK(out.str().find("Year 12") != std::string::npos);
}

TEST_CASE("unwritable output locations raise io errors") {
  TempDir tmp("report_badout");
  TempDir out("report_badout_out");
  AnalysisConfig cfg = toy_config(tmp, 40, 2);
  AnalysisReport report = run_analysis(cfg, kEstimates);

  const std::string blocker = out.write("blocker", "not a directory").string();
  CHECK_THROWS_AS(emit_plot_data(report, blocker + "/sub"), IoError);
  CHECK_THROWS_AS(write_report_json(report, blocker + "/sub/report.json"), IoError);
}
