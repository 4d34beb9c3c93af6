#include "ordineq/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <nlohmann/json.hpp>

namespace ordineq {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Filesystem-safe tag: lowercased, with anything outside [a-z0-9.-]
// collapsed to single underscores.
std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalnum(u) || c == '.' || c == '-')
      out += static_cast<char>(std::tolower(u));
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "x" : out;
}

std::string fmt(double value, const char* spec = "%.10g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, value);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

void write_xy_csv(const fs::path& path, const char* ha, const char* hb, const Vec& a,
                  const Vec& b) {
  auto out = open_output(path);
  out << ha << ',' << hb << '\n';
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out << fmt(a(i)) << ',' << fmt(b(i)) << '\n';
  finish_output(out, path);
}

// Minimal SVG line chart: one polyline per series, light axes, a legend.
// Deliberately bare; the CSV files carry the numbers.
struct Series {
  std::string label;
  const Vec* x;
  const Vec* y;
};

void write_svg_chart(const fs::path& path, const std::string& title,
                     const std::vector<Series>& series) {
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
  constexpr int kW = 640, kH = 440, kLeft = 64, kRight = 150, kTop = 40, kBottom = 48;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;

  double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool first = true;
  for (const auto& s : series) {
    for (Eigen::Index i = 0; i < s.x->size(); ++i) {
      const double px = (*s.x)(i), py = (*s.y)(i);
      if (first) {
        x_min = x_max = px;
        y_min = y_max = py;
        first = false;
      }
      x_min = std::min(x_min, px);
      x_max = std::max(x_max, px);
      y_min = std::min(y_min, py);
      y_max = std::max(y_max, py);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;
  const auto sx = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
  const auto sy = [&](double v) { return kTop + plot_h - (v - y_min) / (y_max - y_min) * plot_h; };

  auto out = open_output(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"22\" font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << fmt(plot_w, "%.0f")
      << "\" height=\"" << fmt(plot_h, "%.0f") << "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_min + (x_max - x_min) * t / 4.0;
    const double yv = y_min + (y_max - y_min) * t / 4.0;
    out << "<text x=\"" << fmt(sx(xv), "%.1f") << "\" y=\"" << (kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << fmt(xv, "%.3g") << "</text>\n";
    out << "<text x=\"" << (kLeft - 6) << "\" y=\"" << fmt(sy(yv) + 4, "%.1f")
        << "\" text-anchor=\"end\">" << fmt(yv, "%.3g") << "</text>\n";
  }
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < series[s].x->size(); ++i) {
      if (i) out << ' ';
      out << fmt(sx((*series[s].x)(i)), "%.1f") << ',' << fmt(sy((*series[s].y)(i)), "%.1f");
    }
    out << "\"/>\n";
    const double ly = kTop + 8 + 16.0 * static_cast<double>(s);
    out << "<line x1=\"" << (kW - kRight + 8) << "\" x2=\"" << (kW - kRight + 28) << "\" y1=\""
        << fmt(ly, "%.1f") << "\" y2=\"" << fmt(ly, "%.1f") << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << (kW - kRight + 34) << "\" y=\"" << fmt(ly + 4, "%.1f") << "\">"
        << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
  finish_output(out, path);
}

std::string direction_tag(const ProbabilityCurve& curve, const std::string& x,
                          const std::string& y) {
  return curve.direction == Direction::XOverY ? slug(x) + "_over_" + slug(y)
                                              : slug(y) + "_over_" + slug(x);
}

const char* curve_prefix(Criterion c) { return c == Criterion::FSD ? "fsd" : "gld"; }

}  // namespace

AnalysisReport run_analysis(const AnalysisConfig& config, unsigned sections) {
  validate(config);
  sections = (sections | kEstimates) & kAllSections;

  AnalysisReport report;
  report.draws = config.draws;
  report.seed = config.seed;
  report.sections = sections;
  report.gld_grid_step = config.gld_grid_step;

  std::vector<PosteriorDraws> draws;
  draws.reserve(config.groups.size());
  std::map<std::string, std::size_t> index_of;

  for (const auto& spec : config.groups) {
    GroupResult result;
    result.name = spec.name;
    result.label = spec.label;
    // Streams are keyed by group name, not position, so reordering or
    // removing other groups never changes this group's draws.
    const std::uint64_t stream_seed = derive_seed(config.seed, hash_label(spec.name));
    try {
      if (spec.kind == SourceKind::Counts) {
        auto loaded = load_counts(spec.path);
        result.category_labels = std::move(loaded.category_labels);
        result.observations = static_cast<long>(loaded.data.total());
        draws.push_back(conjugate_draws(loaded.data, uniform_prior(loaded.data.categories()),
                                        config.draws, stream_seed));
      } else {
        auto datasets = load_microdata(spec.path);
        auto it = datasets.find(spec.group);
        if (it == datasets.end()) {
          std::string have;
          for (const auto& [key, data] : datasets) {
            (void)data;
            if (!have.empty()) have += ", ";
            have += key.empty() ? "(none)" : key;
          }
          throw ConfigError("no group \"" + spec.group + "\" in " + spec.path +
                            " (file has: " + have + ")");
        }
        result.observations = static_cast<long>(it->second.size());
        draws.push_back(weighted_bootstrap_draws(it->second, config.draws, stream_seed));
      }

      const PosteriorDraws& d = draws.back();
      result.draws = d.draws();
      result.mean_probs = d.draws().colwise().mean().transpose();
      for (Eigen::Index k = 0; k < d.categories(); ++k)
        result.proportions.push_back(summarize(Eigen::Ref<const Vec>(d.draws().col(k))));

      if (sections & (kIndices | kDensities)) {
        std::vector<IndexPosterior> posteriors;
        posteriors.push_back(index_posterior(d, IndexKind::Headcount));
        posteriors.push_back(index_posterior(d, IndexKind::Jenkins));
        for (double alpha : config.alphas)
          posteriors.push_back(index_posterior(d, IndexKind::CowellFlachaire, alpha));
        for (const auto& posterior : posteriors) {
          if (sections & kIndices)
            result.indices.push_back({posterior.index, summarize(posterior)});
          if (sections & kDensities) {
            // A posterior that is flat up to rounding (H with K = 2, or
            // degenerate data) has no density to estimate; drop it instead
            // of failing the run.
            const double lo = posterior.values.minCoeff();
            const double hi = posterior.values.maxCoeff();
            if (hi - lo > 1e-9 * std::max(1.0, std::abs(hi)))
              result.densities.push_back({posterior.index, kde(posterior)});
          }
        }
      }
    } catch (const DomainError& e) {
      throw DomainError("group \"" + spec.name + "\": " + e.what());
    } catch (const ValidationError& e) {
      throw ConfigError("group \"" + spec.name + "\": " + e.what());
    }
    index_of[result.name] = report.groups.size();
    report.groups.push_back(std::move(result));
  }

  Vec grid;
  if (!config.comparisons.empty()) grid = default_gld_grid(config.gld_grid_step);

  for (const auto& spec : config.comparisons) {
    ComparisonResult result;
    result.x = spec.x;
    result.y = spec.y;
    const PosteriorDraws& dx = draws[index_of.at(spec.x)];
    const PosteriorDraws& dy = draws[index_of.at(spec.y)];
    try {
      for (Criterion criterion : spec.criteria) {
        if (sections & kDominance) {
          switch (criterion) {
            case Criterion::FSD:
              result.reports.push_back(fsd_probabilities(dx, dy));
              break;
            case Criterion::RestrictedFSD:
              result.reports.push_back(restricted_fsd_probabilities(dx, dy));
              break;
            case Criterion::GLD:
              result.reports.push_back(gld_probabilities(dx, dy, grid));
              break;
          }
        }
        if (sections & kCurves) {
          if (criterion == Criterion::FSD) {
            result.curves.push_back(probability_curve_fsd(dx, dy, Direction::XOverY));
            result.curves.push_back(probability_curve_fsd(dx, dy, Direction::YOverX));
          } else if (criterion == Criterion::GLD) {
            result.curves.push_back(probability_curve_gld(dx, dy, grid, Direction::XOverY));
            result.curves.push_back(probability_curve_gld(dx, dy, grid, Direction::YOverX));
          }
        }
      }
    } catch (const DomainError& e) {
      throw DomainError("comparison " + spec.x + " vs " + spec.y + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ConfigError("comparison " + spec.x + " vs " + spec.y + ": " + e.what());
    }
    report.comparisons.push_back(std::move(result));
  }
  return report;
}

std::vector<std::string> emit_plot_data(const AnalysisReport& report, const std::string& dir,
                                        bool render) {
  const fs::path plots = fs::path(dir) / "plots";
  std::error_code ec;
  fs::create_directories(plots, ec);
  if (ec) throw IoError("cannot create " + plots.string() + ": " + ec.message());

  std::vector<std::string> written;
  const auto record = [&](const std::string& name) {
    written.push_back((fs::path("plots") / name).generic_string());
  };

  std::vector<GLCurve> gl_curves;
  if (report.sections & kCurves) {
    for (const auto& group : report.groups) {
      gl_curves.push_back(gl_curve(group.mean_probs));
      const std::string name = "gl_" + slug(group.name) + ".csv";
      write_xy_csv(plots / name, "u", "value", gl_curves.back().u(), gl_curves.back().values());
      record(name);
    }
    for (const auto& comparison : report.comparisons) {
      for (const auto& curve : comparison.curves) {
        const std::string name = std::string(curve_prefix(curve.criterion)) + "_" +
                                 direction_tag(curve, comparison.x, comparison.y) + ".csv";
        write_xy_csv(plots / name, "axis", "prob", curve.axis, curve.probs);
        record(name);
      }
    }
  }
  if (report.sections & kDensities) {
    for (const auto& group : report.groups) {
      for (const auto& [id, density] : group.densities) {
        const std::string name =
            "density_" + slug(group.name) + "_" + slug(id.name()) + ".csv";
        write_xy_csv(plots / name, "grid", "density", density.grid, density.density);
        record(name);
      }
    }
  }

  if (render) {
    if (report.sections & kCurves) {
      std::vector<Series> series;
      for (std::size_t i = 0; i < report.groups.size(); ++i)
        series.push_back(
            {report.groups[i].label, &gl_curves[i].u(), &gl_curves[i].values()});
      write_svg_chart(plots / "gl_curves.svg", "Generalized Lorenz curves", series);
      record("gl_curves.svg");
      for (const auto& comparison : report.comparisons) {
        for (Criterion criterion : {Criterion::FSD, Criterion::GLD}) {
          std::vector<Series> pair;
          for (const auto& curve : comparison.curves)
            if (curve.criterion == criterion)
              pair.push_back({"Pr " + direction_tag(curve, comparison.x, comparison.y),
                              &curve.axis, &curve.probs});
          if (pair.empty()) continue;
          const std::string name = std::string(curve_prefix(criterion)) + "_" +
                                   slug(comparison.x) + "_vs_" + slug(comparison.y) + ".svg";
          write_svg_chart(plots / name,
                          std::string(criterion_name(criterion)) + " probability curves",
                          pair);
          record(name);
        }
      }
    }
    if (report.sections & kDensities) {
      std::size_t index_count = 0;
      for (const auto& group : report.groups)
        index_count = std::max(index_count, group.densities.size());
      for (std::size_t i = 0; i < index_count; ++i) {
        std::vector<Series> series;
        std::string index_name;
        for (const auto& group : report.groups) {
          if (i >= group.densities.size()) continue;
          index_name = group.densities[i].id.name();
          series.push_back(
              {group.label, &group.densities[i].density.grid, &group.densities[i].density.density});
        }
        if (series.empty()) continue;
        const std::string name = "density_" + slug(index_name) + ".svg";
        write_svg_chart(plots / name, "Posterior density of " + index_name, series);
        record(name);
      }
    }
  }
  return written;
}

std::vector<std::string> emit_draws(const AnalysisReport& report, const std::string& dir) {
  std::vector<std::string> written;
  for (const auto& group : report.groups) {
    const std::string name = "draws_" + slug(group.name) + ".csv";
    const fs::path path = fs::path(dir) / name;
    auto out = open_output(path);
    for (Eigen::Index k = 0; k < group.draws.cols(); ++k)
      out << (k ? "," : "") << 'p' << (k + 1);
    out << '\n';
    for (Eigen::Index m = 0; m < group.draws.rows(); ++m) {
      for (Eigen::Index k = 0; k < group.draws.cols(); ++k) {
        if (k) out << ',';
        out << fmt(group.draws(m, k));
      }
      out << '\n';
    }
    finish_output(out, path);
    written.push_back(name);
  }
  return written;
}

namespace {

json stats_json(const SummaryStats& stats) {
  return {{"mean", stats.mean},
          {"sd", stats.sd},
          {"q025", stats.q025},
          {"median", stats.median},
          {"q975", stats.q975}};
}

}  // namespace

void write_report_json(const AnalysisReport& report, const std::string& path) {
  json doc;
  doc["generated_at"] = timestamp_utc();
  doc["draws"] = report.draws;
  doc["seed"] = report.seed;
  doc["gld_grid_step"] = report.gld_grid_step;

  json section_names = json::array();
  const std::pair<unsigned, const char*> kSectionNames[] = {{kEstimates, "estimates"},
                                                            {kIndices, "indices"},
                                                            {kDominance, "dominance"},
                                                            {kCurves, "curves"},
                                                            {kDensities, "densities"}};
  for (const auto& [bit, name] : kSectionNames)
    if (report.sections & bit) section_names.push_back(name);
  doc["sections"] = std::move(section_names);

  doc["groups"] = json::array();
  for (const auto& group : report.groups) {
    json g;
    g["name"] = group.name;
    g["label"] = group.label;
    g["observations"] = group.observations;
    g["categories"] = group.mean_probs.size();
    if (!group.category_labels.empty()) g["category_labels"] = group.category_labels;
    g["mean"] = std::vector<double>(group.mean_probs.data(),
                                    group.mean_probs.data() + group.mean_probs.size());
    if (report.sections & kEstimates) {
      g["proportions"] = json::array();
      for (std::size_t k = 0; k < group.proportions.size(); ++k) {
        json row = stats_json(group.proportions[k]);
        row["category"] = k + 1;
        g["proportions"].push_back(std::move(row));
      }
    }
    if (report.sections & kIndices) {
      g["indices"] = json::array();
      for (const auto& [id, stats] : group.indices) {
        json row = stats_json(stats);
        row["index"] = id.name();
        g["indices"].push_back(std::move(row));
      }
    }
    if (report.sections & kDensities) {
      g["densities"] = json::array();
      for (const auto& [id, density] : group.densities)
        g["densities"].push_back({{"index", id.name()}, {"bandwidth", density.bandwidth}});
    }
    doc["groups"].push_back(std::move(g));
  }

  doc["comparisons"] = json::array();
  for (const auto& comparison : report.comparisons) {
    json c;
    c["x"] = comparison.x;
    c["y"] = comparison.y;
    if (report.sections & kDominance) {
      c["dominance"] = json::array();
      for (const auto& triple : comparison.reports) {
        c["dominance"].push_back({{"criterion", criterion_name(triple.criterion)},
                                  {"prob_x", triple.prob_x()},
                                  {"prob_y", triple.prob_y()},
                                  {"prob_none", triple.prob_none()},
                                  {"count_x", triple.count_x},
                                  {"count_y", triple.count_y},
                                  {"count_none", triple.count_none}});
      }
    }
    doc["comparisons"].push_back(std::move(c));
  }

  doc["artifacts"] = report.artifacts;

  const fs::path out_path(path);
  auto out = open_output(out_path);
  out << doc.dump(2) << '\n';
  finish_output(out, out_path);
}

namespace {

// Left-justified columns separated by two spaces; trailing blanks trimmed so
// fixture diffs stay clean.
void print_table(std::ostream& out, const std::string& title, const std::string& corner,
                 const std::vector<std::string>& row_labels,
                 const std::vector<std::string>& col_labels,
                 const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> widths(col_labels.size() + 1);
  widths[0] = corner.size();
  for (const auto& label : row_labels) widths[0] = std::max(widths[0], label.size());
  for (std::size_t c = 0; c < col_labels.size(); ++c) {
    widths[c + 1] = col_labels[c].size();
    for (const auto& row : cells)
      if (c < row.size()) widths[c + 1] = std::max(widths[c + 1], row[c].size());
  }
  const auto print_row = [&](const std::string& head, const std::vector<std::string>& row) {
    std::string line = head + std::string(widths[0] - head.size(), ' ');
    for (std::size_t c = 0; c < col_labels.size(); ++c) {
      const std::string& cell = c < row.size() ? row[c] : std::string();
      line += "  " + cell + std::string(widths[c + 1] - cell.size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  };
  out << title << '\n';
  print_row(corner, col_labels);
  for (std::size_t r = 0; r < row_labels.size(); ++r)
    print_row(row_labels[r], r < cells.size() ? cells[r] : std::vector<std::string>());
  out << '\n';
}

std::string mean_sd_cell(const SummaryStats& stats) {
  return fmt(stats.mean, "%.4f") + " (" + fmt(stats.sd, "%.4f") + ")";
}

}  // namespace

void write_tables(const AnalysisReport& report, std::ostream& out) {
  out << "Posterior analysis: draws=" << report.draws << " seed=" << report.seed << "\n\n";

  std::vector<std::string> group_labels;
  for (const auto& group : report.groups) group_labels.push_back(group.label);

  if (report.sections & kEstimates) {
    std::size_t max_k = 0;
    for (const auto& group : report.groups)
      max_k = std::max(max_k, group.proportions.size());
    std::vector<std::string> row_labels;
    std::vector<std::vector<std::string>> cells;
    for (std::size_t k = 0; k < max_k; ++k) {
      std::string label = std::to_string(k + 1);
      for (const auto& group : report.groups)
        if (k < group.category_labels.size() && !group.category_labels[k].empty()) {
          label += "  " + group.category_labels[k];
          break;
        }
      row_labels.push_back(label);
      std::vector<std::string> row;
      for (const auto& group : report.groups)
        row.push_back(k < group.proportions.size() ? mean_sd_cell(group.proportions[k])
                                                   : std::string());
      cells.push_back(std::move(row));
    }
    row_labels.push_back("N");
    std::vector<std::string> totals;
    for (const auto& group : report.groups) totals.push_back(std::to_string(group.observations));
    cells.push_back(std::move(totals));
    print_table(out, "Posterior category proportions, mean (sd)", "category", row_labels,
                group_labels, cells);
  }

  if ((report.sections & kIndices) && !report.groups.empty()) {
    std::vector<std::string> row_labels;
    for (const auto& [id, stats] : report.groups.front().indices) {
      (void)stats;
      row_labels.push_back(id.name());
    }
    std::vector<std::vector<std::string>> cells(row_labels.size());
    for (std::size_t r = 0; r < row_labels.size(); ++r)
      for (const auto& group : report.groups)
        cells[r].push_back(r < group.indices.size() ? mean_sd_cell(group.indices[r].stats)
                                                    : std::string());
    print_table(out, "Inequality and level indices, posterior mean (sd)", "index", row_labels,
                group_labels, cells);
  }

  if (report.sections & kDominance) {
    for (const auto& comparison : report.comparisons) {
      std::vector<std::string> col_labels;
      std::vector<std::vector<std::string>> cells(3);
      for (const auto& triple : comparison.reports) {
        col_labels.push_back(criterion_name(triple.criterion));
        cells[0].push_back(fmt(triple.prob_x(), "%.4f"));
        cells[1].push_back(fmt(triple.prob_y(), "%.4f"));
        cells[2].push_back(fmt(triple.prob_none(), "%.4f"));
      }
      print_table(out,
                  "Dominance probabilities: X = " + comparison.x + ", Y = " + comparison.y, "",
                  {"Pr(X dominates Y)", "Pr(Y dominates X)", "Pr(no dominance)"}, col_labels,
                  cells);
    }
  }
}

}  // namespace ordineq
