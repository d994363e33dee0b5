#include "covtau/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "covtau/error.hpp"

namespace covtau {
namespace {

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string raw(double x) { return fmt("%.12g", x); }
std::string percent(double x) { return fmt("%.2f", 100.0 * x); }

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

std::vector<SuccessProfile> select_models(std::vector<SuccessProfile> all,
                                          const std::vector<std::string>& wanted) {
  if (wanted.empty()) return all;
  std::vector<std::string> known;
  for (const auto& p : all) known.push_back(p.model());
  std::vector<SuccessProfile> out;
  std::set<std::string> seen;
  for (const auto& name : wanted) {
    const auto it = std::find_if(all.begin(), all.end(),
                                 [&](const SuccessProfile& p) { return p.model() == name; });
    if (it == all.end()) {
      throw Error("unknown model '" + name + "'; known models: " + join(known, ", "));
    }
    if (seen.insert(name).second) out.push_back(*it);
  }
  std::sort(out.begin(), out.end(),
            [](const SuccessProfile& a, const SuccessProfile& b) { return a.model() < b.model(); });
  return out;
}

void validate_options(const ReportOptions& options) {
  for (const auto& tau : options.taus) {
    if (tau < 0 || tau > 1) throw Error("tau " + to_string(tau) + " is outside [0, 1]");
  }
  if (options.ks.empty()) throw Error("k list is empty");
  for (std::size_t i = 0; i < options.ks.size(); ++i) {
    if (options.ks[i] < 1) throw Error("k values must be >= 1");
    if (i > 0 && options.ks[i] <= options.ks[i - 1]) {
      throw Error("k list must be strictly ascending");
    }
  }
}

using CountIndex = std::map<std::string, std::map<std::string, TaskCounts>>;

CountIndex index_counts(const CountsByModel& counts) {
  CountIndex idx;
  for (const auto& [model, list] : counts) {
    for (const auto& tc : list) idx[model][tc.task] = tc;
  }
  return idx;
}

// Metric rows for one aligned universe; avg_auc_plus filled when M >= 2.
std::vector<MetricRow> rows_for(const std::vector<SuccessProfile>& aligned,
                                const ReportOptions& options, const CountIndex& counts) {
  std::vector<MetricRow> rows;
  std::vector<CoverCurve> curves;
  for (const auto& prof : aligned) {
    const CoverCurve curve = build_cover_curve(prof);
    MetricRow row;
    row.model = prof.model();
    row.tasks = prof.task_count();
    row.pass1 = to_double(mean_success(prof));
    for (auto k : options.ks) row.pass_k.push_back(pass_at_k_exact(prof, k));
    for (const auto& tau : options.taus) row.cover.push_back(to_double(curve.at(tau)));
    row.nonzero = to_double(fraction_nonzero(prof));

    std::vector<TaskCounts> tcs;
    for (const auto& e : prof.entries()) tcs.push_back(counts.at(prof.model()).at(e.task));
    const bool shared_n = std::all_of(tcs.begin(), tcs.end(),
                                      [&](const TaskCounts& tc) { return tc.n == tcs.front().n; });
    if (shared_n) row.maj = to_double(maj_at_n(tcs));
    rows.push_back(std::move(row));
    curves.push_back(curve);
  }
  if (curves.size() >= 2) {
    const auto avg = avg_auc_plus(curves);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].avg_auc_plus = to_double(avg[i]);
  }
  return rows;
}

std::string group_of(const std::string& task) {
  const auto slash = task.find('/');
  return slash == std::string::npos ? std::string() : task.substr(0, slash);
}

std::vector<MetricRow> per_group_rows(const std::vector<SuccessProfile>& aligned,
                                      const ReportOptions& options, const CountIndex& counts,
                                      std::vector<std::string>& notes) {
  std::map<std::string, std::vector<std::size_t>> groups;  // group -> entry positions
  const auto& first = aligned.front().entries();
  for (std::size_t i = 0; i < first.size(); ++i) groups[group_of(first[i].task)].push_back(i);

  std::vector<std::vector<MetricRow>> per_group;
  for (const auto& [group, positions] : groups) {
    std::vector<SuccessProfile> sub;
    for (const auto& prof : aligned) {
      std::vector<TaskProbability> entries;
      for (auto pos : positions) entries.push_back(prof.entries()[pos]);
      sub.emplace_back(prof.model(), std::move(entries));
    }
    per_group.push_back(rows_for(sub, options, counts));
  }
  std::vector<std::string> names;
  for (const auto& [group, positions] : groups) {
    names.push_back((group.empty() ? std::string("(ungrouped)") : group) + " (" +
                    std::to_string(positions.size()) + ")");
  }
  notes.push_back("per-group averages over " + std::to_string(groups.size()) +
                  " task groups: " + join(names, ", "));

  const double g = static_cast<double>(per_group.size());
  std::vector<MetricRow> rows = per_group.front();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& row = rows[i];
    row.tasks = aligned[i].task_count();
    row.pass1 = 0;
    std::fill(row.pass_k.begin(), row.pass_k.end(), 0.0);
    std::fill(row.cover.begin(), row.cover.end(), 0.0);
    row.nonzero = 0;
    bool maj_ok = true;
    double maj = 0;
    double avg = 0;
    for (const auto& group_rows : per_group) {
      const auto& r = group_rows[i];
      row.pass1 += r.pass1 / g;
      for (std::size_t q = 0; q < r.pass_k.size(); ++q) row.pass_k[q] += r.pass_k[q] / g;
      for (std::size_t q = 0; q < r.cover.size(); ++q) row.cover[q] += r.cover[q] / g;
      row.nonzero += r.nonzero / g;
      if (r.maj) maj += *r.maj / g; else maj_ok = false;
      if (r.avg_auc_plus) avg += *r.avg_auc_plus / g;
    }
    row.maj = maj_ok ? std::optional<double>(maj) : std::nullopt;
    if (row.avg_auc_plus) row.avg_auc_plus = avg;
  }
  return rows;
}

struct Column {
  std::string name;
  std::vector<double> values;
};

std::vector<Column> metric_columns(const ReportBundle& b) {
  std::vector<Column> cols;
  auto add = [&](std::string name, auto&& get) {
    Column c{std::move(name), {}};
    for (const auto& r : b.rows) c.values.push_back(get(r));
    cols.push_back(std::move(c));
  };
  add("pass@1", [](const MetricRow& r) { return r.pass1; });
  for (std::size_t q = 0; q < b.ks.size(); ++q) {
    if (b.ks[q] == 1) continue;
    add("pass@" + std::to_string(b.ks[q]), [q](const MetricRow& r) { return r.pass_k[q]; });
  }
  for (std::size_t q = 0; q < b.taus.size(); ++q) {
    add("cov@" + decimal_label(b.taus[q]), [q](const MetricRow& r) { return r.cover[q]; });
  }
  add("G(0+)", [](const MetricRow& r) { return r.nonzero; });
  const bool maj = std::all_of(b.rows.begin(), b.rows.end(), [](const MetricRow& r) { return r.maj.has_value(); });
  if (maj) add("maj@n", [](const MetricRow& r) { return *r.maj; });
  const bool avg = !b.rows.empty() && b.rows.front().avg_auc_plus.has_value();
  if (avg) {
    add("avg_auc_plus", [](const MetricRow& r) { return *r.avg_auc_plus; });
  }
  return cols;
}

std::string header(const ReportBundle& b) {
  std::string out = "# " + b.provenance.tool + "  run=" + b.provenance.run_id +
                    "  manifest_sha256=" + b.provenance.manifest_sha256 +
                    "  seed=" + std::to_string(b.provenance.seed) +
                    "  aggregation=" + std::string(to_string(b.aggregation)) + "\n";
  for (const auto& [model, tasks] : b.dropped) {
    out += "# dropped tasks for " + model + " (not shared by all models): " + join(tasks, ",") + "\n";
  }
  for (const auto& note : b.notes) out += "# note: " + note + "\n";
  return out;
}

std::string pad(const std::string& s, std::size_t width, bool left) {
  if (s.size() >= width) return s;
  return left ? s + std::string(width - s.size(), ' ') : std::string(width - s.size(), ' ') + s;
}

std::string render_grid(const std::vector<std::vector<std::string>>& cells) {
  std::vector<std::size_t> widths;
  for (const auto& row : cells) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += pad(row[c], widths[c], c == 0);
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += ch;
    }
  }
  return out;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr std::size_t kPaletteSize = sizeof kPalette / sizeof kPalette[0];

struct Frame {
  double width = 720, height = 480;
  double left = 70, right = 160, top = 40, bottom = 60;
  double x_min = 0, x_max = 1;

  double px(double x) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return left + (x - x_min) / span * (width - left - right);
  }
  double py(double y) const { return top + (1.0 - y) * (height - top - bottom); }
};

std::string coord(double v) { return fmt("%.2f", v); }

std::string svg_open(const Frame& f, const std::string& title, const std::string& x_label,
                     const std::vector<std::pair<double, std::string>>& x_ticks) {
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\""
    << f.height << "\" viewBox=\"0 0 " << f.width << " " << f.height << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << f.width << "\" height=\"" << f.height
    << "\" fill=\"white\"/>\n"
    << "<text x=\"" << coord(f.width / 2) << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" << xml_escape(title) << "</text>\n";
  const double x0 = f.px(f.x_min), x1 = f.px(f.x_max), y0 = f.py(0), y1 = f.py(1);
  o << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n"
    << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\"" << coord(x1)
    << "\" y2=\"" << coord(y0) << "\"/>\n"
    << "<line x1=\"" << coord(x0) << "\" y1=\"" << coord(y0) << "\" x2=\"" << coord(x0)
    << "\" y2=\"" << coord(y1) << "\"/>\n</g>\n";
  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double y = i / 5.0;
    o << "<line x1=\"" << coord(x0 - 4) << "\" y1=\"" << coord(f.py(y)) << "\" x2=\""
      << coord(x0) << "\" y2=\"" << coord(f.py(y)) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << coord(x0 - 8) << "\" y=\"" << coord(f.py(y) + 4)
      << "\" text-anchor=\"end\">" << fmt("%.1f", y) << "</text>\n";
  }
  for (const auto& [x, label] : x_ticks) {
    o << "<line x1=\"" << coord(f.px(x)) << "\" y1=\"" << coord(y0) << "\" x2=\""
      << coord(f.px(x)) << "\" y2=\"" << coord(y0 + 4) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << coord(f.px(x)) << "\" y=\"" << coord(y0 + 18)
      << "\" text-anchor=\"middle\">" << xml_escape(label) << "</text>\n";
  }
  o << "<text x=\"" << coord((x0 + x1) / 2) << "\" y=\"" << coord(f.height - 16)
    << "\" text-anchor=\"middle\" font-size=\"13\">" << xml_escape(x_label) << "</text>\n"
    << "</g>\n";
  return o.str();
}

std::string svg_legend(const Frame& f, const std::vector<std::string>& names) {
  std::ostringstream o;
  o << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = f.top + 10 + 20.0 * static_cast<double>(i);
    const double x = f.width - f.right + 15;
    o << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(y) << "\" x2=\"" << coord(x + 24)
      << "\" y2=\"" << coord(y) << "\" stroke=\"" << kPalette[i % kPaletteSize]
      << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << coord(x + 30) << "\" y=\"" << coord(y + 4) << "\">"
      << xml_escape(names[i]) << "</text>\n";
  }
  o << "</g>\n";
  return o.str();
}

std::string safe_file_part(const std::string& model) {
  std::string out;
  for (char ch : model) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.';
    out += ok ? ch : '_';
  }
  return out.empty() ? std::string("_") : out;
}

}  // namespace

std::string_view to_string(Aggregation aggregation) {
  return aggregation == Aggregation::kPooled ? "pooled" : "per-group";
}

ReportBundle build_report(const Run& run, const ReportOptions& options) {
  validate_options(options);
  ReportBundle b;
  b.aggregation = options.aggregation;
  b.taus = options.taus;
  b.ks = options.ks;
  b.provenance.run_id = run.manifest.run_id;
  b.provenance.manifest_sha256 = sha256_hex(serialize_run(run));
  b.provenance.seed = options.seed;

  const auto selected = select_models(profiles_of(run.counts), options.models);
  AlignedProfiles aligned = align_profiles(selected);
  b.dropped = aligned.dropped;
  const CountIndex counts = index_counts(run.counts);

  for (const auto& prof : aligned.profiles) {
    std::size_t coarse = 0;
    std::uint64_t smallest = UINT64_MAX;
    for (const auto& e : prof.entries()) {
      const auto n = counts.at(prof.model()).at(e.task).n;
      if (n < kCoarseTrialWarning) ++coarse;
      smallest = std::min(smallest, n);
    }
    if (coarse > 0) {
      b.notes.push_back(prof.model() + ": " + std::to_string(coarse) + " task(s) have fewer than " +
                        std::to_string(kCoarseTrialWarning) + " trials (min n = " +
                        std::to_string(smallest) + "); cover at high tau moves in steps of 1/n");
    }
  }
  if (aligned.profiles.size() < 2) {
    b.notes.push_back("avg_auc_plus omitted: needs at least two models");
  }

  b.rows = options.aggregation == Aggregation::kPooled
               ? rows_for(aligned.profiles, options, counts)
               : per_group_rows(aligned.profiles, options, counts, b.notes);

  for (const auto& prof : aligned.profiles) {
    b.cover_curves.push_back(build_cover_curve(prof));
    b.pass_curves.push_back(pass_curve(prof, options.ks));
  }
  if (aligned.profiles.size() >= 2) {
    b.dominance = build_dominance_report(aligned.profiles, options.taus, options.ks);
  }
  if (options.bootstrap > 0) {
    b.bands = bootstrap_bands(aligned.profiles, options.taus, options.bootstrap, options.seed);
  }
  return b;
}

std::string render_table(const ReportBundle& b) {
  const auto cols = metric_columns(b);
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> head{"model", "tasks"};
  for (const auto& c : cols) head.push_back(c.name);
  head.push_back("avg_auc_plus(raw)");
  const bool has_avg = !b.rows.empty() && b.rows.front().avg_auc_plus.has_value();
  if (!has_avg) head.pop_back();
  cells.push_back(head);

  std::vector<std::map<std::string, int>> ranks(cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::map<std::string, double> values;
    for (std::size_t i = 0; i < b.rows.size(); ++i) values[b.rows[i].model] = cols[c].values[i];
    for (const auto& e : rank_models(values)) ranks[c][e.model] = e.rank;
  }
  for (std::size_t i = 0; i < b.rows.size(); ++i) {
    const auto& row = b.rows[i];
    std::vector<std::string> line{row.model, std::to_string(row.tasks)};
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::string cell = percent(cols[c].values[i]);
      const int rank = ranks[c][row.model];
      if (b.rows.size() > 1 && rank <= 3) cell += "[" + std::to_string(rank) + "]";
      line.push_back(cell);
    }
    if (has_avg) line.push_back(fmt("%.4f", *row.avg_auc_plus));
    cells.push_back(line);
  }

  std::string out = header(b);
  out += "# values x100, two decimals; [1]/[2]/[3] mark best/second/third per column\n";
  out += render_grid(cells);
  if (b.bands) {
    out += "\n# bootstrap: " + std::to_string(b.bands->resamples) + " task resamples, seed " +
           std::to_string(b.bands->seed) + ", 95% percentile bands (x100)\n";
    std::vector<std::vector<std::string>> band_cells;
    std::vector<std::string> bh{"model"};
    for (const auto& tau : b.taus) bh.push_back("cov@" + decimal_label(tau));
    if (!b.bands->avg_auc_plus.empty()) bh.push_back("avg_auc_plus");
    band_cells.push_back(bh);
    for (const auto& row : b.rows) {
      std::vector<std::string> line{row.model};
      for (const auto& band : b.bands->cover.at(row.model)) {
        line.push_back("[" + percent(band.low) + ", " + percent(band.high) + "]");
      }
      if (const auto it = b.bands->avg_auc_plus.find(row.model); it != b.bands->avg_auc_plus.end()) {
        line.push_back("[" + percent(it->second.low) + ", " + percent(it->second.high) + "]");
      }
      band_cells.push_back(line);
    }
    out += render_grid(band_cells);
  }
  return out;
}

std::string render_tsv(const ReportBundle& b) {
  const auto cols = metric_columns(b);
  std::string out = header(b);
  std::vector<std::string> head{"model", "tasks"};
  for (const auto& c : cols) head.push_back(c.name);
  if (b.bands) {
    for (const auto& tau : b.taus) {
      head.push_back("cov@" + decimal_label(tau) + "_lo");
      head.push_back("cov@" + decimal_label(tau) + "_hi");
    }
    if (!b.bands->avg_auc_plus.empty()) {
      head.push_back("avg_auc_plus_lo");
      head.push_back("avg_auc_plus_hi");
    }
  }
  out += join(head, "\t") + "\n";
  for (std::size_t i = 0; i < b.rows.size(); ++i) {
    std::vector<std::string> line{b.rows[i].model, std::to_string(b.rows[i].tasks)};
    for (const auto& c : cols) line.push_back(raw(c.values[i]));
    if (b.bands) {
      for (const auto& band : b.bands->cover.at(b.rows[i].model)) {
        line.push_back(raw(band.low));
        line.push_back(raw(band.high));
      }
      if (const auto it = b.bands->avg_auc_plus.find(b.rows[i].model); it != b.bands->avg_auc_plus.end()) {
        line.push_back(raw(it->second.low));
        line.push_back(raw(it->second.high));
      }
    }
    out += join(line, "\t") + "\n";
  }
  return out;
}

std::string render_dominance(const ReportBundle& b) {
  if (!b.dominance) throw Error("dominance report needs at least two models");
  const auto& d = *b.dominance;
  const std::size_t m = d.models.size();
  std::string out = header(b);

  out += "# auc_plus: row model's excess area over column model (raw, [0,1])\n";
  std::vector<std::string> head{"model"};
  head.insert(head.end(), d.models.begin(), d.models.end());
  out += join(head, "\t") + "\n";
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::string> line{d.models[i]};
    for (std::size_t j = 0; j < m; ++j) line.push_back(i == j ? "-" : raw(to_double(d.auc_plus[i][j])));
    out += join(line, "\t") + "\n";
  }

  out += "\n# avg_auc_plus (pooled universe)\nmodel\traw\tx100\texact\n";
  for (std::size_t i = 0; i < m; ++i) {
    const double v = to_double(d.avg_auc_plus[i]);
    out += d.models[i] + "\t" + raw(v) + "\t" + percent(v) + "\t" + to_string(d.avg_auc_plus[i]) + "\n";
  }

  out += "\n# cover dominance: G_first >= G_second on all of [0,1]\nfirst\tsecond\tdominates\n";
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i != j) out += d.models[i] + "\t" + d.models[j] + "\t" + (d.dominates[i][j] ? "true" : "false") + "\n";
    }
  }

  out += "\n# pass@k crossovers on the k grid\nfirst\tsecond\tk_star\tleader_before\tleader_after\n";
  for (const auto& c : d.crossovers) {
    auto name = [&](Leader l) { return l == Leader::kFirst ? c.first : c.second; };
    if (c.k_star) {
      out += c.first + "\t" + c.second + "\t" + std::to_string(*c.k_star) + "\t" + name(c.before) +
             "\t" + name(c.after) + "\n";
    } else {
      out += c.first + "\t" + c.second + "\tnone\t-\t-\n";
    }
  }

  for (const auto& [metric, ranking] : d.rankings) {
    out += "\n# ranking by " + metric + "\nrank\tmodel\tvalue\n";
    for (const auto& e : ranking) {
      out += std::to_string(e.rank) + "\t" + e.model + "\t" + raw(e.value) + "\n";
    }
  }
  return out;
}

std::string render_cover_table(const CoverCurve& curve) {
  std::string out = "# cover curve for " + curve.model() +
                    ": value holds on (previous tau, tau]; G(0) = 1\ntau\tcover\ttau_exact\tcover_exact\n";
  for (std::size_t j = 0; j < curve.breakpoints().size(); ++j) {
    out += raw(to_double(curve.breakpoints()[j])) + "\t" + raw(to_double(curve.values()[j])) + "\t" +
           to_string(curve.breakpoints()[j]) + "\t" + to_string(curve.values()[j]) + "\n";
  }
  return out;
}

std::string render_pass_table(const PassCurve& curve) {
  std::string out = "# pass@k curve for " + curve.model + "\nk\tpass\n";
  for (const auto& row : export_curve(curve)) {
    out += std::to_string(static_cast<std::uint64_t>(row.x)) + "\t" + raw(row.value) + "\n";
  }
  return out;
}

std::string render_pass_svg(const std::vector<PassCurve>& curves) {
  if (curves.empty()) throw Error("no pass curves to plot");
  Frame f;
  const auto& ks = curves.front().ks;
  f.x_min = std::log2(static_cast<double>(ks.front()));
  f.x_max = std::log2(static_cast<double>(ks.back()));
  std::vector<std::pair<double, std::string>> ticks;
  for (auto k : ks) {
    const double e = std::log2(static_cast<double>(k));
    // Label exact powers of two as 2^e.
    const bool pow2 = (k & (k - 1)) == 0;
    ticks.emplace_back(e, pow2 ? "2^" + std::to_string(static_cast<int>(std::lround(e))) : std::to_string(k));
  }
  std::string out = svg_open(f, "Pass@k", "k (log2 scale)", ticks);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    names.push_back(c.model);
    std::string points;
    for (std::size_t q = 0; q < c.ks.size(); ++q) {
      if (q) points += ' ';
      points += coord(f.px(std::log2(static_cast<double>(c.ks[q])))) + "," + coord(f.py(c.values[q]));
    }
    out += "<polyline data-model=\"" + xml_escape(c.model) + "\" fill=\"none\" stroke=\"" +
           kPalette[i % kPaletteSize] + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
  }
  out += svg_legend(f, names);
  out += "</svg>\n";
  return out;
}

std::string render_cover_svg(const std::vector<CoverCurve>& curves) {
  if (curves.empty()) throw Error("no cover curves to plot");
  Frame f;
  std::vector<std::pair<double, std::string>> ticks;
  for (int i = 0; i <= 10; i += 2) ticks.emplace_back(i / 10.0, fmt("%.1f", i / 10.0));
  std::string out = svg_open(f, "Cover@tau", "tau (reliability threshold)", ticks);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    names.push_back(c.model());
    const auto& bp = c.breakpoints();
    const auto& vals = c.values();
    // Horizontal run at values[j] over (bp[j-1], bp[j]], then the drop.
    std::string d = "M " + coord(f.px(0)) + " " + coord(f.py(to_double(vals[1])));
    for (std::size_t j = 1; j < bp.size(); ++j) {
      d += " H " + coord(f.px(to_double(bp[j])));
      if (j + 1 < bp.size()) d += " V " + coord(f.py(to_double(vals[j + 1])));
    }
    const char* color = kPalette[i % kPaletteSize];
    out += "<path data-model=\"" + xml_escape(c.model()) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\" d=\"" + d + "\"/>\n";
    if (vals[1] != vals[0]) {
      // G(0) = 1 is an isolated point when some task has p = 0.
      out += "<circle cx=\"" + coord(f.px(0)) + "\" cy=\"" + coord(f.py(1)) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
  }
  out += svg_legend(f, names);
  out += "</svg>\n";
  return out;
}

std::string cmd_compute(const InputOptions& input, const ReportOptions& options, TableFormat format) {
  const Run run = load_any(input.input, input.gold);
  const ReportBundle bundle = build_report(run, options);
  return format == TableFormat::kTable ? render_table(bundle) : render_tsv(bundle);
}

std::vector<std::filesystem::path> cmd_curves(const InputOptions& input, const ReportOptions& options,
                                              const std::filesystem::path& out_dir) {
  const Run run = load_any(input.input, input.gold);
  ReportOptions no_bands = options;
  no_bands.bootstrap = 0;
  const ReportBundle bundle = build_report(run, no_bands);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error("cannot create '" + out_dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& bytes) {
    const auto path = out_dir / name;
    write_file_atomic(path, bytes);
    written.push_back(path);
  };
  for (const auto& c : bundle.cover_curves) emit("cover_" + safe_file_part(c.model()) + ".tsv", render_cover_table(c));
  for (const auto& c : bundle.pass_curves) emit("pass_" + safe_file_part(c.model) + ".tsv", render_pass_table(c));
  emit("cover.svg", render_cover_svg(bundle.cover_curves));
  emit("pass.svg", render_pass_svg(bundle.pass_curves));
  return written;
}

std::string cmd_dominance(const InputOptions& input, const ReportOptions& options) {
  const Run run = load_any(input.input, input.gold);
  if (run.counts.size() < 2 && options.models.empty()) {
    throw Error("dominance needs at least two models; run has " + std::to_string(run.counts.size()));
  }
  if (!options.models.empty() && options.models.size() < 2) {
    throw Error("dominance needs at least two models");
  }
  return render_dominance(build_report(run, options));
}

RunManifest cmd_ingest(const InputOptions& input, const std::filesystem::path& output) {
  const Run run = load_any(input.input, input.gold);
  persist_run(run, output);
  return run.manifest;
}

std::string record_line(const SampleRecord& r) {
  nlohmann::json obj = {{"model", r.model}, {"task", r.task}, {"sample_index", r.sample_index},
                        {"correct", r.correct}};
  if (r.answer) obj["answer"] = *r.answer;
  return obj.dump();
}

std::string cmd_simulate(const SimulateOptions& options) {
  std::vector<std::pair<SuccessProfile, std::vector<SampleRecord>>> runs;
  auto toy = [&](const std::string& name, bool spread, std::uint64_t seed) {
    ProfileSpec spec = options.profile;
    spec.model = name;
    spec.generator = spread ? Generator::kTwoPoint : Generator::kConstant;
    spec.p = make_rational(1, 2);
    spec.low = 0;
    spec.high = 1;
    spec.ratio = make_rational(1, 2);
    SuccessProfile prof = make_profile(spec);
    auto records = simulate_exact_counts(prof, options.trials, seed);
    runs.emplace_back(std::move(prof), std::move(records));
  };
  switch (options.kind) {
    case SimulateKind::kGuesser: {
      GuesserSpec spec = options.guesser;
      spec.seed = options.seed;
      spec.trials = options.trials;
      GuesserRun g = simulate_guesser(spec);
      runs.emplace_back(std::move(g.profile), std::move(g.records));
      break;
    }
    case SimulateKind::kToyA: toy("A", false, options.seed); break;
    case SimulateKind::kToyB: toy("B", true, options.seed); break;
    case SimulateKind::kToyAB:
      toy("A", false, options.seed);
      toy("B", true, options.seed + 1);
      break;
    case SimulateKind::kProfile: {
      SuccessProfile prof = make_profile(options.profile);
      auto records = options.exact_counts
                         ? simulate_exact_counts(prof, options.trials, options.seed)
                         : simulate_completions(prof, options.trials, options.seed);
      runs.emplace_back(std::move(prof), std::move(records));
      break;
    }
  }

  std::string bytes;
  std::string description = "# exact profile(s): model, p, tasks\n";
  for (const auto& [prof, records] : runs) {
    for (const auto& r : records) {
      bytes += record_line(r);
      bytes += '\n';
    }
    std::map<Rational, std::size_t> distinct;
    for (const auto& e : prof.entries()) ++distinct[e.p];
    for (const auto& [p, n] : distinct) {
      description += prof.model() + "\t" + to_string(p) + "\t" + std::to_string(n) + "\n";
    }
  }
  write_file_atomic(options.output, bytes);
  return description;
}

}  // namespace covtau
