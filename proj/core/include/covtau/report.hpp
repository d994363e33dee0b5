#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covtau/curves.hpp"
#include "covtau/dominance.hpp"
#include "covtau/ingest.hpp"
#include "covtau/rational.hpp"
#include "covtau/synth.hpp"

namespace covtau {

inline constexpr const char* kToolVersion = "covtau 0.1.0";

/// Below this many trials per task, cover at high tau is too coarse (1/n).
inline constexpr std::uint64_t kCoarseTrialWarning = 16;

enum class Aggregation {
  kPooled,    // every task in one universe
  kPerGroup,  // metrics per task group (identifier prefix before '/'), then averaged
};

std::string_view to_string(Aggregation aggregation);

struct ReportOptions {
  std::vector<Rational> taus = {make_rational(1, 5), make_rational(4, 5)};
  std::vector<std::uint64_t> ks = power_of_two_grid(13);
  /// Empty means every model in the run.
  std::vector<std::string> models;
  Aggregation aggregation = Aggregation::kPooled;
  /// Zero disables bootstrap bands.
  std::size_t bootstrap = 0;
  std::uint64_t seed = kDefaultSeed;
};

struct MetricRow {
  std::string model;
  std::size_t tasks = 0;
  double pass1 = 0.0;
  std::vector<double> pass_k;  // one per ks
  std::vector<double> cover;   // one per taus
  double nonzero = 0.0;        // G(0+)
  std::optional<double> maj;   // only when every task shares one n
  std::optional<double> avg_auc_plus;
};

struct Provenance {
  std::string tool = kToolVersion;
  std::string run_id;
  std::string manifest_sha256;
  std::uint64_t seed = kDefaultSeed;
};

struct ReportBundle {
  Provenance provenance;
  Aggregation aggregation = Aggregation::kPooled;
  std::vector<Rational> taus;
  std::vector<std::uint64_t> ks;
  std::vector<MetricRow> rows;
  std::map<std::string, std::vector<std::string>> dropped;
  std::vector<std::string> notes;
  std::vector<CoverCurve> cover_curves;
  std::vector<PassCurve> pass_curves;
  std::optional<DominanceReport> dominance;  // pooled task universe, M >= 2
  std::optional<BootstrapBands> bands;
};

ReportBundle build_report(const Run& run, const ReportOptions& options);

/// Human table: metrics x100 with two decimals, best/second/third per column
/// marked [1]/[2]/[3].
std::string render_table(const ReportBundle& bundle);

/// Tab-separated raw [0, 1] fractions.
std::string render_tsv(const ReportBundle& bundle);

/// Tab-separated sections: AUC+ matrix, AvgAUC+, dominance flags,
/// crossovers, rankings. Requires M >= 2.
std::string render_dominance(const ReportBundle& bundle);

std::string render_cover_table(const CoverCurve& curve);
std::string render_pass_table(const PassCurve& curve);

/// Self-contained SVG: Pass@k against log2-scaled k.
std::string render_pass_svg(const std::vector<PassCurve>& curves);

/// Self-contained SVG: step plot of Cover@tau against linear tau.
std::string render_cover_svg(const std::vector<CoverCurve>& curves);

// Commands. Each accepts a persisted run or a raw log.

struct InputOptions {
  std::filesystem::path input;
  std::optional<std::filesystem::path> gold;
};

enum class TableFormat { kTable, kTsv };

std::string cmd_compute(const InputOptions& input, const ReportOptions& options,
                        TableFormat format);

/// Writes cover_<model>.tsv, pass_<model>.tsv, cover.svg and pass.svg.
/// Returns the written paths.
std::vector<std::filesystem::path> cmd_curves(const InputOptions& input,
                                              const ReportOptions& options,
                                              const std::filesystem::path& out_dir);

std::string cmd_dominance(const InputOptions& input, const ReportOptions& options);

/// Parses and aggregates a raw log, then persists it. Returns the manifest.
RunManifest cmd_ingest(const InputOptions& input,
                       const std::filesystem::path& output);

enum class SimulateKind { kGuesser, kToyA, kToyB, kToyAB, kProfile };

struct SimulateOptions {
  SimulateKind kind = SimulateKind::kToyAB;
  ProfileSpec profile;  // kProfile; model/tasks/seed also used by the toys
  GuesserSpec guesser;  // kGuesser
  std::uint64_t trials = 64;
  std::uint64_t seed = kDefaultSeed;
  /// kProfile only: exact-count placement instead of Bernoulli draws. The
  /// toy kinds always use exact counts.
  bool exact_counts = false;
  std::filesystem::path output;
};

/// Writes a per-completion log. Returns a description of the exact profiles
/// used (distinct p values with task counts).
std::string cmd_simulate(const SimulateOptions& options);

/// One JSON line in the per-completion schema.
std::string record_line(const SampleRecord& record);

}  // namespace covtau
