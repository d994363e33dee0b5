#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "covtau/metrics.hpp"

namespace covtau {

using GoldAnswers = std::map<std::string, std::string>;

/// Normalized text: trimmed, ASCII case-folded, internal whitespace runs
/// collapsed to one space.
std::string normalize_answer(std::string_view text);

/// Parses optional sign, digits, optional fraction, optional exponent.
/// Anything else (fraction bars, separators, trailing text) is not a number.
std::optional<double> parse_number(std::string_view text);

/// Normalized equality; numbers compare with relative tolerance 1e-9
/// (absolute 1e-12 near zero).
bool grade(std::string_view answer, std::string_view gold);

enum class LogForm { kPerCompletion, kAggregated };

enum class GradingMode { kVerdicts, kGraded, kMixed, kAggregated };

std::string_view to_string(GradingMode mode);

/// A parsed log, in whichever of the two line forms the file used.
struct ParsedLog {
  LogForm form = LogForm::kPerCompletion;
  std::vector<SampleRecord> records;  // per-completion form
  CountsByModel counts;               // aggregated form, or aggregate(records)
  GradingMode grading = GradingMode::kVerdicts;
};

/// One JSON object per line. Per-completion lines carry model, task,
/// sample_index and optionally correct / answer; aggregated lines carry
/// model, task, n, c. Blank lines are skipped. An explicit `correct` wins;
/// otherwise the answer is graded against `gold`.
ParsedLog parse_records(std::istream& in, const GoldAnswers* gold = nullptr);

/// Lines of {"task": ..., "answer": ...}.
GoldAnswers parse_gold(std::istream& in);

struct SourceDigest {
  std::string name;
  std::string sha256;

  friend bool operator==(const SourceDigest&, const SourceDigest&) = default;
};

struct RunManifest {
  std::string run_id;
  std::vector<SourceDigest> sources;
  std::uint64_t record_count = 0;
  std::vector<std::string> models;
  std::vector<std::string> tasks;
  std::map<std::string, std::map<std::string, std::uint64_t>> trials;
  GradingMode grading = GradingMode::kAggregated;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

struct Run {
  RunManifest manifest;
  CountsByModel counts;
};

std::string sha256_hex(std::string_view bytes);

/// Manifest derived from counts; run_id is a digest of the counts.
RunManifest make_manifest(const CountsByModel& counts,
                          std::vector<SourceDigest> sources, GradingMode grading);

/// Rejects a manifest that disagrees with the counts.
void validate_run(const Run& run);

/// Canonical bytes of a persisted run: a manifest header line followed by
/// aggregated lines sorted by (model, task).
std::string serialize_run(const Run& run);

Run deserialize_run(std::istream& in);

/// Writes atomically (temporary file, then rename).
void persist_run(const Run& run, const std::filesystem::path& path);

Run load_run(const std::filesystem::path& path);

/// Loads a persisted run, or parses and aggregates a raw log on the fly.
Run load_any(const std::filesystem::path& path,
             const std::optional<std::filesystem::path>& gold = std::nullopt);

/// One profile per model, in model order.
std::vector<SuccessProfile> profiles_of(const CountsByModel& counts);

std::string read_file(const std::filesystem::path& path);

/// Atomic write: temporary sibling, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace covtau
