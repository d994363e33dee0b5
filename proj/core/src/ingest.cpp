#include "covtau/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include <nlohmann/json.hpp>

#include "covtau/error.hpp"

namespace covtau {

using nlohmann::json;

namespace {

constexpr const char* kRunFormat = "covtau-run/1";

bool is_space(char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; }

bool is_digit(char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

[[noreturn]] void line_error(std::size_t line, const std::string& why) {
  throw Error("line " + std::to_string(line) + ": " + why);
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) line_error(line, std::string("missing '") + key + "'");
  if (!it->is_string()) line_error(line, std::string("'") + key + "' must be a string");
  std::string value = it->get<std::string>();
  if (value.empty()) line_error(line, std::string("'") + key + "' is empty");
  return value;
}

std::uint64_t require_count(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) line_error(line, std::string("missing '") + key + "'");
  if (!it->is_number_unsigned()) {
    line_error(line, std::string("'") + key + "' must be a non-negative integer");
  }
  return it->get<std::uint64_t>();
}

json parse_line(std::string_view text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    line_error(line, std::string("malformed JSON (") + e.what() + ")");
  }
  if (!obj.is_object()) line_error(line, "expected a JSON object");
  return obj;
}

std::string count_lines(const CountsByModel& counts) {
  std::string out;
  for (const auto& [model, list] : counts) {
    for (const auto& tc : list) {
      out += json{{"model", model}, {"task", tc.task}, {"n", tc.n}, {"c", tc.c}}.dump();
      out += '\n';
    }
  }
  return out;
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char ch : trim(text)) {
    if (is_space(ch)) {
      pending_space = true;
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  }
  return out;
}

std::optional<double> parse_number(std::string_view text) {
  const std::string_view s = trim(text);
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && is_digit(s[i])) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && is_digit(s[i])) ++i, ++digits;
  }
  if (digits == 0) return std::nullopt;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp_digits = 0;
    while (i < s.size() && is_digit(s[i])) ++i, ++exp_digits;
    if (exp_digits == 0) return std::nullopt;
  }
  if (i != s.size()) return std::nullopt;
  const std::string owned(s);
  const double value = std::strtod(owned.c_str(), nullptr);
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

bool grade(std::string_view answer, std::string_view gold) {
  if (trim(gold).empty()) throw Error("gold answer is empty");
  if (trim(answer).empty()) return false;
  const auto a = parse_number(answer);
  const auto g = parse_number(gold);
  if (a && g) {
    const double scale = std::max(std::fabs(*a), std::fabs(*g));
    return std::fabs(*a - *g) <= std::max(1e-9 * scale, 1e-12);
  }
  return normalize_answer(answer) == normalize_answer(gold);
}

std::string_view to_string(GradingMode mode) {
  switch (mode) {
    case GradingMode::kVerdicts: return "verdicts";
    case GradingMode::kGraded: return "graded";
    case GradingMode::kMixed: return "mixed";
    case GradingMode::kAggregated: return "aggregated";
  }
  return "unknown";
}

namespace {

GradingMode grading_from_string(const std::string& s) {
  for (auto mode : {GradingMode::kVerdicts, GradingMode::kGraded, GradingMode::kMixed,
                    GradingMode::kAggregated}) {
    if (to_string(mode) == s) return mode;
  }
  throw Error("unknown grading mode '" + s + "'");
}

}  // namespace

ParsedLog parse_records(std::istream& in, const GoldAnswers* gold) {
  ParsedLog log;
  std::optional<LogForm> form;
  std::size_t flagged = 0;
  std::size_t graded = 0;
  std::map<std::string, std::map<std::string, TaskCounts>> aggregated;

  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    const json obj = parse_line(text, line);
    const bool has_agg = obj.contains("n") || obj.contains("c");
    const bool has_sample = obj.contains("sample_index");
    if (has_agg && has_sample) line_error(line, "mixes aggregated and per-completion fields");
    if (!has_agg && !has_sample) {
      line_error(line, "neither 'sample_index' (per-completion) nor 'n'/'c' (aggregated)");
    }
    const LogForm this_form = has_agg ? LogForm::kAggregated : LogForm::kPerCompletion;
    if (form && *form != this_form) {
      line_error(line, "mixed schemas: file started in the other record form");
    }
    form = this_form;

    std::string model = require_string(obj, "model", line);
    std::string task = require_string(obj, "task", line);
    if (this_form == LogForm::kAggregated) {
      TaskCounts tc{task, require_count(obj, "n", line), require_count(obj, "c", line)};
      if (tc.n < 1) line_error(line, "'n' must be >= 1");
      if (tc.c > tc.n) line_error(line, "'c' exceeds 'n'");
      auto [it, inserted] = aggregated[model].emplace(task, tc);
      if (!inserted) {
        line_error(line, "duplicate aggregated entry (model='" + model + "', task='" + task + "')");
      }
      continue;
    }

    SampleRecord rec{std::move(model), std::move(task), require_count(obj, "sample_index", line),
                     std::nullopt, false};
    if (const auto it = obj.find("answer"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) line_error(line, "'answer' must be a string");
      rec.answer = it->get<std::string>();
    }
    if (const auto it = obj.find("correct"); it != obj.end() && !it->is_null()) {
      if (!it->is_boolean()) line_error(line, "'correct' must be a boolean");
      rec.correct = it->get<bool>();
      ++flagged;
    } else {
      const auto g = gold ? gold->find(rec.task) : GoldAnswers::const_iterator{};
      if (!rec.answer || !gold || g == gold->end()) {
        line_error(line, "no 'correct' flag and no answer with a gold answer to grade against");
      }
      rec.correct = grade(*rec.answer, g->second);
      ++graded;
    }
    log.records.push_back(std::move(rec));
  }
  if (!form) throw Error("log contains no records");

  log.form = *form;
  if (log.form == LogForm::kAggregated) {
    log.grading = GradingMode::kAggregated;
    for (auto& [model, tasks] : aggregated) {
      auto& list = log.counts[model];
      for (auto& [task, tc] : tasks) list.push_back(std::move(tc));
    }
  } else {
    log.grading = graded == 0   ? GradingMode::kVerdicts
                  : flagged == 0 ? GradingMode::kGraded
                                 : GradingMode::kMixed;
    log.counts = aggregate(log.records);
  }
  return log;
}

GoldAnswers parse_gold(std::istream& in) {
  GoldAnswers gold;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    const json obj = parse_line(text, line);
    std::string task = require_string(obj, "task", line);
    std::string answer = require_string(obj, "answer", line);
    if (trim(answer).empty()) line_error(line, "gold answer is blank");
    if (!gold.emplace(task, std::move(answer)).second) {
      line_error(line, "second gold answer for task '" + task + "'");
    }
  }
  return gold;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

RunManifest make_manifest(const CountsByModel& counts, std::vector<SourceDigest> sources,
                          GradingMode grading) {
  RunManifest m;
  m.run_id = sha256_hex(count_lines(counts)).substr(0, 16);
  m.sources = std::move(sources);
  m.grading = grading;
  std::set<std::string> tasks;
  for (const auto& [model, list] : counts) {
    m.models.push_back(model);
    for (const auto& tc : list) {
      m.record_count += tc.n;
      m.trials[model][tc.task] = tc.n;
      tasks.insert(tc.task);
    }
  }
  m.tasks.assign(tasks.begin(), tasks.end());
  return m;
}

void validate_run(const Run& run) {
  if (run.counts.empty()) throw Error("run has no models");
  const RunManifest expected = make_manifest(run.counts, run.manifest.sources, run.manifest.grading);
  const auto& m = run.manifest;
  if (m.record_count != expected.record_count) {
    throw Error("manifest record count " + std::to_string(m.record_count) +
                " does not match the counts (" + std::to_string(expected.record_count) + ")");
  }
  if (m.models != expected.models) throw Error("manifest model list does not match the counts");
  if (m.tasks != expected.tasks) throw Error("manifest task list does not match the counts");
  if (m.trials != expected.trials) throw Error("manifest trial counts do not match the counts");
  if (m.run_id != expected.run_id) throw Error("manifest run id does not match the counts");
  for (const auto& [model, list] : run.counts) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (list[i].n < 1 || list[i].c > list[i].n) {
        throw Error("invalid counts for (model='" + model + "', task='" + list[i].task + "')");
      }
      if (i > 0 && list[i - 1].task >= list[i].task) {
        throw Error("counts for model '" + model + "' are not sorted by unique task");
      }
    }
  }
}

std::string serialize_run(const Run& run) {
  validate_run(run);
  const auto& m = run.manifest;
  json sources = json::array();
  for (const auto& s : m.sources) sources.push_back({{"name", s.name}, {"sha256", s.sha256}});
  json header = {{"manifest",
                  {{"format", kRunFormat},
                   {"run_id", m.run_id},
                   {"sources", sources},
                   {"record_count", m.record_count},
                   {"models", m.models},
                   {"tasks", m.tasks},
                   {"trials", m.trials},
                   {"grading", std::string(to_string(m.grading))}}}};
  return header.dump() + "\n" + count_lines(run.counts);
}

Run deserialize_run(std::istream& in) {
  std::string text;
  std::size_t line = 0;
  std::optional<json> header;
  while (!header && std::getline(in, text)) {
    ++line;
    if (!trim(text).empty()) header = parse_line(text, line);
  }
  if (!header || !header->contains("manifest")) throw Error("run file has no manifest header");
  Run run;
  try {
    const json& m = header->at("manifest");
    if (m.at("format").get<std::string>() != kRunFormat) {
      throw Error("unsupported run format '" + m.at("format").get<std::string>() + "'");
    }
    run.manifest.run_id = m.at("run_id").get<std::string>();
    for (const auto& s : m.at("sources")) {
      run.manifest.sources.push_back({s.at("name").get<std::string>(), s.at("sha256").get<std::string>()});
    }
    run.manifest.record_count = m.at("record_count").get<std::uint64_t>();
    run.manifest.models = m.at("models").get<std::vector<std::string>>();
    run.manifest.tasks = m.at("tasks").get<std::vector<std::string>>();
    run.manifest.trials =
        m.at("trials").get<std::map<std::string, std::map<std::string, std::uint64_t>>>();
    run.manifest.grading = grading_from_string(m.at("grading").get<std::string>());
  } catch (const json::exception& e) {
    line_error(line, std::string("malformed manifest (") + e.what() + ")");
  }
  // The remainder is an aggregated log; parse it with line numbers intact.
  std::stringstream rest;
  for (std::size_t i = 0; i < line; ++i) rest << '\n';
  rest << in.rdbuf();
  const ParsedLog body = parse_records(rest);
  if (body.form != LogForm::kAggregated) throw Error("run body must use the aggregated form");
  run.counts = body.counts;
  validate_run(run);
  return run;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "': " + std::strerror(errno));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "': " + std::strerror(errno));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed: " + std::strerror(errno));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

void persist_run(const Run& run, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_run(run));
}

Run load_run(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return deserialize_run(in);
}

namespace {

bool looks_like_run(const std::string& bytes) {
  std::istringstream in(bytes);
  std::string text;
  while (std::getline(in, text)) {
    if (trim(text).empty()) continue;
    const json obj = json::parse(text, nullptr, false);
    return obj.is_object() && obj.contains("manifest");
  }
  return false;
}

}  // namespace

Run load_any(const std::filesystem::path& path, const std::optional<std::filesystem::path>& gold) {
  const std::string bytes = read_file(path);
  if (looks_like_run(bytes)) {
    std::istringstream in(bytes);
    return deserialize_run(in);
  }
  std::vector<SourceDigest> sources{{path.filename().string(), sha256_hex(bytes)}};
  GoldAnswers answers;
  if (gold) {
    const std::string gold_bytes = read_file(*gold);
    std::istringstream gin(gold_bytes);
    try {
      answers = parse_gold(gin);
    } catch (const Error& e) {
      throw Error(gold->string() + ": " + e.what());
    }
    sources.push_back({gold->filename().string(), sha256_hex(gold_bytes)});
  }
  std::istringstream in(bytes);
  ParsedLog log;
  try {
    log = parse_records(in, gold ? &answers : nullptr);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  Run run;
  run.counts = std::move(log.counts);
  run.manifest = make_manifest(run.counts, std::move(sources), log.grading);
  return run;
}

std::vector<SuccessProfile> profiles_of(const CountsByModel& counts) {
  std::vector<SuccessProfile> out;
  for (const auto& [model, list] : counts) out.push_back(estimate_success(model, list));
  return out;
}

}  // namespace covtau
