// covtau: reliability-thresholded coverage metrics from sampled completion logs.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "covtau/error.hpp"
#include "covtau/ingest.hpp"
#include "covtau/report.hpp"

namespace {

using namespace covtau;

std::vector<Rational> parse_rationals(const std::vector<std::string>& items, const std::string& flag) {
  std::vector<Rational> out;
  for (const auto& s : items) {
    try {
      out.push_back(parse_rational(s));
    } catch (const Error& e) {
      throw Error(flag + ": " + e.what());
    }
  }
  return out;
}

Rational parse_one(const std::string& text, const std::string& flag) {
  return parse_rationals({text}, flag).front();
}

Rational parse_probability(const std::string& text, const std::string& flag) {
  Rational p = parse_one(text, flag);
  if (p < 0 || p > 1) throw Error(flag + ": " + text + " is outside [0, 1]");
  return p;
}

struct CommonFlags {
  std::string input;
  std::string gold;
  std::vector<std::string> models;
  std::vector<std::string> taus;
  std::vector<std::uint64_t> ks;
  std::uint64_t seed = kDefaultSeed;
  std::size_t bootstrap = 0;
  std::string aggregation = "pooled";
  std::string format = "table";
  std::string output;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_output_file) {
  cmd->add_option("-i,--input", f.input, "Completion log or persisted run (JSON lines)")->required();
  cmd->add_option("--gold", f.gold, "Gold answers (JSON lines of task, answer)");
  cmd->add_option("--models", f.models, "Comma-separated model filter")->delimiter(',');
  cmd->add_option("--tau", f.taus, "Comma-separated reliability thresholds (default 0.2,0.8)")
      ->delimiter(',');
  cmd->add_option("--k", f.ks, "Comma-separated ascending k grid (default 1,2,4,...,8192)")
      ->delimiter(',');
  cmd->add_option("--seed", f.seed, "Seed for bootstrap resampling");
  cmd->add_option("--bootstrap", f.bootstrap,
                  "Task resamples for percentile bands (0 = off; 1000 is the usual choice)");
  cmd->add_option("--aggregation", f.aggregation,
                  "pooled, or per-group (average over task-id prefixes before '/')")
      ->check(CLI::IsMember({"pooled", "per-group"}));
  if (with_output_file) {
    cmd->add_option("-o,--output", f.output, "Write to this file instead of stdout");
  }
}

InputOptions input_of(const CommonFlags& f) {
  InputOptions in{f.input, std::nullopt};
  if (!f.gold.empty()) in.gold = f.gold;
  return in;
}

ReportOptions report_of(const CommonFlags& f) {
  ReportOptions o;
  if (!f.taus.empty()) o.taus = parse_rationals(f.taus, "--tau");
  if (!f.ks.empty()) o.ks = f.ks;
  o.models = f.models;
  o.seed = f.seed;
  o.bootstrap = f.bootstrap;
  o.aggregation = f.aggregation == "per-group" ? Aggregation::kPerGroup : Aggregation::kPooled;
  return o;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
  } else {
    write_file_atomic(output, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cover@tau, Pass@k and AUC+ metrics for sampled completion logs"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  CommonFlags compute_flags;
  auto* compute = app.add_subcommand("compute", "Per-model metric table");
  add_common(compute, compute_flags, true);
  compute->add_option("--format", compute_flags.format, "table (x100, ranked) or tsv (raw)")
      ->check(CLI::IsMember({"table", "tsv"}));

  CommonFlags curves_flags;
  auto* curves = app.add_subcommand("curves", "Cover and pass curve tables plus SVG plots");
  add_common(curves, curves_flags, false);
  curves->add_option("-o,--output-dir", curves_flags.output, "Output directory")->required();

  CommonFlags dominance_flags;
  auto* dominance = app.add_subcommand("dominance", "Pairwise AUC+, dominance, crossovers, rankings");
  add_common(dominance, dominance_flags, true);

  std::string ingest_input, ingest_gold, ingest_output;
  auto* ingest = app.add_subcommand("ingest", "Parse, grade and persist a completion log");
  ingest->add_option("-i,--input", ingest_input, "Completion log (JSON lines)")->required();
  ingest->add_option("--gold", ingest_gold, "Gold answers for records without a verdict");
  ingest->add_option("-o,--output", ingest_output, "Persisted run file")->required();

  SimulateOptions sim;
  std::string kind = "toy-ab";
  std::string p_text = "1/2", low_text = "0", high_text = "1", ratio_text = "1/2";
  std::vector<std::string> values_text;
  std::string sim_output;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic per-completion log");
  simulate->add_option("--kind", kind, "guesser, toy-a, toy-b, toy-ab, constant, two-point, uniform, list")
      ->check(CLI::IsMember({"guesser", "toy-a", "toy-b", "toy-ab", "constant", "two-point", "uniform", "list"}));
  simulate->add_option("--model", sim.profile.model, "Model name for constant/two-point/uniform/list");
  simulate->add_option("--tasks", sim.profile.tasks, "Number of tasks");
  simulate->add_option("--trials", sim.trials, "Completions per task");
  simulate->add_option("--seed", sim.seed, "Generator seed");
  simulate->add_option("--support", sim.guesser.support_size, "Guesser answer-space size");
  simulate->add_option("--p", p_text, "constant: success probability");
  simulate->add_option("--low", low_text, "two-point: low probability");
  simulate->add_option("--high", high_text, "two-point: high probability");
  simulate->add_option("--ratio", ratio_text, "two-point: fraction of tasks at the low value");
  simulate->add_option("--resolution", sim.profile.resolution, "uniform: p = u / resolution");
  simulate->add_option("--values", values_text, "list: comma-separated probabilities")->delimiter(',');
  simulate->add_flag("--exact", sim.exact_counts,
                     "Place exactly p*n correct trials per task instead of Bernoulli draws");
  simulate->add_option("-o,--output", sim_output, "Output log file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compute) {
      emit(cmd_compute(input_of(compute_flags), report_of(compute_flags),
                       compute_flags.format == "tsv" ? TableFormat::kTsv : TableFormat::kTable),
           compute_flags.output);
    } else if (*curves) {
      for (const auto& path : cmd_curves(input_of(curves_flags), report_of(curves_flags), curves_flags.output)) {
        std::cout << path.string() << "\n";
      }
    } else if (*dominance) {
      emit(cmd_dominance(input_of(dominance_flags), report_of(dominance_flags)), dominance_flags.output);
    } else if (*ingest) {
      InputOptions in{ingest_input, std::nullopt};
      if (!ingest_gold.empty()) in.gold = ingest_gold;
      const RunManifest m = cmd_ingest(in, ingest_output);
      std::cout << "run " << m.run_id << ": " << m.models.size() << " model(s), " << m.tasks.size()
                << " task(s), " << m.record_count << " record(s), grading " << to_string(m.grading)
                << " -> " << ingest_output << "\n";
    } else if (*simulate) {
      if (sim.trials < 1) throw Error("--trials must be >= 1");
      if (sim.profile.tasks < 1) throw Error("--tasks must be >= 1");
      if (sim.guesser.support_size < 2) throw Error("--support must be >= 2");
      if (sim.profile.resolution < 1) throw Error("--resolution must be >= 1");
      sim.output = sim_output;
      sim.profile.seed = sim.seed;
      sim.guesser.tasks = sim.profile.tasks;
      if (simulate->count("--model") > 0) sim.guesser.model = sim.profile.model;
      if (kind == "guesser") {
        sim.kind = SimulateKind::kGuesser;
        if (simulate->count("--tasks") == 0) sim.guesser.tasks = 30;
        if (simulate->count("--trials") == 0) sim.trials = 8192;
      } else if (kind == "toy-a") {
        sim.kind = SimulateKind::kToyA;
      } else if (kind == "toy-b") {
        sim.kind = SimulateKind::kToyB;
      } else if (kind == "toy-ab") {
        sim.kind = SimulateKind::kToyAB;
      } else {
        sim.kind = SimulateKind::kProfile;
        if (kind == "constant") {
          sim.profile.generator = Generator::kConstant;
          sim.profile.p = parse_probability(p_text, "--p");
        } else if (kind == "two-point") {
          sim.profile.generator = Generator::kTwoPoint;
          sim.profile.low = parse_probability(low_text, "--low");
          sim.profile.high = parse_probability(high_text, "--high");
          sim.profile.ratio = parse_probability(ratio_text, "--ratio");
        } else if (kind == "uniform") {
          sim.profile.generator = Generator::kUniformRandom;
        } else {
          sim.profile.generator = Generator::kUserList;
          if (values_text.empty()) throw Error("--values: list generator needs at least one value");
          for (const auto& v : values_text) sim.profile.values.push_back(parse_probability(v, "--values"));
        }
      }
      std::cout << cmd_simulate(sim);
    }
  } catch (const std::exception& e) {
    std::cerr << "covtau: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
