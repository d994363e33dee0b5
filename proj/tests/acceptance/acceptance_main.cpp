// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "covtau/curves.hpp"
#include "covtau/dominance.hpp"
#include "covtau/ingest.hpp"
#include "covtau/metrics.hpp"
#include "covtau/report.hpp"
#include "covtau/synth.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace {

using namespace covtau;
using covtau::testing::R;

struct Outcome {
  bool ok = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // zero when the criterion states no runtime bound
  std::function<Outcome()> run;
};

Outcome fail(std::string detail) { return {false, std::move(detail)}; }

Outcome toy_reproduction() {
  const SuccessProfile a = covtau::testing::repeat("A", R(1, 2), 100);
  std::vector<Rational> half;
  for (int i = 0; i < 100; ++i) half.push_back(i < 50 ? R(0) : R(1));
  const SuccessProfile b = covtau::testing::profile_of("B", half);
  if (mean_success(a) != R(1, 2) || mean_success(b) != R(1, 2)) return fail("pass@1 differs from 1/2");
  const std::vector<Rational> taus{R(1, 1000), R(1, 5), R(1, 2), R(501, 1000), R(4, 5), R(1)};
  for (const auto& tau : taus) {
    const Rational want_a = tau <= R(1, 2) ? R(1) : R(0);
    if (cover_at_tau(a, tau) != want_a) return fail("cover(A) wrong at tau=" + to_string(tau));
    if (cover_at_tau(b, tau) != R(1, 2)) return fail("cover(B) wrong at tau=" + to_string(tau));
  }
  const CoverCurve ca = build_cover_curve(a), cb = build_cover_curve(b);
  if (auc_plus_cover(ca, cb) != R(1, 4) || auc_plus_cover(cb, ca) != R(1, 4)) {
    return fail("AUC+ is not 1/4 both ways");
  }

  // The simulated toy log must land on the same counts.
  const auto dir = std::filesystem::temp_directory_path() / "covtau_acceptance";
  std::filesystem::create_directories(dir);
  SimulateOptions opt;
  opt.kind = SimulateKind::kToyAB;
  opt.output = dir / "toy.jsonl";
  cmd_simulate(opt);
  const auto profiles = profiles_of(load_any(opt.output).counts);
  if (profiles.size() != 2 || profiles[0].entries() != a.entries() || mean_success(profiles[1]) != R(1, 2) ||
      cover_at_tau(profiles[1], R(4, 5)) != R(1, 2)) {
    return fail("simulated toy log does not reproduce the constructed profiles");
  }
  return {true, "pass@1 = 1/2 both, AUC+ = 1/4 both ways"};
}

std::vector<SuccessProfile> seeded_profiles() {
  std::vector<SuccessProfile> out;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    out.push_back(covtau::testing::uniform_profile("m", 50, seed));
  }
  return out;
}

Outcome beta_identity() {
  double worst = 0;
  for (const auto& prof : seeded_profiles()) {
    const CoverCurve curve = build_cover_curve(prof);
    for (auto k : power_of_two_grid(10)) {
      worst = std::max(worst, std::fabs(beta_weighted_pass(curve, k) - pass_at_k_exact(prof, k)));
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |diff| = %.3g", worst);
  return {worst <= 1e-9, buf};
}

Outcome uniform_auc_identity() {
  for (const auto& prof : seeded_profiles()) {
    if (uniform_auc(build_cover_curve(prof)) != mean_success(prof)) return fail("mismatch");
  }
  return {true, "exact equality on 100 profiles"};
}

Outcome guesser_degeneracy() {
  GuesserSpec spec;
  spec.support_size = 30;
  const GuesserRun run = simulate_guesser(spec);
  const double pass = pass_at_k_exact(run.profile, 8192);
  const Rational cover = cover_at_tau(run.profile, R(1, 5));
  char buf[96];
  std::snprintf(buf, sizeof buf, "pass@8192 = %.12g, cov@0.2 = %s", pass, to_string(cover).c_str());
  if (pass < 1 - 1e-6 || cover != 0) return fail(buf);

  // The same claim must hold on counts estimated from the simulated trials.
  CountsByModel counts = aggregate(run.records);
  const SuccessProfile est = estimate_success("guesser", counts.at("guesser"));
  if (pass_at_k_exact(est, 8192) < 1 - 1e-6 || cover_at_tau(est, R(1, 5)) != 0) {
    return fail(std::string(buf) + "; estimated profile disagrees");
  }
  return {true, buf};
}

Outcome dominance_transfer() {
  const auto grid = power_of_two_grid(13);
  std::size_t dominated = 0, violations = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const auto [a, b] = covtau::testing::dominated_pair(40, seed);
    if (!check_cover_dominance(build_cover_curve(a), build_cover_curve(b))) continue;
    ++dominated;
    for (auto k : grid) violations += pass_at_k_exact(a, k) < pass_at_k_exact(b, k);
  }
  return {violations == 0 && dominated == 200,
          std::to_string(dominated) + " dominated pairs, " + std::to_string(violations) + " violations"};
}

Outcome unbiased_oracle() {
  std::size_t cases = 0;
  for (std::uint64_t n = 1; n <= 10; ++n) {
    for (std::uint64_t c = 0; c <= n; ++c) {
      for (std::uint64_t k = 1; k <= n; ++k) {
        const Rational want = covtau::oracle::subset_pass_rate(n, c, k);
        const TaskCounts tc{"t", n, c};
        if (pass_at_k_unbiased_rational(tc, k) != want) {
          return fail("rational estimator wrong at n=" + std::to_string(n) + " c=" + std::to_string(c) +
                      " k=" + std::to_string(k));
        }
        if (std::fabs(pass_at_k_unbiased(tc, k) - to_double(want)) > 1e-12) {
          return fail("floating estimator off at n=" + std::to_string(n) + " c=" + std::to_string(c) +
                      " k=" + std::to_string(k));
        }
        ++cases;
      }
    }
  }
  return {true, std::to_string(cases) + " (n, c, k) cases"};
}

Outcome majority_equivalence() {
  const std::uint64_t shared[] = {4, 8, 32};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const std::uint64_t n = shared[seed % 3];
    std::vector<TaskCounts> counts;
    for (std::size_t i = 0; i < 40; ++i) {
      counts.push_back({task_name(i, 40), n, Stream::keyed(seed, i, 5).below(n + 1)});
    }
    const SuccessProfile prof = estimate_success("m", counts);
    if (maj_at_n(counts) != cover_at_tau(prof, majority_threshold(n))) {
      return fail("mismatch for seed " + std::to_string(seed));
    }
  }
  return {true, "50 count sets"};
}

Outcome antisymmetry() {
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SuccessProfile a = covtau::testing::random_counts_profile("A", 30, 2 * seed);
    const SuccessProfile b = covtau::testing::random_counts_profile("B", 30, 2 * seed + 1);
    const CoverCurve ca = build_cover_curve(a), cb = build_cover_curve(b);
    const double lhs = to_double(auc_plus_cover(ca, cb)) - to_double(auc_plus_cover(cb, ca));
    const double rhs = to_double(mean_success(a)) - to_double(mean_success(b));
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max |diff| = %.3g", worst);
  return {worst <= 1e-12, buf};
}

Outcome pipeline_determinism() {
  const auto root = std::filesystem::temp_directory_path() / "covtau_acceptance";
  std::vector<std::string> logs, runs, reports;
  for (int pass = 0; pass < 2; ++pass) {
    const auto dir = root / ("pipeline" + std::to_string(pass));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    SimulateOptions sim;
    sim.kind = SimulateKind::kProfile;
    sim.profile.generator = Generator::kUniformRandom;
    sim.profile.tasks = 60;
    sim.profile.seed = 17;
    sim.trials = 48;
    sim.seed = 23;
    sim.output = dir / "log.jsonl";
    cmd_simulate(sim);
    cmd_ingest({sim.output, std::nullopt}, dir / "run.jsonl");
    ReportOptions opt;
    opt.bootstrap = 20;
    reports.push_back(cmd_compute({dir / "run.jsonl", std::nullopt}, opt, TableFormat::kTsv));
    logs.push_back(read_file(sim.output));
    runs.push_back(read_file(dir / "run.jsonl"));
  }
  if (logs[0] != logs[1]) return fail("simulated logs differ");
  if (runs[0] != runs[1]) return fail("persisted runs differ");
  if (reports[0] != reports[1]) return fail("reports differ");
  return {true, "log, run and report byte-identical (" + std::to_string(runs[0].size()) + " run bytes)"};
}

Outcome table_ranking() {
  const std::map<std::string, double> omega_pass1{{"base", 8.34},   {"GRPO", 17.86},   {"GSPO", 18.00},
                                                  {"PPO (GAE)", 18.38}, {"KL-Cov", 28.34}, {"Unlikeliness", 17.02}};
  const auto ranked = rank_models(omega_pass1);
  const bool ok = ranked.front().model == "KL-Cov" && ranked.back().model == "base";
  std::string order;
  for (const auto& e : ranked) order += (order.empty() ? "" : " > ") + e.model;
  return {ok, order};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "toy A/B reproduction", 1.0, toy_reproduction},
      {2, "beta-weighted identity", 5.0, beta_identity},
      {3, "uniform AUC equals pass@1", 0.0, uniform_auc_identity},
      {4, "guesser degeneracy", 1.0, guesser_degeneracy},
      {5, "dominance transfer", 10.0, dominance_transfer},
      {6, "unbiased estimator oracle", 5.0, unbiased_oracle},
      {7, "maj equals cover at majority threshold", 0.0, majority_equivalence},
      {8, "antisymmetric difference", 0.0, antisymmetry},
      {9, "pipeline determinism", 0.0, pipeline_determinism},
      {10, "table ranking fixture", 0.0, table_ranking},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string detail = out.detail;
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      out.ok = false;
      detail += "; over the time limit";
    }
    if (!out.ok) ++failures;
    if (c.limit_seconds > 0) {
      std::printf("criterion %2d %s: %s (%.3f s, limit %.0f s) %s\n", c.id, out.ok ? "PASS" : "FAIL",
                  c.name.c_str(), secs, c.limit_seconds, detail.c_str());
    } else {
      std::printf("criterion %2d %s: %s (%.3f s) %s\n", c.id, out.ok ? "PASS" : "FAIL", c.name.c_str(),
                  secs, detail.c_str());
    }
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
