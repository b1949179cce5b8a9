// klhull command-line tool: gen, round, verify, report.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "klhull/klhull.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kParse = 2,
  kInvalidInstance = 3,
  kBudgetExhausted = 4,
  kBoundViolated = 5,
};

struct Global {
  int threads = 1;
  bool quiet = false;
};

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    std::cout << text;
  else
    klhull::write_file(path, text);
}

struct GenArgs {
  std::size_t n = 0, k = 0;
  std::uint64_t seed = 0;
  double cap = 100.0;
  bool witness = false;
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  const klhull::Instance inst = klhull::generate_instance(a.n, a.k, a.seed, a.cap, a.witness);
  emit(a.out, klhull::to_json(inst).dump(2) + "\n");
  return kOk;
}

struct RoundArgs {
  std::string instance;
  bool rank_one = false;
  int rank_m = 0;
  int budget = 0;
  std::uint64_t seed = 0;
  double tol = klhull::kDefaults.fw_gap;
  bool witness_random = false;
  std::string out;
};

int cmd_round(const RoundArgs& a, const Global& g) {
  const klhull::Instance inst = klhull::load_instance(a.instance);
  klhull::PipelineOptions opt;
  opt.m = a.rank_one ? 0 : a.rank_m;
  opt.seed = a.seed;
  opt.budget = a.budget;
  opt.tol = a.tol;
  opt.threads = g.threads;
  opt.witness_random = a.witness_random;
  const klhull::PipelineRun run = klhull::run_pipeline(inst, opt);
  const klhull::ResultRecord& r = run.record;
  emit(a.out, r.to_json().dump(2) + "\n");

  const bool within = r.kl <= r.bound + r.fw_gap;
  if (!g.quiet) {
    std::fprintf(stderr,
                 "%s%s: kl %.6g, bound %.6g (+ fw_gap %.2g), accepted %d/%d trials, "
                 "%ld samples, digest %s\n",
                 r.mode.c_str(), r.mode == "rank-m" ? (" m=" + std::to_string(r.m)).c_str() : "",
                 r.kl, r.bound, r.fw_gap, r.accepted_trials, r.trials, r.samples_drawn,
                 r.digest.c_str());
    if (!r.accepted) std::fprintf(stderr, "budget exhausted: no trial met the acceptance thresholds\n");
  }
  if (!r.accepted) return kBudgetExhausted;
  return within ? kOk : kBoundViolated;
}

struct VerifyArgs {
  std::string suite;
  std::uint64_t seed = 0;
  double samples = 0.0;
  int instances = 100;
  std::string json;
};

int cmd_verify(const VerifyArgs& a, const Global& g) {
  klhull::SuiteOptions opt;
  opt.seed = a.seed;
  opt.samples = static_cast<long>(a.samples);
  opt.threads = g.threads;
  opt.instances = a.instances;
  const klhull::SuiteResult s = klhull::run_suite(a.suite, opt);
  if (!g.quiet) {
    for (const auto& row : s.rows)
      std::printf("%-4s %-64s value %-14.8g reference %.8g\n", row.satisfied ? "ok" : "FAIL",
                  row.name.c_str(), row.value, row.reference);
    for (const auto& note : s.notes) std::printf("note %s\n", note.c_str());
    std::printf("%s: %s\n", s.name.c_str(), s.ok() ? "pass" : "FAIL");
  }
  if (!a.json.empty()) emit(a.json, klhull::suite_json(s).dump(2) + "\n");
  return s.ok() ? kOk : kBoundViolated;
}

struct ReportArgs {
  std::vector<std::string> files;
  std::string mode;
  int m = 0;
  std::string out;
};

int cmd_report(const ReportArgs& a) {
  std::vector<klhull::ResultRecord> records;
  for (const auto& f : a.files) {
    klhull::ResultRecord r = klhull::load_result(f);
    if (!a.mode.empty() && r.mode != a.mode) continue;
    if (a.m > 0 && r.m != a.m) continue;
    records.push_back(std::move(r));
  }
  emit(a.out, klhull::csv_report(std::move(records)));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative-entropy rounding for the convex hull of a quadratic map"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1, 256));
  app.add_flag("--quiet", g.quiet, "Suppress the human-readable summary");

  GenArgs gen;
  auto* sg = app.add_subcommand("gen", "Generate a random instance");
  sg->add_option("--n", gen.n, "Dimension")->required()->check(CLI::PositiveNumber);
  sg->add_option("--k", gen.k, "Number of forms")->required()->check(CLI::PositiveNumber);
  sg->add_option("--seed", gen.seed, "Random seed")->required();
  sg->add_option("--condition-cap", gen.cap, "Upper bound on each condition number")
      ->check(CLI::Range(1.0, 1e300));
  sg->add_flag("--witness", gen.witness, "Include a random hull witness X");
  sg->add_option("--out,-o", gen.out, "Output file (default stdout)");

  RoundArgs rnd;
  auto* sr = app.add_subcommand("round", "Round an instance to a point of the image");
  sr->add_option("instance", rnd.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  auto* r1 = sr->add_flag("--rank-one", rnd.rank_one, "Rank-one rounding");
  auto* rm = sr->add_option("--rank-m", rnd.rank_m, "Rank-m rounding with m points")
                 ->check(CLI::PositiveNumber);
  r1->excludes(rm);
  sr->add_option("--budget", rnd.budget, "Draws (rank one) or batches (rank m)")
      ->check(CLI::PositiveNumber);
  sr->add_option("--seed", rnd.seed, "Random seed")->required();
  sr->add_option("--tol", rnd.tol, "Frank-Wolfe gap tolerance")->check(CLI::PositiveNumber);
  sr->add_flag("--witness-random", rnd.witness_random,
               "Use a random Wishart witness instead of the one in the file");
  sr->add_option("--out,-o", rnd.out, "Result file (default stdout)");

  VerifyArgs ver;
  auto* sv = app.add_subcommand("verify", "Run a verification suite");
  sv->add_option("--suite", ver.suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(klhull::suite_names()));
  sv->add_option("--seed", ver.seed, "Random seed")->required();
  sv->add_option("--samples", ver.samples, "Monte Carlo samples (default per suite)")
      ->check(CLI::Range(1000.0, 1e10));
  sv->add_option("--instances", ver.instances, "Sandwich instances")->check(CLI::PositiveNumber);
  sv->add_option("--json", ver.json, "Write the report as JSON to this file");

  ReportArgs rep;
  auto* sp = app.add_subcommand("report", "Summarize result files as CSV");
  sp->add_option("files", rep.files, "Result JSON files")->required()->check(CLI::ExistingFile);
  sp->add_option("--mode", rep.mode, "Keep only this mode")
      ->check(CLI::IsMember({"rank-one", "rank-m"}));
  sp->add_option("--m", rep.m, "Keep only this m")->check(CLI::PositiveNumber);
  sp->add_option("--out,-o", rep.out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }
  if (sr->parsed() && !rnd.rank_one && rnd.rank_m == 0) {
    std::cerr << "round: pass --rank-one or --rank-m M\n";
    return kParse;
  }

  try {
    if (sg->parsed()) return cmd_gen(gen);
    if (sr->parsed()) return cmd_round(rnd, g);
    if (sv->parsed()) return cmd_verify(ver, g);
    if (sp->parsed()) return cmd_report(rep);
  } catch (const klhull::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const klhull::InvalidArgument& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return kInvalidInstance;
  } catch (const klhull::NotPositiveDefinite& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return kInvalidInstance;
  } catch (const klhull::NotPositiveSemidefinite& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return kInvalidInstance;
  } catch (const klhull::DimensionMismatch& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return kInvalidInstance;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
