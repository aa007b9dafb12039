// Acceptance gate: every release-blocking property of the simulator in one
// binary, one line of output per criterion. A criterion that needs an
// external corpus reports SKIP when the corpus is absent. Exit status is the
// number of failed criteria.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "alstop/engine.hpp"
#include "alstop/eval.hpp"
#include "alstop/experiment.hpp"
#include "alstop/rng.hpp"
#include "alstop/stopping.hpp"
#include "alstop/synth.hpp"
#include "alstop/trace.hpp"
#include "alstop/train.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace alstop;

namespace {

int g_failures = 0;
fs::path g_work;

class Criterion {
 public:
  Criterion(int number, const std::string& name) : number_(number), name_(name) {
    start_ = std::chrono::steady_clock::now();
  }
  void pass(const std::string& detail = "") { finish("PASS", detail); }
  void fail(const std::string& detail) {
    ++g_failures;
    finish("FAIL", detail);
  }
  void skip(const std::string& detail) { finish("SKIP", detail); }
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  void finish(const char* status, const std::string& detail) {
    std::printf("[%d] %-38s %s (%.1fs)%s%s\n", number_, name_.c_str(), status, seconds(),
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
  }
  int number_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const CriterionSummary* find_row(const std::vector<CriterionSummary>& rows,
                                 const std::string& name) {
  for (const auto& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

// ---------------------------------------------------------------- criterion 1

void check_kappa_equivalence() {
  Criterion crit(1, "kappa equals contingency reference");
  Rng rng(11);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng.below(50);
    std::vector<int> a(n), b(n);
    const double correlation = rng.unit();
    const bool make_constant = trial % 97 == 0;  // exercise degenerate paths too
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = make_constant ? 1 : (rng.bernoulli(0.5) ? 1 : -1);
      b[i] = make_constant ? 1 : (rng.bernoulli(correlation) ? a[i] : -a[i]);
    }
    const auto got = kappa_agreement(a, b);
    const auto want = oracle::kappa_contingency(a, b);
    if (got.degenerate != want.degenerate || std::abs(got.kappa - want.kappa) > 1e-12) {
      crit.fail(fmt("trial %.0f: |delta| = %g", trial, std::abs(got.kappa - want.kappa)));
      return;
    }
  }
  if (crit.seconds() >= 5.0) {
    crit.fail(fmt("10000 pairs took %.1fs (budget 5s)", crit.seconds()));
    return;
  }
  crit.pass("10000 pairs within 1e-12");
}

// ---------------------------------------------------------------- criterion 2

void check_solver_oracles() {
  Criterion crit(2, "solvers match independent references");
  Rng rng(17);
  double worst_svm = 0.0, worst_grad = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(49));
    const int dim = 1 + static_cast<int>(rng.below(10));
    const auto data = oracle::random_small_dataset(3000 + static_cast<std::uint64_t>(trial), n, dim);
    std::vector<const SparseExample*> ptrs;
    for (const auto& e : data.examples) ptrs.push_back(&e);

    TrainConfig cfg;
    cfg.kind = LearnerKind::svm;
    cfg.cost = 1.0;
    cfg.tolerance = 1e-8;
    const auto model = train(ptrs, data.dim, cfg);
    const double got = svm_primal_objective(ptrs, model.weights, model.bias, cfg.cost);
    const auto ref = oracle::solve_svm_dual(ptrs, data.dim, cfg.cost, 1e-6, 3000000);
    if (!ref.converged) {
      crit.fail(fmt("dual reference stalled at gap %g on trial %.0f", ref.gap, trial));
      return;
    }
    worst_svm = std::max(worst_svm, std::abs(got - ref.primal));
    if (std::abs(got - ref.primal) > 1e-4) {
      crit.fail(fmt("svm objective off by %g on trial %.0f", std::abs(got - ref.primal), trial));
      return;
    }

    std::vector<double> w(static_cast<std::size_t>(data.dim));
    for (auto& x : w) x = 2.0 * rng.unit() - 1.0;
    const double bias = 2.0 * rng.unit() - 1.0;
    std::vector<double> grad(w.size() + 1);
    maxent_gradient(ptrs, w, bias, 1e-3, grad);
    const auto fd = oracle::fd_maxent_gradient(ptrs, data.dim, w, bias, 1e-3);
    double scale = 1.0;
    for (double g : grad) scale = std::max(scale, std::abs(g));
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double rel = std::abs(grad[i] - fd[i]) / scale;
      worst_grad = std::max(worst_grad, rel);
      if (rel > 1e-5) {
        crit.fail(fmt("gradient coordinate off by %g relative on trial %.0f", rel, trial));
        return;
      }
    }
  }
  if (crit.seconds() >= 60.0) {
    crit.fail(fmt("100 datasets took %.1fs (budget 60s)", crit.seconds()));
    return;
  }
  crit.pass(fmt("worst svm delta %.2e, worst gradient rel %.2e", worst_svm, worst_grad));
}

// ------------------------------------------------------- criteria 3 and 4

std::vector<RunTrace> g_small_traces;  // reused by the dominance check

void check_cutoff_monotonicity() {
  Criterion crit(3, "stricter cutoffs never stop earlier");
  const std::vector<double> cutoffs = {0.97, 0.98, 0.99, 0.995};
  int runs_with_stops = 0;
  for (int run = 0; run < 50; ++run) {
    SynthConfig scfg;
    scfg.n = 600;
    scfg.dim = 80;
    scfg.seed = 100 + static_cast<std::uint64_t>(run);
    const auto data = generate_synthetic(scfg);
    const auto plan = make_folds(scfg.n, 3, 55 + static_cast<std::uint64_t>(run));
    ALConfig cfg;
    cfg.batch_size = 20;
    cfg.seed_size = 100;
    cfg.learner.kind = LearnerKind::svm;
    cfg.sp.stop_set_size = 200;
    cfg.run_seed = 9000 + static_cast<std::uint64_t>(run);
    const auto result = run_active_learning(data, plan.pool_ids(0), plan.test_ids(0), cfg);
    g_small_traces.push_back(result.trace);

    std::vector<double> kappas;
    for (const auto& row : result.trace.rows)
      if (row.kappa) kappas.push_back(*row.kappa);

    std::optional<int> prev;
    bool any = false;
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
      SPConfig sp;
      sp.intensity_cutoff = cutoffs[i];
      const auto stop = sp_first_stop(kappas, sp);
      if (stop) any = true;
      if (i > 0) {
        // prev cutoff is looser: it must stop at or before this one.
        const int prev_it = prev ? *prev : std::numeric_limits<int>::max();
        const int this_it = stop ? *stop : std::numeric_limits<int>::max();
        if (prev_it > this_it) {
          crit.fail(fmt("run %.0f: cutoff %.3f stops later than %.3f", run, cutoffs[i - 1],
                        cutoffs[i]));
          return;
        }
      }
      prev = stop;
    }
    if (any) ++runs_with_stops;
  }
  crit.pass(fmt("50 runs, 4 cutoffs; %.0f runs had at least one stop", runs_with_stops));
}

void check_stability_dominance() {
  Criterion crit(4, "conjunctive rule never beats accuracy-only");
  SummaryOptions opts;  // defaults carry the shared 0.9 initial threshold
  opts.learner = LearnerKind::svm;
  int checked = 0;
  for (const auto& trace : g_small_traces) {
    const auto zwh = replay_first_stop("zwh2008", trace, opts);
    const auto minerr = replay_first_stop("minerr", trace, opts);
    if (zwh) {
      if (!minerr || *minerr > *zwh) {
        crit.fail(fmt("trace %.0f: conjunctive stop %.0f precedes accuracy-only", checked,
                      static_cast<double>(*zwh)));
        return;
      }
    }
    ++checked;
  }
  crit.pass(fmt("%.0f traces checked", checked));
}

// ---------------------------------------------------------------- criterion 5

struct FlagshipOutcome {
  std::string dataset_path;
  double sp_mean_annotations = 0.0;
  double sp_mean_f = 0.0;
};

std::optional<FlagshipOutcome> check_flagship_run() {
  Criterion crit(5, "flagship synthetic cross-validation");
  FlagshipOutcome outcome;
  outcome.dataset_path = (g_work / "flagship.svm").string();
  save_sparse_file(outcome.dataset_path, generate_synthetic(SynthConfig{}));

  ExperimentSpec spec;
  spec.dataset = outcome.dataset_path;
  spec.folds = 10;
  spec.batch_size = 20;
  spec.seed_size = 100;
  spec.out = (g_work / "flagship_out").string();
  const auto result = run_experiment(spec);

  const auto* sp = find_row(result.summary, "sp");
  const auto* sc = find_row(result.summary, "sc2000");
  const auto* all = find_row(result.summary, "all");
  if (!sp || !sc || !all) {
    crit.fail("summary rows missing");
    return std::nullopt;
  }
  for (const auto& f : sp->folds)
    if (f.reason != "fired") {
      crit.fail("sp did not fire on fold " + std::to_string(f.fold) + " (" + f.reason + ")");
      return std::nullopt;
    }
  const double f_gap = std::abs(sp->mean_f - all->mean_f) * 100.0;
  if (f_gap > 1.0) {
    crit.fail(fmt("F at stop %.2f vs full pool %.2f: gap %.2f > 1.0", sp->mean_f * 100.0,
                  all->mean_f * 100.0, f_gap));
    return std::nullopt;
  }
  const double pool_size = 4500.0;
  if (!(sp->mean_annotations <= 0.5 * pool_size)) {
    crit.fail(fmt("sp used %.0f annotations, above half the pool (%.0f)", sp->mean_annotations,
                  0.5 * pool_size));
    return std::nullopt;
  }
  if (!(sc->mean_annotations >= sp->mean_annotations)) {
    crit.fail(fmt("margin exhaustion stopped before sp: %.0f < %.0f", sc->mean_annotations,
                  sp->mean_annotations));
    return std::nullopt;
  }
  if (crit.seconds() >= 600.0) {
    crit.fail(fmt("run took %.0fs (budget 600s)", crit.seconds()));
    return std::nullopt;
  }
  outcome.sp_mean_annotations = sp->mean_annotations;
  outcome.sp_mean_f = sp->mean_f;
  crit.pass(fmt("sp: %.0f of 4500 annotations, F %.2f (full-pool gap %.2f)",
                sp->mean_annotations, sp->mean_f * 100.0, f_gap));
  return outcome;
}

// ---------------------------------------------------------------- criterion 6

void check_spam_corpus() {
  Criterion crit(6, "public spam corpus reproduction");
  const char* root = std::getenv("ALSTOP_SPAMASSASSIN_DIR");
  if (root == nullptr || *root == '\0') {
    crit.skip("set ALSTOP_SPAMASSASSIN_DIR to a class-directory corpus root to enable");
    return;
  }
  ExperimentSpec spec;
  spec.dataset = root;
  spec.format = "classdirs";
  spec.task = "spam";
  spec.folds = 10;
  spec.out = (g_work / "spam_out").string();
  const auto result = run_experiment(spec);
  const auto* sp = find_row(result.summary, "sp");
  if (!sp) {
    crit.fail("sp summary row missing");
    return;
  }
  const double f_points = sp->mean_f * 100.0;
  if (std::abs(f_points - 94.57) > 3.0) {
    crit.fail(fmt("sp F %.2f outside 94.57 +/- 3.0", f_points));
    return;
  }
  if (sp->mean_annotations < 326.0 / 2.0 || sp->mean_annotations > 326.0 * 2.0) {
    crit.fail(fmt("sp annotations %.0f outside [163, 652]", sp->mean_annotations));
    return;
  }
  crit.pass(fmt("sp: %.0f annotations, F %.2f", sp->mean_annotations, f_points));
}

// ---------------------------------------------------------------- criterion 7

void check_probabilistic_learner(const std::string& dataset_path) {
  Criterion crit(7, "probabilistic learner variant");
  ExperimentSpec spec;
  spec.dataset = dataset_path;
  spec.folds = 10;
  spec.learner = "maxent";
  spec.batch_size = 20;
  spec.seed_size = 100;
  spec.out = (g_work / "maxent_out").string();
  const auto result = run_experiment(spec);
  const auto* sp = find_row(result.summary, "sp");
  const auto* sc = find_row(result.summary, "sc2000");
  if (!sp || !sc) {
    crit.fail("summary rows missing");
    return;
  }
  for (const auto& f : sp->folds)
    if (f.reason != "fired") {
      crit.fail("sp did not fire on fold " + std::to_string(f.fold));
      return;
    }
  if (!sc->not_applicable) {
    crit.fail("margin criterion not marked inapplicable");
    return;
  }
  for (const auto& f : sc->folds)
    if (f.reason != "not-applicable") {
      crit.fail("fold " + std::to_string(f.fold) + " reason '" + f.reason + "'");
      return;
    }
  crit.pass(fmt("sp fired on all 10 folds (%.0f annotations, F %.2f)", sp->mean_annotations,
                sp->mean_f * 100.0));
}

// ---------------------------------------------------------------- criterion 8

void check_determinism_and_replay() {
  Criterion crit(8, "byte-exact determinism and replay");
  SynthConfig scfg;
  scfg.n = 360;
  scfg.dim = 60;
  scfg.seed = 12;
  const auto dataset_path = (g_work / "determinism.svm").string();
  save_sparse_file(dataset_path, generate_synthetic(scfg));

  ExperimentSpec spec;
  spec.dataset = dataset_path;
  spec.folds = 3;
  spec.batch_size = 20;
  spec.seed_size = 60;
  spec.stop_set_size = 120;
  spec.seed = 99;
  spec.out = (g_work / "det_a").string();
  const auto a = run_experiment(spec);
  spec.out = (g_work / "det_b").string();
  const auto b = run_experiment(spec);
  for (std::size_t i = 0; i < a.trace_paths.size(); ++i)
    if (read_file(a.trace_paths[i]) != read_file(b.trace_paths[i])) {
      crit.fail("re-run produced a different trace for fold " + std::to_string(i));
      return;
    }

  const auto replay = replay_experiment((g_work / "det_a" / "manifest.json").string(),
                                        (g_work / "det_replay").string());
  if (!replay.ok) {
    crit.fail("manifest replay mismatched: " + replay.message);
    return;
  }

  // Rule-parameter sweeps must agree exactly with full reruns.
  ExperimentSpec sweep = spec;
  sweep.sweep = "intensity";
  sweep.sweep_values = {0.97, 0.99};
  sweep.out = (g_work / "det_sweep_i").string();
  const auto intensity_rows = sweep_experiment(sweep);
  for (std::size_t i = 0; i < intensity_rows.size(); ++i) {
    ExperimentSpec full = spec;
    full.kappa_cutoff = sweep.sweep_values[i];
    full.out = (g_work / ("det_full_i" + std::to_string(i))).string();
    const auto fresh = run_experiment(full);
    const auto* sp = find_row(fresh.summary, "sp");
    if (sp == nullptr || sp->mean_annotations != intensity_rows[i].mean_annotations ||
        sp->mean_f != intensity_rows[i].mean_f) {
      crit.fail(fmt("intensity %.2f: swept %.1f vs fresh %.1f annotations",
                    sweep.sweep_values[i], intensity_rows[i].mean_annotations,
                    sp->mean_annotations));
      return;
    }
  }

  ExperimentSpec wsweep = spec;
  wsweep.sweep = "longevity";
  wsweep.sweep_values = {2, 4};
  wsweep.out = (g_work / "det_sweep_w").string();
  const auto window_rows = sweep_experiment(wsweep);
  for (std::size_t i = 0; i < window_rows.size(); ++i) {
    ExperimentSpec full = spec;
    full.window = static_cast<int>(wsweep.sweep_values[i]);
    full.out = (g_work / ("det_full_w" + std::to_string(i))).string();
    const auto fresh = run_experiment(full);
    const auto* sp = find_row(fresh.summary, "sp");
    if (sp == nullptr || sp->mean_annotations != window_rows[i].mean_annotations ||
        sp->mean_f != window_rows[i].mean_f) {
      crit.fail(fmt("window %.0f: swept %.1f vs fresh %.1f annotations", wsweep.sweep_values[i],
                    window_rows[i].mean_annotations, sp->mean_annotations));
      return;
    }
  }
  crit.pass("traces byte-identical; both sweep axes equal full reruns; replay ok");
}

// ---------------------------------------------------------------- criterion 9

void check_stop_set_robustness(const FlagshipOutcome& flagship) {
  Criterion crit(9, "stop conclusions robust to stop-set size");
  ExperimentSpec spec;
  spec.dataset = flagship.dataset_path;
  spec.folds = 10;
  spec.batch_size = 20;
  spec.seed_size = 100;
  spec.sweep = "stop-set-size";
  spec.sweep_values = {500, 1000, 1500};
  spec.out = (g_work / "size_sweep").string();
  const auto rows = sweep_experiment(spec);

  std::vector<double> annotations = {flagship.sp_mean_annotations};
  std::vector<double> fs = {flagship.sp_mean_f};
  for (const auto& r : rows) {
    annotations.push_back(r.mean_annotations);
    fs.push_back(r.mean_f);
  }
  const auto [ann_lo, ann_hi] = std::minmax_element(annotations.begin(), annotations.end());
  const auto [f_lo, f_hi] = std::minmax_element(fs.begin(), fs.end());
  const double ann_spread = *ann_hi - *ann_lo;
  const double f_spread = (*f_hi - *f_lo) * 100.0;
  const double pool_size = 4500.0;
  if (ann_spread >= 0.25 * pool_size) {
    crit.fail(fmt("annotation spread %.0f across sizes exceeds 25%% of the pool (%.0f)",
                  ann_spread, 0.25 * pool_size));
    return;
  }
  if (f_spread > 2.0) {
    crit.fail(fmt("F spread %.2f points across sizes exceeds 2.0", f_spread));
    return;
  }
  crit.pass(fmt("sizes 500..2000: annotation spread %.0f, F spread %.2f points", ann_spread,
                f_spread));
}

}  // namespace

int main() {
  g_work = fs::temp_directory_path() / ("alstop_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(g_work);
  fs::create_directories(g_work);
  std::printf("acceptance gate (work dir %s)\n", g_work.c_str());

  check_kappa_equivalence();
  check_solver_oracles();
  check_cutoff_monotonicity();
  check_stability_dominance();
  const auto flagship = check_flagship_run();
  check_spam_corpus();
  if (flagship) {
    check_probabilistic_learner(flagship->dataset_path);
  } else {
    Criterion c7(7, "probabilistic learner variant");
    c7.fail("flagship run unavailable");
  }
  check_determinism_and_replay();
  if (flagship) {
    check_stop_set_robustness(*flagship);
  } else {
    Criterion c9(9, "stop conclusions robust to stop-set size");
    c9.fail("flagship run unavailable");
  }

  std::printf("%s: %d criterion failure%s\n", g_failures == 0 ? "OK" : "GATE FAILED", g_failures,
              g_failures == 1 ? "" : "s");
  if (g_failures == 0) fs::remove_all(g_work);
  return g_failures;
}
