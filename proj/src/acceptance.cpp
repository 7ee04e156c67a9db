#include "optbench/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "optbench/analysis.hpp"
#include "optbench/io.hpp"
#include "optbench/optimizers.hpp"
#include "optbench/problems.hpp"

namespace optbench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

RunReport run_on(const ProblemSpec& spec, const std::string& optimizer,
                 std::int64_t steps, std::optional<double> eta,
                 std::optional<double> r_eps) {
  RunConfig cfg;
  cfg.problem = spec.id;
  cfg.optimizer = optimizer;
  cfg.steps = steps;
  cfg.eta = eta;
  cfg.r_eps = r_eps;
  cfg.domain = spec.domain;
  return run(cfg, spec.objective, spec.x0);
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Problems shared across criteria; built once.
struct Ctx {
  ProblemSpec quad = make_problem("quadratic1d");
  ProblemSpec quad_ball = make_problem("quadratic1d_ball");
  ProblemSpec ridge = make_problem("ridge");
  ProblemSpec logistic = make_problem("logistic");
  ProblemSpec abs_sum = make_problem("abs_sum");
  ProblemSpec max_affine = make_problem("max_affine");
  ProblemSpec ridge_ball;

  std::vector<RunReport> tuned_ngd;           // criterion 3 runs, reused by 5
  std::vector<const ProblemSpec*> tuned_spec;
  std::vector<RunReport> dowg_runs;           // criteria 6-8 runs, reused by 9

  Ctx() {
    // Ridge restricted to a ball around its optimum: gives DoWG a known
    // diameter while keeping the same objective and constants.
    ridge_ball = ridge;
    ridge_ball.domain = Domain::make_ball(*ridge.objective.x_star, 2.0);
  }
};

// --- criterion 1: stability threshold of plain GD on the 1-D quadratic ----
//
// Below the threshold (eta = 1.9/L) GD contracts; just above (eta = 2.1/L)
// it diverges geometrically. 400 steps separate the two decisively.
CriterionResult criterion_figure_stability(Ctx& ctx) {
  CriterionResult res{1, "figure_stability", false, 0.0, ""};
  const double L = *ctx.quad.objective.smoothness;

  const RunReport below = run_on(ctx.quad, "gd", 400, 1.9 / L, std::nullopt);
  double min_gap = std::numeric_limits<double>::infinity();
  for (const StepRecord& r : below.records)
    if (r.f_gap) min_gap = std::min(min_gap, *r.f_gap);
  const double final_gap = ctx.quad.objective.value_at(below.final_x);
  min_gap = std::min(min_gap, final_gap);
  const bool converged = min_gap < 1e-8;

  const RunReport above = run_on(ctx.quad, "gd", 400, 2.1 / L, std::nullopt);
  const bool diverged = above.status == RunStatus::numeric_overflow ||
                        above.final_x.cwiseAbs().maxCoeff() > 1e6;

  res.pass = converged && diverged;
  res.detail = "min_gap@1.9/L=" + fmt3(min_gap) +
               " status@2.1/L=" + to_string(above.status);
  return res;
}

// --- criterion 2: last-iterate GD bound on smooth problems ----------------
CriterionResult criterion_gd_smooth(Ctx& ctx) {
  CriterionResult res{2, "gd_smooth_bound", false, 0.0, ""};
  const double fracs[] = {0.5, 1.0, 1.9};
  const std::int64_t horizons[] = {10, 100, 1000};
  int pass = 0, total = 0;
  for (const ProblemSpec* spec : {&ctx.quad, &ctx.ridge}) {
    const double L = *spec->objective.smoothness;
    for (const double frac : fracs)
      for (const std::int64_t T : horizons) {
        const RunReport rep = run_on(*spec, "gd", T, frac / L, std::nullopt);
        const BoundVerdict v = verify_gd_smooth(rep, *spec);
        ++total;
        if (v.applicable && v.satisfied) ++pass;
      }
  }
  res.pass = pass == total;
  res.detail = std::to_string(pass) + "/" + std::to_string(total) +
               " bounds satisfied";
  return res;
}

// --- criterion 3: tuned-stepsize NGD bound on smooth problems -------------
CriterionResult criterion_ngd_smooth(Ctx& ctx) {
  CriterionResult res{3, "ngd_smooth_bound", false, 0.0, ""};
  const std::int64_t horizons[] = {100, 1000, 10000};
  int pass = 0, total = 0;
  for (const ProblemSpec* spec : {&ctx.quad, &ctx.ridge, &ctx.logistic}) {
    const Vec start = project(spec->domain, spec->x0);
    const double D0 = (start - *spec->objective.x_star).norm();
    for (const std::int64_t T : horizons) {
      const double eta = D0 / std::sqrt(static_cast<double>(T));
      RunReport rep = run_on(*spec, "ngd", T, eta, std::nullopt);
      const BoundVerdict v = verify_ngd_smooth(rep, *spec);
      ++total;
      if (v.applicable && v.satisfied) ++pass;
      ctx.tuned_ngd.push_back(std::move(rep));
      ctx.tuned_spec.push_back(spec);
    }
  }
  res.pass = pass == total;
  res.detail = std::to_string(pass) + "/" + std::to_string(total) +
               " bounds satisfied";
  return res;
}

// --- criterion 4: NGD ignores objective scale bit for bit -----------------
CriterionResult criterion_ngd_scale_free(Ctx& ctx) {
  CriterionResult res{4, "ngd_scale_free", false, 0.0, ""};
  const double etas[] = {0.1, 0.01};
  int pass = 0, total = 0;
  for (const ProblemSpec* base : {&ctx.quad, &ctx.abs_sum, &ctx.max_affine}) {
    const ProblemSpec scaled = scale_problem(*base, 100.0);
    for (const double eta : etas) {
      const RunReport a = run_on(*base, "ngd", 200, eta, std::nullopt);
      const RunReport b = run_on(scaled, "ngd", 200, eta, std::nullopt);
      ++total;
      bool identical = a.trajectory.size() == b.trajectory.size();
      for (std::size_t i = 0; identical && i < a.trajectory.size(); ++i)
        identical = a.trajectory[i] == b.trajectory[i];
      if (identical) ++pass;
    }
  }
  res.pass = pass == total;
  res.detail = std::to_string(pass) + "/" + std::to_string(total) +
               " trajectories bit-identical under 100x scaling";
  return res;
}

// --- criterion 5: tuned NGD reaches effective stepsize >= 1/L -------------
CriterionResult criterion_ngd_effective_stepsize(Ctx& ctx) {
  CriterionResult res{5, "ngd_effective_stepsize", false, 0.0, ""};
  int pass = 0, total = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ctx.tuned_ngd.size(); ++i) {
    const BoundVerdict v =
        verify_ngd_effective_stepsize(ctx.tuned_ngd[i], *ctx.tuned_spec[i]);
    ++total;
    if (v.applicable && v.satisfied) ++pass;
    if (v.applicable && std::isfinite(v.lhs) && v.rhs > 0.0)
      worst_ratio = std::min(worst_ratio, v.lhs / v.rhs);
  }
  res.pass = total > 0 && pass == total;
  res.detail = std::to_string(pass) + "/" + std::to_string(total) +
               " runs reach 1/L; min(max_eff*L)=" + fmt3(worst_ratio);
  return res;
}

// --- criterion 6: both NGD and DoWG settle at the edge of stability -------
CriterionResult criterion_edge_of_stability(Ctx& ctx) {
  CriterionResult res{6, "edge_of_stability", false, 0.0, ""};
  const RunReport ngd = run_on(ctx.ridge, "ngd", 10000, 0.1, std::nullopt);
  const EosSummary se = detect_edge_of_stability(ngd, ctx.ridge, 0.25);

  RunReport dowg = run_on(ctx.ridge, "dowg", 10000, std::nullopt, 1e-6);
  const EosSummary sd = detect_edge_of_stability(dowg, ctx.ridge, 0.25);
  ctx.dowg_runs.push_back(std::move(dowg));

  res.pass = se.band_fraction >= 0.5 && sd.band_fraction >= 0.5;
  res.detail = "band occupancy ngd=" + fmt3(se.band_fraction) +
               " dowg=" + fmt3(sd.band_fraction);
  return res;
}

// --- criterion 7: DoWG bound on nonsmooth Lipschitz problems --------------
CriterionResult criterion_dowg_nonsmooth(Ctx& ctx) {
  CriterionResult res{7, "dowg_nonsmooth_bound", false, 0.0, ""};
  const std::int64_t horizons[] = {100, 1000, 10000};
  int pass = 0, total = 0;
  for (const ProblemSpec* spec : {&ctx.abs_sum, &ctx.max_affine})
    for (const std::int64_t T : horizons) {
      RunReport rep = run_on(*spec, "dowg", T, std::nullopt, 1e-6);
      const BoundVerdict v = verify_dowg_nonsmooth(rep, *spec);
      ++total;
      if (v.applicable && v.satisfied) ++pass;
      ctx.dowg_runs.push_back(std::move(rep));
    }
  res.pass = pass == total;
  res.detail = std::to_string(pass) + "/" + std::to_string(total) +
               " bounds satisfied";
  return res;
}

// --- criterion 8: DoWG bound on smooth problems + horizon improvement -----
CriterionResult criterion_dowg_smooth(Ctx& ctx) {
  CriterionResult res{8, "dowg_smooth_bound", false, 0.0, ""};
  const std::int64_t horizons[] = {100, 1000, 10000};
  int pass = 0, total = 0;
  bool ratios_ok = true;
  std::string ratio_note;
  for (const ProblemSpec* spec : {&ctx.quad_ball, &ctx.ridge_ball}) {
    double gap_small = 0.0, gap_large = 0.0;
    for (const std::int64_t T : horizons) {
      RunReport rep = run_on(*spec, "dowg", T, std::nullopt, 1e-6);
      const BoundVerdict v = verify_dowg_smooth(rep, *spec);
      ++total;
      if (v.applicable && v.satisfied) ++pass;
      if (T == 100) gap_small = v.lhs;
      if (T == 10000) gap_large = v.lhs;
      ctx.dowg_runs.push_back(std::move(rep));
    }
    // A 100x longer horizon must improve the best weighted-average gap by
    // at least 50x.
    if (!(gap_large <= gap_small / 50.0)) ratios_ok = false;
    if (!ratio_note.empty()) ratio_note += " ";
    ratio_note += spec->id + ":" + fmt3(gap_small) + "->" + fmt3(gap_large);
  }
  res.pass = pass == total && ratios_ok;
  res.detail = std::to_string(pass) + "/" + std::to_string(total) +
               " bounds satisfied; gaps " + ratio_note;
  return res;
}

// --- criterion 9: recorded DoWG stepsizes dominate the DoG formula --------
CriterionResult criterion_stepsize_domination(Ctx& ctx) {
  CriterionResult res{9, "stepsize_domination", false, 0.0, ""};
  int pass = 0, total = 0;
  for (const RunReport& rep : ctx.dowg_runs) {
    ++total;
    if (check_stepsize_domination(rep)) ++pass;
  }
  res.pass = total > 0 && pass == total;
  res.detail = std::to_string(pass) + "/" + std::to_string(total) +
               " trajectories dominated exactly";
  return res;
}

// --- criterion 10: property suites ----------------------------------------

bool fuzz_lemma_seq(int n_sequences, std::uint64_t seed, std::string& why) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> len_dist(2, 50);
  std::uniform_int_distribution<int> mode_dist(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < n_sequences; ++s) {
    const int n = len_dist(eng);
    const int mode = mode_dist(eng);
    std::vector<double> a;
    a.reserve(n);
    double cur = mode == 2 ? 0.0 : std::abs(normal(eng)) * 3.0;
    a.push_back(cur);
    for (int k = 1; k < n; ++k) {
      double inc = 0.0;
      switch (mode) {
        case 0: inc = std::abs(normal(eng)); break;                // O(1) jumps
        case 1: inc = std::abs(normal(eng)) * 1e-8; break;         // near-flat
        case 2: inc = unit(eng) < 0.5 ? 0.0 : std::abs(normal(eng)); break;
        case 3: inc = cur * std::abs(normal(eng)); break;          // geometric
      }
      cur = std::min(cur + inc, 1e6);
      a.push_back(cur);
    }
    const auto [lhs, rhs] = lemma_seq_check(a);
    if (!(lhs <= rhs + 1e-12)) {
      why = "seq lemma violated: lhs=" + format_double(lhs) +
            " rhs=" + format_double(rhs);
      return false;
    }
  }
  return true;
}

bool fuzz_lemma_logT(int n_sequences, std::uint64_t seed, std::string& why) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> len_dist(2, 60);
  std::uniform_int_distribution<int> mode_dist(0, 3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < n_sequences; ++s) {
    const int n = len_dist(eng);
    const int mode = mode_dist(eng);
    std::vector<double> seq;
    seq.reserve(n);
    double cur = 0.1 + std::abs(normal(eng));
    seq.push_back(cur);
    for (int k = 1; k < n; ++k) {
      switch (mode) {
        case 0: cur += std::abs(normal(eng)); break;
        case 1: cur += std::abs(normal(eng)) * 1e-9; break;
        case 2: cur *= 1.0 + 2.0 * unit(eng); break;
        case 3: if (unit(eng) < 0.3) cur += std::abs(normal(eng)); break;
      }
      cur = std::min(cur, 1e6);
      seq.push_back(cur);
    }
    const auto [lhs, rhs] = lemma_logT_check(seq);
    if (!(lhs >= rhs - 1e-12)) {
      why = "log-horizon lemma violated: lhs=" + format_double(lhs) +
            " rhs=" + format_double(rhs);
      return false;
    }
  }
  return true;
}

bool fd_gradient_check(const ProblemSpec& spec, int n_points,
                       std::uint64_t seed, std::string& why) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vec anchor = spec.objective.x_star
                         ? *spec.objective.x_star
                         : Vec(Vec::Zero(spec.objective.dim));
  const double h = 1e-6;
  for (int p = 0; p < n_points; ++p) {
    Vec x(spec.objective.dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = anchor[i] + normal(eng);
    const Vec g = spec.objective.gradient_at(x);
    Vec fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (spec.objective.value_at(xp) - spec.objective.value_at(xm)) /
              (2.0 * h);
    }
    if ((fd - g).norm() > 1e-5 * (1.0 + g.norm())) {
      why = spec.id + ": finite-difference gradient mismatch at point " +
            std::to_string(p);
      return false;
    }
  }
  return true;
}

bool projection_properties(int n_pairs, std::uint64_t seed, std::string& why) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> dim_dist(1, 5);
  const auto sample = [&](int d, double spread) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v[i] = normal(eng) * spread;
    return v;
  };
  for (int p = 0; p < n_pairs; ++p) {
    const int d = dim_dist(eng);
    Domain dom;
    if (p % 3 == 0) {
      dom = Domain::full();
    } else if (p % 3 == 1) {
      dom = Domain::make_ball(sample(d, 1.0), 0.5 + std::abs(normal(eng)));
    } else {
      Vec lo = sample(d, 1.0), hi = sample(d, 1.0);
      for (int i = 0; i < d; ++i) {
        if (lo[i] > hi[i]) std::swap(lo[i], hi[i]);
        hi[i] += 0.1;  // nonempty interior
      }
      dom = Domain::make_box(lo, hi);
    }
    const Vec x = sample(d, 3.0), y = sample(d, 3.0);
    const Vec px = project(dom, x), py = project(dom, y);
    // Nonexpansiveness
    const double lhs = (px - py).norm(), rhs = (x - y).norm();
    if (lhs > rhs + 1e-12 * std::max(1.0, rhs)) {
      why = "projection expanded a pair of points";
      return false;
    }
    // Idempotence (exact for full space and boxes, 1e-12 for balls where
    // the re-projection can move by one rounding step)
    const Vec ppx = project(dom, px);
    if (dom.kind == Domain::Kind::ball) {
      if ((ppx - px).norm() > 1e-12) {
        why = "ball projection not idempotent within 1e-12";
        return false;
      }
    } else if (ppx != px) {
      why = "projection not exactly idempotent";
      return false;
    }
    // Feasibility
    if (dom.kind == Domain::Kind::ball &&
        (px - dom.center).norm() > dom.radius * (1.0 + 1e-12)) {
      why = "ball projection landed outside the ball";
      return false;
    }
    if (dom.kind == Domain::Kind::box &&
        ((px.array() < dom.lower.array()).any() ||
         (px.array() > dom.upper.array()).any())) {
      why = "box projection landed outside the box";
      return false;
    }
  }
  return true;
}

CriterionResult criterion_property_suites(Ctx& ctx) {
  CriterionResult res{10, "property_suites", false, 0.0, ""};
  std::string why;
  bool ok = true;
  std::vector<std::string> parts;

  if (fuzz_lemma_seq(1000, 101, why)) {
    parts.push_back("seq-lemma:1000");
  } else {
    ok = false;
    parts.push_back("seq-lemma:FAIL(" + why + ")");
  }
  if (fuzz_lemma_logT(1000, 202, why)) {
    parts.push_back("logT-lemma:1000");
  } else {
    ok = false;
    parts.push_back("logT-lemma:FAIL(" + why + ")");
  }

  int fact_ok = 0;
  for (const ProblemSpec* spec : {&ctx.quad, &ctx.ridge, &ctx.logistic})
    if (check_smoothness_fact(*spec, 1000, 303)) ++fact_ok;
  if (fact_ok == 3) {
    parts.push_back("smoothness-fact:3000");
  } else {
    ok = false;
    parts.push_back("smoothness-fact:FAIL");
  }

  int fd_ok = 0;
  for (const ProblemSpec* spec : {&ctx.quad, &ctx.ridge, &ctx.logistic})
    if (fd_gradient_check(*spec, 100, 404, why)) ++fd_ok;
  if (fd_ok == 3) {
    parts.push_back("fd-gradient:300");
  } else {
    ok = false;
    parts.push_back("fd-gradient:FAIL(" + why + ")");
  }

  if (projection_properties(1000, 505, why)) {
    parts.push_back("projection:1000");
  } else {
    ok = false;
    parts.push_back("projection:FAIL(" + why + ")");
  }

  res.pass = ok;
  for (std::size_t i = 0; i < parts.size(); ++i)
    res.detail += (i ? " " : "") + parts[i];
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_matrix() {
  Ctx ctx;
  std::vector<CriterionResult> out;
  const auto timed = [&](CriterionResult (*fn)(Ctx&)) {
    const auto t0 = Clock::now();
    CriterionResult r = fn(ctx);
    r.seconds = seconds_since(t0);
    out.push_back(std::move(r));
  };
  timed(criterion_figure_stability);
  timed(criterion_gd_smooth);
  timed(criterion_ngd_smooth);
  timed(criterion_ngd_scale_free);
  timed(criterion_ngd_effective_stepsize);
  timed(criterion_edge_of_stability);
  timed(criterion_dowg_nonsmooth);
  timed(criterion_dowg_smooth);
  timed(criterion_stepsize_domination);
  timed(criterion_property_suites);
  return out;
}

bool print_acceptance(const std::vector<CriterionResult>& results,
                      std::ostream& out) {
  bool all = true;
  for (const CriterionResult& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << " criterion " << std::setw(2)
        << r.index << " " << r.name;
    if (!r.detail.empty()) out << " | " << r.detail;
    out << "\n";
    all = all && r.pass;
  }
  std::size_t passed = 0;
  for (const CriterionResult& r : results) passed += r.pass ? 1 : 0;
  out << "RESULT: " << (all ? "PASS" : "FAIL") << " (" << passed << "/"
      << results.size() << " criteria)\n";
  return all;
}

bool run_selftest(std::ostream& out) {
  bool all = true;
  std::string why;
  const auto report = [&](const std::string& name, bool ok,
                          const std::string& note) {
    out << (ok ? "ok   " : "FAIL ") << name;
    if (!note.empty()) out << " | " << note;
    out << "\n";
    all = all && ok;
  };

  Ctx ctx;

  report("lemma_seq_fuzz", fuzz_lemma_seq(1000, 101, why), why);
  why.clear();
  report("lemma_logT_fuzz", fuzz_lemma_logT(1000, 202, why), why);
  why.clear();

  {
    int n = 0;
    for (const ProblemSpec* spec : {&ctx.quad, &ctx.ridge, &ctx.logistic})
      if (check_smoothness_fact(*spec, 1000, 303)) ++n;
    report("smoothness_fact", n == 3,
           std::to_string(n) + "/3 smooth problems");
  }
  {
    int n = 0;
    for (const ProblemSpec* spec : {&ctx.quad, &ctx.ridge, &ctx.logistic})
      if (fd_gradient_check(*spec, 100, 404, why)) ++n;
    report("fd_gradient", n == 3, n == 3 ? "3/3 smooth problems" : why);
    why.clear();
  }
  report("projection_properties", projection_properties(1000, 505, why), why);
  why.clear();

  {
    // Declared stationarity: the cached optimum has (sub)gradient ~ 0 and
    // matches the cached optimal value.
    bool ok = true;
    std::string note;
    for (const ProblemSpec* spec :
         {&ctx.quad, &ctx.ridge, &ctx.logistic, &ctx.abs_sum}) {
      const Vec& xs = *spec->objective.x_star;
      const double gn = spec->objective.gradient_at(xs).norm();
      const double fv = spec->objective.value_at(xs);
      const double fs = *spec->objective.f_star;
      if (gn > 1e-8 || std::abs(fv - fs) > 1e-12 * std::max(1.0, std::abs(fs))) {
        ok = false;
        note = spec->id + ": |grad(x*)|=" + fmt3(gn);
      }
    }
    report("optimum_stationarity", ok, note);
  }
  {
    // Convexity: f(y) >= f(x) + g(x).(y - x) at random pairs.
    bool ok = true;
    std::string note;
    std::mt19937_64 eng(606);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (const ProblemSpec* spec :
         {&ctx.quad, &ctx.ridge, &ctx.logistic, &ctx.abs_sum,
          &ctx.max_affine}) {
      for (int p = 0; p < 500 && ok; ++p) {
        Vec x(spec->objective.dim), y(spec->objective.dim);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          x[i] = 3.0 * normal(eng);
          y[i] = 3.0 * normal(eng);
        }
        const double fx = spec->objective.value_at(x);
        const double fy = spec->objective.value_at(y);
        const Vec g = spec->objective.gradient_at(x);
        const double linear = fx + g.dot(y - x);
        if (fy < linear - 1e-12 * std::max(1.0, std::abs(fy))) {
          ok = false;
          note = spec->id + ": subgradient inequality violated";
        }
      }
    }
    report("convexity_subgradient", ok, note);
  }
  {
    // Determinism: regenerating a problem and rerunning produces identical
    // trajectories and identical serialized reports.
    const ProblemSpec r1 = make_problem("ridge");
    const ProblemSpec r2 = make_problem("ridge");
    const RunReport a = run_on(r1, "dowg", 200, std::nullopt, 1e-6);
    const RunReport b = run_on(r2, "dowg", 200, std::nullopt, 1e-6);
    const bool same = a.final_x == b.final_x &&
                      report_to_json(a) == report_to_json(b);
    report("determinism", same, "regenerate + rerun, 200 steps");
  }
  {
    // Curvature never exceeds the declared smoothness constant.
    bool ok = true;
    std::string note;
    std::mt19937_64 eng(707);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (const ProblemSpec* spec : {&ctx.quad, &ctx.ridge, &ctx.logistic}) {
      const double L = *spec->objective.smoothness;
      for (int p = 0; p < 200 && ok; ++p) {
        Vec x(spec->objective.dim), u(spec->objective.dim);
        for (Eigen::Index i = 0; i < x.size(); ++i) {
          x[i] = 2.0 * normal(eng);
          u[i] = normal(eng);
        }
        u.normalize();
        const double h = 1e-4;
        const Vec g1 = spec->objective.gradient_at(x + h * u);
        const Vec g0 = spec->objective.gradient_at(x);
        const double curv = (g1 - g0).norm() / h;
        if (curv > L * (1.0 + 1e-3)) {
          ok = false;
          note = spec->id + ": sampled curvature " + fmt3(curv) +
                 " exceeds declared L=" + fmt3(L);
        }
      }
    }
    report("smoothness_constant_upper_bound", ok, note);
  }
  out << (all ? "selftest: all suites passed\n"
              : "selftest: FAILURES DETECTED\n");
  return all;
}

}  // namespace optbench
