#include "optbench/optimizers.hpp"

#include <cassert>
#include <cmath>

namespace optbench {

namespace {

// Fills the telemetry fields shared by every optimizer, evaluated at the
// pre-step iterate.
StepRecord base_record(std::int64_t step, double f, double grad_norm,
                       const Objective& obj, const Vec& x) {
  StepRecord r;
  r.step = step;
  r.f_value = f;
  r.grad_norm = grad_norm;
  if (obj.f_star) r.f_gap = f - *obj.f_star;
  if (obj.x_star) r.distance_to_opt = (x - *obj.x_star).norm();
  return r;
}

bool finite_vec(const Vec& v) { return v.allFinite(); }

}  // namespace

GdState make_gd_state(const Vec& x0, double eta) { return GdState{x0, eta}; }

NgdState make_ngd_state(const Vec& x0, double eta) {
  NgdState s;
  s.x = x0;
  s.eta = eta;
  s.best_x = x0;
  return s;
}

DowgState make_dowg_state(const Vec& x0, double r_eps) {
  DowgState s;
  s.x = x0;
  s.x0 = x0;
  s.rbar = r_eps;
  s.v = 0.0;
  s.avg_num = Vec::Zero(x0.size());
  s.avg_den = 0.0;
  s.r_eps = r_eps;
  return s;
}

DogState make_dog_state(const Vec& x0, double r_eps) {
  DogState s;
  s.x = x0;
  s.x0 = x0;
  s.rbar = r_eps;
  s.grad_sq_sum = 0.0;
  s.r_eps = r_eps;
  return s;
}

StepOutcome gd_step(GdState& s, const Objective& obj, const Domain& dom,
                    std::int64_t step) {
  StepOutcome out;
  const double f = obj.value_at(s.x);
  const Vec g = obj.gradient_at(s.x);
  out.f_observed = f;
  if (!std::isfinite(f) || !finite_vec(g)) {
    out.overflow = true;
    return out;
  }
  const double gn = g.norm();
  if (gn == 0.0) {
    out.stationary = true;  // zero (sub)gradient: x minimizes convex f
    return out;
  }
  StepRecord rec = base_record(step, f, gn, obj, s.x);
  rec.stepsize = s.eta;
  rec.effective_stepsize = s.eta;
  s.x = project(dom, Vec(s.x - s.eta * g));
  out.record = std::move(rec);
  return out;
}

StepOutcome ngd_step(NgdState& s, const Objective& obj, const Domain& dom,
                     std::int64_t step) {
  StepOutcome out;
  const double f = obj.value_at(s.x);
  const Vec g = obj.gradient_at(s.x);
  out.f_observed = f;
  if (!std::isfinite(f) || !finite_vec(g)) {
    out.overflow = true;
    return out;
  }
  if (f < s.best_f) {
    s.best_f = f;
    s.best_x = s.x;
  }
  // Normalize via the max-magnitude component first. The rescaled gradient
  // g/m is invariant under exact scalings of the objective, so trajectories
  // on f and alpha*f coincide bit-for-bit whenever alpha*g is exactly
  // representable; it also keeps the direction finite when ||g|| underflows.
  const double m = g.cwiseAbs().maxCoeff();
  if (m == 0.0) {
    out.stationary = true;  // zero subgradient: x minimizes convex f
    return out;
  }
  const Vec w = g / m;
  const double wn = std::sqrt(w.squaredNorm());
  const Vec u = w / wn;
  const double grad_norm = m * wn;
  StepRecord rec = base_record(step, f, grad_norm, obj, s.x);
  rec.stepsize = s.eta;
  rec.effective_stepsize = s.eta / grad_norm;
  s.x = project(dom, Vec(s.x - s.eta * u));
  out.record = std::move(rec);
  return out;
}

StepOutcome dowg_step(DowgState& s, const Objective& obj, const Domain& dom,
                      std::int64_t step) {
  StepOutcome out;
  // Update the distance estimator before looking at the gradient.
  const double r = std::sqrt((s.x - s.x0).squaredNorm());
  s.rbar = std::max(r, s.rbar);
  const double f = obj.value_at(s.x);
  const Vec g = obj.gradient_at(s.x);
  out.f_observed = f;
  if (!std::isfinite(f) || !finite_vec(g)) {
    out.overflow = true;
    return out;
  }
  const double gn2 = g.squaredNorm();
  const double gn = std::sqrt(gn2);
  if (gn == 0.0) {
    out.stationary = true;
    return out;
  }
  s.v += s.rbar * s.rbar * gn2;
  assert(s.v > 0.0);  // the sum includes the current (nonzero) gradient
  const double eta = s.rbar * s.rbar / std::sqrt(s.v);
  // Weighted-average accumulators take the pre-move iterate, so after t+1
  // steps the average covers exactly x_0 .. x_t.
  s.avg_num += s.rbar * s.rbar * s.x;
  s.avg_den += s.rbar * s.rbar;
  StepRecord rec = base_record(step, f, gn, obj, s.x);
  rec.stepsize = eta;
  rec.effective_stepsize = eta;
  rec.rbar = s.rbar;
  rec.v = s.v;
  if (obj.f_star) {
    const Vec xbar = s.avg_num / s.avg_den;
    rec.avg_f_gap = obj.value_at(xbar) - *obj.f_star;
  }
  s.x = project(dom, Vec(s.x - eta * g));
  out.record = std::move(rec);
  return out;
}

StepOutcome dog_step(DogState& s, const Objective& obj, const Domain& dom,
                     std::int64_t step) {
  StepOutcome out;
  const double r = std::sqrt((s.x - s.x0).squaredNorm());
  s.rbar = std::max(r, s.rbar);
  const double f = obj.value_at(s.x);
  const Vec g = obj.gradient_at(s.x);
  out.f_observed = f;
  if (!std::isfinite(f) || !finite_vec(g)) {
    out.overflow = true;
    return out;
  }
  const double gn2 = g.squaredNorm();
  const double gn = std::sqrt(gn2);
  if (gn == 0.0) {
    out.stationary = true;
    return out;
  }
  s.grad_sq_sum += gn2;  // includes the current gradient
  assert(s.grad_sq_sum > 0.0);
  const double eta = s.rbar / std::sqrt(s.grad_sq_sum);
  StepRecord rec = base_record(step, f, gn, obj, s.x);
  rec.stepsize = eta;
  rec.effective_stepsize = eta;
  rec.rbar = s.rbar;
  s.x = project(dom, Vec(s.x - eta * g));
  out.record = std::move(rec);
  return out;
}

RunReport run(const RunConfig& cfg, const Objective& obj, const Vec& x0) {
  validate_config(cfg);
  if (x0.size() != obj.dim)
    throw ConfigurationError("start point dimension does not match objective");

  RunReport report;
  report.config = cfg;

  // Start on the feasible set.
  const Vec start = project(cfg.domain, x0);

  GdState gd;
  NgdState ngd;
  DowgState dowg;
  DogState dog;
  enum class Alg { gd, ngd, dowg, dog } alg;
  if (cfg.optimizer == "gd") {
    alg = Alg::gd;
    gd = make_gd_state(start, *cfg.eta);
  } else if (cfg.optimizer == "ngd") {
    alg = Alg::ngd;
    ngd = make_ngd_state(start, *cfg.eta);
  } else if (cfg.optimizer == "dowg") {
    alg = Alg::dowg;
    dowg = make_dowg_state(start, *cfg.r_eps);
  } else {
    alg = Alg::dog;
    dog = make_dog_state(start, *cfg.r_eps);
  }

  auto current_x = [&]() -> const Vec& {
    switch (alg) {
      case Alg::gd:
        return gd.x;
      case Alg::ngd:
        return ngd.x;
      case Alg::dowg:
        return dowg.x;
      default:
        return dog.x;
    }
  };

  report.trajectory.push_back(start);
  Vec uniform_sum = Vec::Zero(obj.dim);
  std::int64_t visited = 0;

  report.status = RunStatus::completed;
  for (std::int64_t t = 0; t < cfg.steps; ++t) {
    const Vec& x = current_x();
    if (!finite_vec(x) || x.norm() > kOverflowNorm) {
      report.status = RunStatus::numeric_overflow;
      break;
    }
    const Vec x_before = x;
    StepOutcome out;
    switch (alg) {
      case Alg::gd:
        out = gd_step(gd, obj, cfg.domain, t);
        break;
      case Alg::ngd:
        out = ngd_step(ngd, obj, cfg.domain, t);
        break;
      case Alg::dowg:
        out = dowg_step(dowg, obj, cfg.domain, t);
        break;
      default:
        out = dog_step(dog, obj, cfg.domain, t);
        break;
    }
    if (std::isfinite(out.f_observed) && out.f_observed < report.best_f) {
      report.best_f = out.f_observed;
      report.best_x = x_before;
    }
    if (out.overflow) {
      report.status = RunStatus::numeric_overflow;
      break;
    }
    if (out.stationary) {
      report.status = RunStatus::stationary;
      break;
    }
    report.records.push_back(std::move(*out.record));
    uniform_sum += x_before;
    ++visited;
    report.trajectory.push_back(current_x());
  }

  report.final_x = current_x();
  if (report.best_x.size() == 0) report.best_x = report.final_x;

  if (alg == Alg::dowg && dowg.avg_den > 0.0) {
    report.avg_x = dowg.avg_num / dowg.avg_den;
  } else if (visited > 0) {
    report.avg_x = uniform_sum / static_cast<double>(visited);
  } else {
    report.avg_x = report.final_x;
  }
  return report;
}

}  // namespace optbench
