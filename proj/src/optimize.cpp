#include "qpad/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "qpad/fast.hpp"
#include "qpad/linalg.hpp"
#include "qpad/rng.hpp"

namespace qpad {

Engine engine_from_string(const std::string& name) {
  if (name == "fast") return Engine::fast;
  if (name == "naive") return Engine::naive;
  throw ArgumentError("unknown engine '" + name + "' (expected fast or naive)");
}

const char* to_string(Engine engine) { return engine == Engine::fast ? "fast" : "naive"; }

Penalty orthogonality_penalty(const Vector& w, const Matrix& prev_axes, double alpha) {
  Penalty out;
  out.ascent_gradient = Vector::Zero(w.size());
  if (prev_axes.rows() == 0 || alpha == 0.0) return out;
  const Vector dots = prev_axes * w;
  out.value = alpha * dots.squaredNorm();
  out.ascent_gradient = -2.0 * alpha * (prev_axes.transpose() * dots);
  return out;
}

Vector tangent_project(const Vector& g, const Vector& w) { return g - (w.dot(g)) * w; }

namespace {

constexpr double kSufficientIncrease = 1e-4;
constexpr double kMinStep = 1e-14;
constexpr int kMaxHalvings = 60;

struct AxisState {
  double phi = 0.0;
  Vector gradient;  // euclidean gradient of the penalized objective
  AxisIterationStats stats;
};

AxisState evaluate_axis(const Matrix& x_c, const Vector& w, const Matrix& prev_axes,
                        const QpadConfig& config, Engine engine) {
  AxisState st;
  const Penalty pen = orthogonality_penalty(w, prev_axes, config.alpha);
  if (engine == Engine::fast) {
    const AxisEvaluation ev = tail_mean_fast(x_c, w, config.b_percent);
    st.phi = ev.value - pen.value;
    st.gradient = tail_mean_gradient(x_c, ev) + pen.ascent_gradient;
    st.stats.threshold = ev.threshold;
    st.stats.boundary_count = ev.boundary_count;
    st.stats.pair_count = ev.pair_count;
    st.stats.value = ev.value;
  } else {
    const Vector p = project_scalar(x_c, w);
    const PairSelection sel = tail_mean_naive(x_c, w, config.b_percent);
    st.phi = sel.mean - pen.value;
    st.gradient = tail_mean_gradient_naive(x_c, p, sel) + pen.ascent_gradient;
    st.stats.threshold = sel.distances.back();
    long long boundary = 0;
    for (auto it = sel.distances.rbegin();
         it != sel.distances.rend() && *it == sel.distances.back(); ++it)
      ++boundary;
    st.stats.boundary_count = boundary;
    st.stats.pair_count = sel.pair_count;
    st.stats.value = sel.mean;
  }
  return st;
}

double phi_value(const Matrix& x_c, const Vector& w, const Matrix& prev_axes,
                 const QpadConfig& config, Engine engine) {
  const double mean = engine == Engine::fast
                          ? tail_mean_fast_value(x_c, w, config.b_percent)
                          : tail_mean_naive(x_c, w, config.b_percent).mean;
  return mean - orthogonality_penalty(w, prev_axes, config.alpha).value;
}

struct RestartResult {
  Vector w;
  AxisFitTrace trace;
};

RestartResult run_restart(const Matrix& x_c, const Matrix& prev_axes, const QpadConfig& config,
                          std::uint64_t restart_seed, Engine engine, double grad_tol,
                          const IterationObserver& observer, int axis_index) {
  auto rng = make_rng(restart_seed);
  Vector w = random_unit_vector(rng, x_c.cols());

  RestartResult res;
  res.trace.effective_grad_tol = grad_tol;

  AxisState st = evaluate_axis(x_c, w, prev_axes, config, engine);
  Vector g_t = tangent_project(st.gradient, w);
  double grad_norm = g_t.norm();
  res.trace.steps.push_back({st.phi, grad_norm, 0.0});
  double step = 0.0;  // last accepted step; 0 means none yet

  for (int iter = 0; iter < config.max_iters_per_axis; ++iter) {
    if (observer) {
      AxisIterationStats stats = st.stats;
      stats.axis = axis_index;
      stats.iteration = iter;
      observer(stats);
    }
    if (grad_norm <= grad_tol) {
      res.trace.converged = true;
      break;
    }

    // Backtracking line search along the tangent direction, with projection
    // back to the sphere. Accepted steps satisfy a sufficient-increase rule,
    // which makes the recorded objective non-decreasing.
    double eta = step > 0.0 ? std::min(step * 4.0, 1e8) : 1.0 / (1.0 + grad_norm);
    bool accepted = false;
    Vector w_next;
    double phi_next = 0.0;
    for (int h = 0; h < kMaxHalvings && eta >= kMinStep; ++h, eta *= 0.5) {
      Vector candidate = w + eta * g_t;
      const double norm = candidate.norm();
      if (norm == 0.0) continue;
      candidate /= norm;
      const double phi_cand = phi_value(x_c, candidate, prev_axes, config, engine);
      if (phi_cand >= st.phi + kSufficientIncrease * eta * grad_norm * grad_norm) {
        accepted = true;
        w_next = std::move(candidate);
        phi_next = phi_cand;
        break;
      }
    }
    if (!accepted) break;  // subgradient point or flat ridge; stop this restart

    w = std::move(w_next);
    step = eta;
    st = evaluate_axis(x_c, w, prev_axes, config, engine);
    g_t = tangent_project(st.gradient, w);
    grad_norm = g_t.norm();
    res.trace.steps.push_back({phi_next, grad_norm, step});
    // Final-iteration convergence still counts.
    if (iter + 1 == config.max_iters_per_axis && grad_norm <= grad_tol)
      res.trace.converged = true;
  }

  res.w = std::move(w);
  return res;
}

}  // namespace

std::pair<Vector, AxisFitTrace> optimize_axis(const Matrix& x_c, const Matrix& prev_axes,
                                              const QpadConfig& config, std::uint64_t axis_seed,
                                              Engine engine, double effective_grad_tol,
                                              const IterationObserver& observer, int axis_index) {
  config.validate();
  RestartResult best;
  bool have_best = false;
  for (int r = 0; r < config.restarts_per_axis; ++r) {
    const std::uint64_t restart_seed = mix_seed(axis_seed, {static_cast<std::uint64_t>(r)});
    RestartResult res = run_restart(x_c, prev_axes, config, restart_seed, engine,
                                    effective_grad_tol, observer, axis_index);
    if (!have_best || res.trace.final_phi() > best.trace.final_phi()) {
      best = std::move(res);
      have_best = true;
    }
  }
  best.trace.restarts_used = config.restarts_per_axis;
  return {std::move(best.w), std::move(best.trace)};
}

FitResult fit(const Dataset& ds, const QpadConfig& config, Engine engine,
              const FitOptions& options) {
  config.validate();
  if (config.m > ds.dim()) {
    throw ArgumentError("fit: target dimension m=" + std::to_string(config.m) +
                        " exceeds data dimension n=" + std::to_string(ds.dim()));
  }
  if (engine == Engine::naive && ds.rows() > options.naive_guard.max_rows &&
      !options.naive_guard.force) {
    throw ArgumentError("fit: naive engine refused for N=" + std::to_string(ds.rows()) +
                        " > cap " + std::to_string(options.naive_guard.max_rows) +
                        "; pass --force-naive to override");
  }

  Centered centered = center(ds);

  // grad_tol is relative to the data diameter scale; 2 * max row norm of the
  // centered data bounds the true diameter from above.
  double max_norm = 0.0;
  for (Index i = 0; i < centered.data.rows(); ++i)
    max_norm = std::max(max_norm, centered.data.row(i).norm());
  const double diameter_scale = 2.0 * max_norm;
  const double grad_tol = config.grad_tol * (diameter_scale > 0.0 ? diameter_scale : 1.0);

  auto rng = make_rng(mix_seed(config.seed, {0xf17ULL}));

  FitResult result;
  result.model.directions.resize(config.m, ds.dim());
  result.model.mean = std::move(centered.mean);
  result.model.rows_unit = true;
  result.model.method = std::string("qpad-") + to_string(engine);
  result.model.config = config;

  for (int k = 0; k < config.m; ++k) {
    const std::uint64_t axis_seed = rng();
    const Matrix prev = result.model.directions.topRows(k);
    auto [w, trace] = optimize_axis(centered.data, prev, config, axis_seed, engine, grad_tol,
                                    options.observer, k);
    result.model.directions.row(k) = w.transpose();
    result.traces.push_back(std::move(trace));
  }
  return result;
}

}  // namespace qpad
