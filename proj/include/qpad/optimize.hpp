#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qpad/dataset.hpp"
#include "qpad/model.hpp"
#include "qpad/naive.hpp"

namespace qpad {

enum class Engine { fast, naive };

Engine engine_from_string(const std::string& name);
const char* to_string(Engine engine);

struct Penalty {
  double value = 0.0;      // alpha * sum_j (w_j . w)^2
  Vector ascent_gradient;  // gradient of the negated penalty; add to the objective gradient
};

Penalty orthogonality_penalty(const Vector& w, const Matrix& prev_axes, double alpha);

/// g - (w.g) w: removes the radial component at w on the unit sphere.
Vector tangent_project(const Vector& g, const Vector& w);

struct AxisFitTrace {
  struct Step {
    double phi;        // objective at this iterate
    double grad_norm;  // tangent gradient norm at this iterate
    double step_size;  // accepted step that produced it (0 for the start point)
  };
  std::vector<Step> steps;       // winning restart only; phi is non-decreasing
  bool converged = false;        // tangent gradient norm reached the threshold
  int restarts_used = 0;
  double effective_grad_tol = 0.0;  // absolute threshold after diameter scaling

  double final_phi() const { return steps.empty() ? 0.0 : steps.back().phi; }
  double final_grad_norm() const { return steps.empty() ? 0.0 : steps.back().grad_norm; }
};

/// Per-iteration threshold diagnostics (CLI --dump-axis-eval).
struct AxisIterationStats {
  int axis = 0;
  int iteration = 0;
  double threshold = 0.0;
  long long boundary_count = 0;
  long long pair_count = 0;
  double value = 0.0;
};
using IterationObserver = std::function<void(const AxisIterationStats&)>;

/// Projected gradient ascent on the sphere with backtracking line search
/// (halving, sufficient-increase factor 1e-4) and projection retraction.
/// Runs config.restarts_per_axis independent starts; the best final
/// objective wins, ties broken by restart index. Non-convergence is reported
/// in the trace, never thrown.
std::pair<Vector, AxisFitTrace> optimize_axis(const Matrix& x_c, const Matrix& prev_axes,
                                              const QpadConfig& config, std::uint64_t axis_seed,
                                              Engine engine, double effective_grad_tol,
                                              const IterationObserver& observer = {},
                                              int axis_index = 0);

struct FitOptions {
  NaiveGuard naive_guard;      // applies when engine == naive
  IterationObserver observer;  // optional diagnostics hook
};

struct FitResult {
  ProjectionModel model;
  std::vector<AxisFitTrace> traces;
};

/// Fits all m axes sequentially, each penalized against the previous ones.
/// Data is centered first and the mean stored on the model. Deterministic
/// given config.seed.
FitResult fit(const Dataset& ds, const QpadConfig& config, Engine engine = Engine::fast,
              const FitOptions& options = {});

}  // namespace qpad
