/*
 Copyright 2026 The viaes Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "viaes/ilqr.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "viaes/types.hpp"

namespace viaes::ilqr {

namespace {


Vec clamp(const Vec& u, const Vec& lo, const Vec& hi) { return u.cwiseMax(lo).cwiseMin(hi); }

std::vector<int> indices_where(const std::vector<bool>& mask, bool value) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
    if (mask[static_cast<std::size_t>(i)] == value) idx.push_back(i);
  }
  return idx;
}

Mat gather(const Mat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Mat out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

struct Rollout {
  std::vector<Vec> states;
  std::vector<Vec> controls;
  double cost = std::numeric_limits<double>::infinity();
  bool ok = false;
};

Rollout simulate(const Problem& pr, const std::vector<Vec>& controls) {
  Rollout r;
  const std::size_t n = pr.horizon();
  r.states.reserve(n + 1);
  r.controls = controls;
  r.states.push_back(pr.initial_state());
  double cost = 0.0;
  try {
    for (std::size_t k = 0; k < n; ++k) {
      cost += pr.stage_cost(r.states[k], controls[k], k);
      r.states.push_back(pr.step(r.states[k], controls[k], k));
    }
    cost += pr.final_cost(r.states.back());
  } catch (const std::exception&) {
    return r;
  }
  r.cost = cost;
  r.ok = std::isfinite(cost);
  return r;
}

struct BackwardResult {
  std::vector<Vec> k;
  std::vector<Mat> big_k;
  double dv_linear = 0.0;
  double dv_quadratic = 0.0;
  bool ok = false;
};

BackwardResult backward_pass(const Problem& pr, const std::vector<Vec>& xs, const std::vector<Vec>& us,
                             double reg) {
  const std::size_t n = pr.horizon();
  const int nx = pr.state_dim();
  const int nu = pr.control_dim();
  const Vec lo = pr.lower_bound();
  const Vec hi = pr.upper_bound();

  BackwardResult out;
  out.k.assign(n, Vec::Zero(nu));
  out.big_k.assign(n, Mat::Zero(nu, nx));

  Vec vx;
  Mat vxx;
  pr.final_expansion(xs[n], vx, vxx);

  Mat a(nx, nx), b(nx, nu);
  Expansion e;
  std::vector<bool> free;
  for (std::size_t kk = n; kk-- > 0;) {
    pr.step_linearized(xs[kk], us[kk], kk, a, b);
    pr.stage_expansion(xs[kk], us[kk], kk, e);

    const Vec qx = e.lx + a.transpose() * vx;
    const Vec qu = e.lu + b.transpose() * vx;
    const Mat vxx_a = vxx * a;
    const Mat qxx = e.lxx + a.transpose() * vxx_a;
    Mat quu = e.luu + b.transpose() * vxx * b;
    quu = 0.5 * (quu + quu.transpose());
    const Mat qux = e.lux + b.transpose() * vxx_a;
    const Mat quu_reg = quu + reg * Mat::Identity(nu, nu);

    Vec kff;
    if (!solve_box_step(quu_reg, qu, us[kk], lo, hi, kff, free)) return out;

    Mat gain = Mat::Zero(nu, nx);
    const auto f = indices_where(free, true);
    if (!f.empty()) {
      const Mat qff = gather(quu_reg, f, f);
      Eigen::LLT<Mat> llt(qff);
      if (llt.info() != Eigen::Success) return out;
      Mat qux_f(f.size(), nx);
      for (std::size_t i = 0; i < f.size(); ++i) qux_f.row(static_cast<Eigen::Index>(i)) = qux.row(f[i]);
      const Mat kf = -llt.solve(qux_f);
      for (std::size_t i = 0; i < f.size(); ++i) gain.row(f[i]) = kf.row(static_cast<Eigen::Index>(i));
    }

    out.dv_linear += kff.dot(qu);
    out.dv_quadratic += 0.5 * kff.dot(quu * kff);

    vx = qx + gain.transpose() * quu * kff + gain.transpose() * qu + qux.transpose() * kff;
    vxx = qxx + gain.transpose() * quu * gain + gain.transpose() * qux + qux.transpose() * gain;
    vxx = 0.5 * (vxx + vxx.transpose());
    if (!vx.allFinite() || !vxx.allFinite()) return out;

    out.k[kk] = kff;
    out.big_k[kk] = gain;
  }
  out.ok = true;
  return out;
}

}  // namespace

bool solve_box_step(const Mat& h, const Vec& g, const Vec& u, const Vec& lo, const Vec& hi, Vec& step,
                    std::vector<bool>& free) {
  // Primal active set started from the feasible point d = 0 (u lies inside the box).
  const int n = static_cast<int>(g.size());
  const Vec dlo = lo - u, dhi = hi - u;
  free.assign(static_cast<std::size_t>(n), true);
  step = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (dlo[i] > 0.0 || dhi[i] < 0.0) step[i] = std::clamp(0.0, dlo[i], dhi[i]);
    if (step[i] != 0.0) free[static_cast<std::size_t>(i)] = false;
  }

  for (int iter = 0; iter < 10 * n + 10; ++iter) {
    const auto f = indices_where(free, true);
    Vec p = Vec::Zero(n);
    if (!f.empty()) {
      const Mat hff = gather(h, f, f);
      Eigen::LLT<Mat> llt(hff);
      if (llt.info() != Eigen::Success) return false;
      const Vec grad = h * step + g;
      Vec rhs(f.size());
      for (std::size_t i = 0; i < f.size(); ++i) rhs[static_cast<Eigen::Index>(i)] = grad[f[i]];
      const Vec pf = -llt.solve(rhs);
      for (std::size_t i = 0; i < f.size(); ++i) p[f[i]] = pf[static_cast<Eigen::Index>(i)];
    }
    if (p.lpNorm<Eigen::Infinity>() <= 1e-14 * (1.0 + step.lpNorm<Eigen::Infinity>())) {
      // Stationary on the free set: release the bound with the worst multiplier.
      const Vec grad = h * step + g;
      int worst = -1;
      double worst_v = 1e-12 * (1.0 + grad.lpNorm<Eigen::Infinity>());
      for (int i = 0; i < n; ++i) {
        if (free[static_cast<std::size_t>(i)]) continue;
        const bool at_hi = step[i] >= dhi[i];
        const double v = at_hi ? grad[i] : -grad[i];  // positive means moving inward lowers the cost
        if (v > worst_v) {
          worst_v = v;
          worst = i;
        }
      }
      if (worst < 0) return true;
      free[static_cast<std::size_t>(worst)] = true;
      continue;
    }
    double alpha = 1.0;
    int block = -1;
    for (int i : f) {
      if (p[i] > 0.0 && step[i] + p[i] > dhi[i]) {
        const double a = (dhi[i] - step[i]) / p[i];
        if (a < alpha) alpha = a, block = i;
      } else if (p[i] < 0.0 && step[i] + p[i] < dlo[i]) {
        const double a = (dlo[i] - step[i]) / p[i];
        if (a < alpha) alpha = a, block = i;
      }
    }
    step += alpha * p;
    if (block >= 0) {
      step[block] = p[block] > 0.0 ? dhi[block] : dlo[block];
      free[static_cast<std::size_t>(block)] = false;
    }
  }
  return true;
}

Result solve(const Problem& pr, std::vector<Vec> initial_controls, const Options& opt) {
  const std::size_t n = pr.horizon();
  if (initial_controls.size() != n) throw InvalidInput("initial control sequence length must equal the horizon");
  const Vec lo = pr.lower_bound();
  const Vec hi = pr.upper_bound();
  for (auto& u : initial_controls) u = clamp(u, lo, hi);

  Rollout current = simulate(pr, initial_controls);
  if (!current.ok) throw SolverDiverged("initial rollout is not finite");

  Result res;
  res.cost_history.push_back(current.cost);
  double reg = opt.reg_init;
  BackwardResult last_bw;

  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    BackwardResult bw;
    for (;;) {
      bw = backward_pass(pr, current.states, current.controls, reg);
      if (bw.ok) break;
      reg = std::max(reg * opt.reg_increase, opt.reg_min);
      if (reg > opt.reg_max) throw SolverDiverged("regularisation overflow in backward pass");
    }
    last_bw = bw;

    const double scale = std::max(std::abs(current.cost), 1e-12);
    if (-bw.dv_linear < opt.relative_tolerance * 1e-3 * scale) {
      res.converged = true;
      break;
    }

    bool accepted = false;
    double alpha = 1.0;
    double accepted_alpha = 0.0;
    Rollout trial;
    for (int ls = 0; ls < opt.line_search_steps; ++ls, alpha *= 0.5) {
      std::vector<Vec> us(n);
      trial.states.clear();
      trial.states.push_back(pr.initial_state());
      double cost = 0.0;
      bool finite = true;
      try {
        for (std::size_t k = 0; k < n; ++k) {
          const Vec dx = trial.states[k] - current.states[k];
          us[k] = clamp(current.controls[k] + alpha * bw.k[k] + bw.big_k[k] * dx, lo, hi);
          cost += pr.stage_cost(trial.states[k], us[k], k);
          trial.states.push_back(pr.step(trial.states[k], us[k], k));
        }
        cost += pr.final_cost(trial.states.back());
      } catch (const std::exception&) {
        finite = false;
      }
      if (!finite || !std::isfinite(cost)) continue;
      const double expected = -(alpha * bw.dv_linear + alpha * alpha * bw.dv_quadratic);
      const double actual = current.cost - cost;
      if (actual > 0.0 && (expected <= 0.0 || actual / expected > opt.armijo)) {
        trial.controls = std::move(us);
        trial.cost = cost;
        accepted = true;
        accepted_alpha = alpha;
        break;
      }
    }

    if (!accepted) {
      reg = std::max(reg * opt.reg_increase, opt.reg_min);
      if (reg > opt.reg_max) {
        if (-bw.dv_linear < opt.relative_tolerance * scale) {
          res.converged = true;
          break;
        }
        throw SolverDiverged("regularisation overflow in line search");
      }
      continue;
    }

    const double improvement = current.cost - trial.cost;
    res.improvements.push_back(improvement);
    res.cost_history.push_back(trial.cost);
    current = std::move(trial);
    reg = std::max(reg * opt.reg_decrease, opt.reg_min);
    // Tiny gains from heavily damped steps are not a stationarity signal.
    if (accepted_alpha == 1.0 && improvement / scale < opt.relative_tolerance) {
      res.converged = true;
      ++iter;
      break;
    }
  }

  res.states = std::move(current.states);
  res.controls = std::move(current.controls);
  res.cost = current.cost;
  res.gains = std::move(last_bw.big_k);
  res.feedforward = std::move(last_bw.k);
  res.iterations = iter;
  return res;
}

}  // namespace viaes::ilqr
