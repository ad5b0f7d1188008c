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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any failure.
#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"

#include "viaes/config.hpp"
#include "viaes/dynamics.hpp"
#include "viaes/energy.hpp"
#include "viaes/harness.hpp"
#include "viaes/ilqr.hpp"
#include "viaes/oces.hpp"
#include "viaes/tasks.hpp"
#include "viaes/tidc.hpp"

namespace fs = std::filesystem;
using namespace viaes;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared run outputs, reused by the determinism check.
struct Runs {
  fs::path root;
  int jobs = 1;
  harness::FrontierReport frontier;
  harness::RunReport task1, pi2seq, task2;
  bool have_frontier = false, have_task1 = false, have_pi2seq = false, have_task2 = false;
};

// 1. iLQR against the discrete Riccati recursion.
class DoubleIntegrator final : public ilqr::Problem {
 public:
  DoubleIntegrator() {
    a << 1.0, dt, 0.0, 1.0;
    b << 0.5 * dt * dt, dt;
  }
  int state_dim() const override { return 2; }
  int control_dim() const override { return 1; }
  std::size_t horizon() const override { return n; }
  ilqr::Vec initial_state() const override { return Eigen::Vector2d(-0.7, 0.3); }
  ilqr::Vec lower_bound() const override { return ilqr::Vec::Constant(1, -1e8); }
  ilqr::Vec upper_bound() const override { return ilqr::Vec::Constant(1, 1e8); }
  ilqr::Vec step(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t) const override { return a * x + b * u; }
  ilqr::Vec step_linearized(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Mat& fa,
                            ilqr::Mat& fb) const override {
    fa = a;
    fb = b;
    return a * x + b * u;
  }
  double stage_cost(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t) const override {
    return 0.5 * (x.dot(q * x) + r * u.squaredNorm());
  }
  void stage_expansion(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Expansion& e) const override {
    e.lx = q * x;
    e.lu = r * u;
    e.lxx = q;
    e.luu = ilqr::Mat::Constant(1, 1, r);
    e.lux = ilqr::Mat::Zero(1, 2);
  }
  double final_cost(const ilqr::Vec& x) const override { return 0.5 * x.dot(qf * x); }
  void final_expansion(const ilqr::Vec& x, ilqr::Vec& lx, ilqr::Mat& lxx) const override {
    lx = qf * x;
    lxx = qf;
  }

  double dt = 0.1, r = 0.2;
  std::size_t n = 80;
  Eigen::Matrix2d a, q = Eigen::Vector2d(2.0, 0.5).asDiagonal(), qf = 50.0 * Eigen::Matrix2d::Identity();
  Eigen::Vector2d b;
};

Outcome criterion1() {
  const auto t0 = Clock::now();
  const DoubleIntegrator pr;
  ilqr::Options opt;
  opt.reg_init = opt.reg_min;
  const auto res = ilqr::solve(pr, std::vector<ilqr::Vec>(pr.n, ilqr::Vec::Zero(1)), opt);
  const double secs = since(t0);

  std::vector<Eigen::RowVector2d> k(pr.n);
  Eigen::Matrix2d p = pr.qf;
  for (std::size_t i = pr.n; i-- > 0;) {
    k[i] = (pr.b.transpose() * p * pr.a) / (pr.r + pr.b.dot(p * pr.b));
    p = pr.q + pr.a.transpose() * p * (pr.a - pr.b * k[i]);
  }
  Eigen::Vector2d x = pr.initial_state();
  double cost = 0.0, du = 0.0;
  for (std::size_t i = 0; i < pr.n; ++i) {
    const double u = -k[i] * x;
    du = std::max(du, std::abs(u - res.controls[i][0]));
    cost += 0.5 * (x.dot(pr.q * x) + pr.r * u * u);
    x = pr.a * x + pr.b * u;
  }
  cost += 0.5 * x.dot(pr.qf * x);
  const double dj = std::abs(cost - res.cost);
  return {du < 1e-6 && dj < 1e-6 && secs < 1.0,
          fmt("max |du| %.2e, |dJ| %.2e (tol 1e-6), %.3f s (limit 1 s)", du, dj, secs)};
}

// 2. Jacobians against central differences.
Outcome criterion2() {
  const auto t0 = Clock::now();
  const PhysicalParams p;
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u01(rng); };
  double worst_f = 0.0, worst_step = 0.0, worst_act = 0.0;
  int samples = 0;
  while (samples < 1000) {
    State x;
    x << in(p.u_min[0], p.u_max[0]), in(-4, 4), in(p.u_min[0], p.u_max[0]), in(p.theta2_min, p.theta2_max),
        in(-4, 4), in(-4, 4);
    Control u;
    for (int i = 0; i < 3; ++i) u[i] = in(p.u_min[i], p.u_max[i]);
    if (lever_extension(x[0], x[2], p) < 1e-3) continue;
    ++samples;
    StateMatrix fx, ax;
    InputMatrix fu, bu;
    dynamics_jacobians(x, u, p, fx, fu);
    step_with_jacobians(x, u, 0.02, p, ax, bu);
    Eigen::Matrix<double, 6, 9> an_f, an_s, fd_f, fd_s;
    an_f << fx, fu;
    an_s << ax, bu;
    Eigen::RowVector3d fd_a;
    for (int j = 0; j < 9; ++j) {
      State xp = x, xm = x;
      Control up = u, um = u;
      const double h = 1e-6;
      (j < 6 ? xp[j] : up[j - 6]) += h;
      (j < 6 ? xm[j] : um[j - 6]) -= h;
      fd_f.col(j) = (dynamics(xp, up, p) - dynamics(xm, um, p)) / (2 * h);
      fd_s.col(j) = (step(xp, up, 0.02, p) - step(xm, um, 0.02, p)) / (2 * h);
      const int slot = j == ix::q ? 0 : j == ix::th1 ? 1 : j == ix::th2 ? 2 : -1;
      if (slot >= 0) fd_a[slot] = (spring_torques(xp, p).joint - spring_torques(xm, p).joint) / (2 * h);
    }
    const auto aj = actuator_torque_jacobians(x, p);
    const Eigen::RowVector3d an_a(aj.j_q, aj.j_theta[0], aj.j_theta[1]);
    worst_f = std::max(worst_f, (an_f - fd_f).norm() / fd_f.norm());
    worst_step = std::max(worst_step, (an_s - fd_s).norm() / fd_s.norm());
    worst_act = std::max(worst_act, (an_a - fd_a).norm() / std::max(fd_a.norm(), 1e-300));
  }
  const double secs = since(t0);
  const double worst = std::max({worst_f, worst_step, worst_act});
  return {worst < 1e-4 && secs < 30.0,
          fmt("%d samples, rel err dynamics %.1e, RK4 step %.1e, actuator %.1e (tol 1e-4), %.2f s", samples, worst_f,
              worst_step, worst_act, secs)};
}

// 3. Energy grid convergence and E_elec >= E_in.
Outcome criterion3() {
  const auto spec = default_spec(ExperimentKind::kTask1IlqrEs);
  const PhysicalParams& p = spec.physical;
  const ReachEpisode ep = reach_episode(spec.reach, p, spec.xi0);
  std::vector<Control> coarse;
  for (const auto& part : ep.parts)
    coarse.insert(coarse.end(), part.trajectory.controls.begin(), part.trajectory.controls.end());
  std::vector<double> e;
  bool elec_ok = true;
  int episodes = 0;
  ReachSequence task = spec.reach;
  for (double h : {0.002, 0.001, 0.0005}) {
    task.dt_fine = h;
    const Trajectory fine = resimulate(task.x0, coarse, task.dt, h, p);
    const auto rep = energy_report(fine, p, reach_sequence_reference(task));
    e.push_back(rep.e_in);
    elec_ok = elec_ok && rep.e_elec >= rep.e_in;
    ++episodes;
  }
  // Further episodes of other kinds.
  DmpSequenceTask dmp;
  const auto dmp_ep = dmp_episode(dmp, p, initial_policy(dmp.encoding, dmp.reach.targets, M_PI / 24, 0.5));
  elec_ok = elec_ok && dmp_ep.report.e_elec >= dmp_ep.report.e_in;
  const auto t2 = default_spec(ExperimentKind::kTask2TidcEs);
  const TrackingAdapter ta(t2.tracking, p, t2.xi_min, t2.xi_max);
  const auto tr = ta.episode(t2.xi0);
  elec_ok = elec_ok && tr.report.e_elec >= tr.report.e_in;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int s = 0; s < 5; ++s) {
    std::vector<Control> u(50);
    for (auto& c : u) c = Control{-1.0 + 2.0 * u01(rng), 1.5 * u01(rng), u01(rng)};
    const Trajectory fine = resimulate(spec.reach.x0, u, 0.02, 0.001, p);
    const std::vector<std::size_t> steps{fine.steps()};
    const std::vector<double> targets{0.0};
    const auto rep = energy_report(fine, p, reach_reference(steps, targets));
    elec_ok = elec_ok && rep.e_elec >= rep.e_in;
  }
  episodes += 7;
  const double d1 = std::abs(e[0] - e[1]), d2 = std::abs(e[1] - e[2]);
  const double ratio = d1 / d2;
  return {ratio >= 2.0 && elec_ok,
          fmt("E_in %.6f / %.6f / %.6f J at dt 2/1/0.5 ms, shrink factor %.2f (need >= 2); E_elec >= E_in on %d/%d "
              "episodes",
              e[0], e[1], e[2], ratio, elec_ok ? episodes : -1, episodes)};
}

// 4. Frontier trend.
Outcome criterion4(Runs& runs) {
  const auto spec = default_spec(ExperimentKind::kFrontier);
  harness::RunOptions opts{runs.root / "frontier", runs.jobs, std::nullopt};
  runs.frontier = harness::run_frontier(spec, opts);
  runs.have_frontier = true;
  const auto& rows = runs.frontier.rows;
  int dominated = 0, failed = 0, not_decreasing = 0;
  for (const auto& r : rows) failed += r.failed ? 1 : 0;
  for (double ps : spec.frontier.presets) {
    std::vector<FrontierRow> curve;
    for (const auto& r : rows)
      if (r.preset == ps) curve.push_back(r);
    for (const auto& a : curve)
      for (const auto& b : curve) {
        const bool dom = b.j_perf <= a.j_perf && b.e_in <= a.e_in && (b.j_perf < a.j_perf || b.e_in < a.e_in);
        dominated += dom ? 1 : 0;
      }
    auto at = [&](double w) {
      for (const auto& r : curve)
        if (r.effort_weight == w) return r.e_in;
      return std::nan("");
    };
    if (!(at(10.0) < at(1.0))) ++not_decreasing;
  }
  const std::size_t expected = spec.frontier.presets.size() * spec.frontier.effort_weights.size();
  return {rows.size() == expected && failed == 0 && dominated == 0 && not_decreasing == 0 &&
              runs.frontier.seconds < 600.0,
          fmt("%zu rows, %d failed, %d dominated points, %d curves where E_in(w=10) >= E_in(w=1), %.1f s", rows.size(),
              failed, dominated, not_decreasing, runs.frontier.seconds)};
}

// 5. Task 1 ILQR-ES.
Outcome criterion5(Runs& runs) {
  const auto spec = default_spec(ExperimentKind::kTask1IlqrEs);
  harness::RunOptions opts{runs.root / "task1-ilqr-es", runs.jobs, std::nullopt};
  runs.task1 = harness::run_task1_ilqr_es(spec, opts);
  runs.have_task1 = true;
  const auto& rep = runs.task1;
  int good = 0;
  double slowest = 0.0;
  std::string per;
  for (const auto& s : rep.seeds) {
    const bool red = 1.0 - s.final.e_in / rep.baseline.e_in >= 0.25;
    const bool perf = s.final.j_perf <= 1.1 * rep.baseline.j_perf;
    good += red && perf ? 1 : 0;
    slowest = std::max(slowest, s.seconds);
    per += fmt(" %.1f%%", 100.0 * (1.0 - s.final.e_in / rep.baseline.e_in));
  }
  return {rep.seeds.size() == 4 && good >= 3 && slowest < 1200.0 && rep.baseline_verified,
          fmt("ILQR-0 E_in %.4f J; reductions%s; %d/4 seeds meet >= 25%% and J_p <= 1.1 J_p0; slowest seed %.1f s",
              rep.baseline.e_in, per.c_str(), good, slowest)};
}

// 6. PI2SEQ baseline.
Outcome criterion6(Runs& runs) {
  const auto spec = default_spec(ExperimentKind::kTask1Pi2Seq);
  harness::RunOptions opts{runs.root / "task1-pi2seq", runs.jobs, std::nullopt};
  runs.pi2seq = harness::run_task1_pi2seq(spec, opts);
  runs.have_pi2seq = true;
  const auto& rep = runs.pi2seq;
  double mean_final = 0.0, slowest = 0.0;
  bool samples_ok = true;
  for (const auto& s : rep.seeds) {
    mean_final += s.final.e_in / static_cast<double>(rep.seeds.size());
    slowest = std::max(slowest, s.seconds);
    for (std::size_t i = 1; i < s.history.rows.size(); ++i) samples_ok = samples_ok && s.history.rows[i].samples == 45;
    samples_ok = samples_ok && s.history.best_xi.size() == 99;
  }
  const double red = 1.0 - mean_final / rep.baseline.e_in;
  const double red_dmp0 = 1.0 - mean_final / rep.initial.e_in;
  return {rep.seeds.size() == 4 && red >= 0.15 && samples_ok && slowest < 1800.0,
          fmt("mean final E_in %.5f J vs ILQR-0 %.4f J: %.1f%% (need >= 15%%); vs DMP-0 %.5f J: %.1f%%; "
              "45 samples/iteration %s; slowest seed %.1f s",
              mean_final, rep.baseline.e_in, 100 * red, rep.initial.e_in, 100 * red_dmp0, samples_ok ? "yes" : "no",
              slowest)};
}

// 7. Task 2 TIDC-ES.
Outcome criterion7(Runs& runs) {
  const auto spec = default_spec(ExperimentKind::kTask2TidcEs);
  harness::RunOptions opts{runs.root / "task2-tidc-es", runs.jobs, std::nullopt};
  runs.task2 = harness::run_task2_tidc_es(spec, opts);
  runs.have_task2 = true;
  const auto& rep = runs.task2;
  const auto& s = rep.seeds.front();
  // Segment with the largest travel, starting from the initial joint angle.
  std::size_t longest = 0;
  double prev = spec.tracking.x0[ix::q], best_travel = -1.0;
  for (std::size_t i = 0; i < spec.tracking.targets.size(); ++i) {
    const double travel = std::abs(spec.tracking.targets[i] - prev);
    if (travel > best_travel) {
      best_travel = travel;
      longest = i;
    }
    prev = spec.tracking.targets[i];
  }
  const double red = 1.0 - s.final.e_in / rep.baseline.e_in;
  const double d = s.durations.at(longest);
  const bool timing = rep.wrong_length_rollouts == 0 && rep.max_total_time_error <= 1e-12 && rep.audited_rollouts > 0;
  return {red >= 0.25 && d > 0.6 && timing,
          fmt("TIDC-0 E_in %.5f J -> %.5f J: %.1f%% (need >= 25%%); segment %zu (%.2f rad) duration %.4f s (need > "
              "0.6); %zu rollouts, max |sum t - 2.4| %.1e s, %zu off-grid",
              rep.baseline.e_in, s.final.e_in, 100 * red, longest + 1, best_travel, d, rep.audited_rollouts,
              rep.max_total_time_error, rep.wrong_length_rollouts)};
}

// 8. ES properties.
Outcome criterion8() {
  using namespace oces;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  bool simplex = true, affine = true, box = true, elite = true;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 20;
    std::vector<double> costs(static_cast<std::size_t>(k));
    for (auto& c : costs) c = std::exp(g(rng));
    const auto w = softmax_weights(costs, 10.0);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    const auto best = std::min_element(costs.begin(), costs.end()) - costs.begin();
    simplex = simplex && std::abs(sum - 1.0) < 1e-12 && std::all_of(w.begin(), w.end(), [](double v) { return v > 0; });
    for (std::size_t i = 0; i < w.size(); ++i)
      if (static_cast<long>(i) != best) simplex = simplex && w[i] < w[static_cast<std::size_t>(best)];
    std::vector<double> shifted;
    const double a = std::exp(g(rng)), b = 10 * g(rng);
    for (double c : costs) shifted.push_back(a * c + b);
    const auto ws = softmax_weights(shifted, 10.0);
    for (std::size_t i = 0; i < w.size(); ++i) affine = affine && std::abs(w[i] - ws[i]) < 1e-9;

    // Update on random records: box safety and elite correctness.
    const Eigen::Index dim = 4;
    const Vec lo = Vec::Constant(dim, -0.5), hi = Vec::Constant(dim, 0.8);
    EsConfig cfg;
    cfg.exploration = Vec::Constant(dim, 1.0);
    Vec xi = Vec::Constant(dim, 0.1);
    std::vector<RolloutRecord> pool;
    for (int i = 0; i < k; ++i) {
      auto r = substream(5, static_cast<std::uint64_t>(trial), static_cast<std::uint64_t>(i));
      RolloutRecord rec;
      rec.xi = perturb(xi, lo, hi, cfg, 1 + trial % 30, r);
      rec.j = costs[static_cast<std::size_t>(i)];
      rec.failed = i % 7 == 3;
      box = box && (rec.xi.array() >= lo.array()).all() && (rec.xi.array() <= hi.array()).all();
      pool.push_back(rec);
    }
    const int mu = 3;
    const auto up = update(pool, xi, lo, hi, 10.0, mu);
    box = box && (up.xi.array() >= lo.array()).all() && (up.xi.array() <= hi.array()).all();
    std::vector<double> ok_costs;
    for (const auto& r : pool)
      if (!r.failed) ok_costs.push_back(r.j);
    std::sort(ok_costs.begin(), ok_costs.end());
    const std::size_t keep = std::min<std::size_t>(mu, ok_costs.size());
    elite = elite && up.elites.size() == keep;
    for (std::size_t i = 0; i < keep && i < up.elites.size(); ++i) elite = elite && up.elites[i].j == ok_costs[i];
  }
  // Variance decay over 20 iterations.
  EsConfig cfg;
  cfg.decay = 0.95;
  cfg.exploration = Vec::Constant(1, 0.5);
  auto variance = [&](int n) {
    double s = 0.0;
    const int m = 100000;
    for (int i = 0; i < m; ++i) {
      auto r = substream(99, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(i));
      const double e = perturb(Vec::Zero(1), Vec::Constant(1, -1e9), Vec::Constant(1, 1e9), cfg, n, r)[0];
      s += e * e;
    }
    return s / m;
  };
  const double ratio = variance(21) / variance(1);
  const double target = std::pow(0.95, 20);
  const bool decay = std::abs(ratio / target - 1.0) <= 0.05;
  const auto eq = softmax_weights({3.0, 3.0, 3.0}, 10.0);
  const bool degenerate = std::all_of(eq.begin(), eq.end(), [](double v) { return v == 1.0 / 3.0; });
  const double secs = since(t0);
  return {simplex && affine && box && elite && decay && degenerate && secs < 60.0,
          fmt("simplex %s, affine invariance %s, box %s, elites %s, decay ratio %.4f vs %.4f, equal costs %s, %.2f s",
              simplex ? "ok" : "FAIL", affine ? "ok" : "FAIL", box ? "ok" : "FAIL", elite ? "ok" : "FAIL", ratio,
              target, degenerate ? "ok" : "FAIL", secs)};
}

// 9. Minimal jerk against a discretised QP.
Outcome criterion9() {
  double worst = 0.0, bc = 0.0;
  const std::vector<MinJerkSegment> segs{{0.0, 0.628, 0.6}, {0.628, -0.2, 0.55}, {-0.2, 1.0, 0.69}, {1.0, 0.3, 0.4}};
  const int n = 400;
  for (const auto& seg : segs) {
    // Piecewise constant jerk on n intervals; least-norm jerk meeting the rest-to-rest endpoint.
    const double h = seg.duration / n;
    Eigen::MatrixXd a(3, n);
    for (int k = 0; k < n; ++k) {
      const double tau = (n - 1 - k) * h;
      a(0, k) = h * h * h / 6.0 + tau * h * h / 2.0 + tau * tau * h / 2.0;
      a(1, k) = h * h / 2.0 + tau * h;
      a(2, k) = h;
    }
    const Eigen::VectorXd jerk =
        a.transpose() * (a * a.transpose()).ldlt().solve(Eigen::Vector3d(seg.qf - seg.q0, 0.0, 0.0));
    double q = seg.q0, v = 0.0, acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      worst = std::max(worst, std::abs(q - min_jerk(seg, h * k).q));
      if (k == n) break;
      q += v * h + acc * h * h / 2.0 + jerk[k] * h * h * h / 6.0;
      v += acc * h + jerk[k] * h * h / 2.0;
      acc += jerk[k] * h;
    }
    const auto s0 = min_jerk(seg, 0.0), s1 = min_jerk(seg, seg.duration);
    bc = std::max({bc, std::abs(s0.q - seg.q0), std::abs(s0.qd), std::abs(s0.qdd), std::abs(s1.q - seg.qf),
                   std::abs(s1.qd), std::abs(s1.qdd)});
  }
  return {worst < 1e-4 && bc <= 1e-12,
          fmt("max deviation from QP %.2e rad (tol 1e-4), boundary error %.1e (tol 1e-12)", worst, bc)};
}

// 10. TIDC null space and tracking.
Outcome criterion10() {
  const auto spec = default_spec(ExperimentKind::kTask2TidcEs);
  const PhysicalParams& p = spec.physical;
  TrackingTask task = spec.tracking;
  const auto placed = TidcGains::triple_pole(15.0);
  task.gains.k1 = placed.k1;
  task.gains.k2 = placed.k2;
  task.gains.k3 = placed.k3;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double ns = 0.0;
  for (int s = 0; s < 1000; ++s) {
    State x;
    x << -1 + 2 * u01(rng), g(rng), -1.5 + 3 * u01(rng), 1.57 * u01(rng), g(rng), g(rng);
    if (lever_extension(x[0], x[2], p) < 1e-3) continue;
    const MinJerkSample ref{g(rng), g(rng), g(rng), g(rng)};
    const auto c0 = tidc_control(x, ref, task.gains, Eigen::Vector2d::Zero(), p);
    const auto c1 = tidc_control(x, ref, task.gains, Eigen::Vector2d(5 * g(rng), 5 * g(rng)), p);
    if (c0.fallback) continue;
    const auto j = actuator_torque_jacobians(x, p);
    ns = std::max(ns, std::abs(j.j_theta.dot(c1.v - c0.v)));
  }
  const TrackingAdapter a(task, p, spec.xi_min, spec.xi_max);
  const auto ep = a.episode(spec.xi0);
  double err = 0.0;
  for (std::size_t k = 0; k < ep.q_des.size(); ++k)
    err = std::max(err, std::abs(ep.trajectory.states[k][ix::q] - ep.q_des[k]));
  return {ns < 1e-9 && err < 0.02,
          fmt("null-space torque-rate effect %.1e (tol 1e-9); max tracking error %.4f rad (tol 0.02), pole -15",
              ns, err)};
}

// 11. Byte-identical reruns.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Every CSV under `rerun` must exist under `first` with identical bytes.
std::pair<int, int> compare_csvs(const fs::path& first, const fs::path& rerun, bool skip_summary) {
  int total = 0, same = 0;
  for (const auto& e : fs::recursive_directory_iterator(rerun)) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    if (skip_summary && e.path().filename() == "summary.csv") continue;
    const auto rel = fs::relative(e.path(), rerun);
    ++total;
    if (fs::exists(first / rel) && slurp(first / rel) == slurp(e.path())) ++same;
  }
  return {same, total};
}

Outcome criterion11(Runs& runs) {
  const fs::path again = runs.root / "rerun";
  fs::remove_all(again);
  int same = 0, total = 0;
  std::string per;
  auto tally = [&](const char* name, std::pair<int, int> r) {
    same += r.first;
    total += r.second;
    per += fmt(" %s %d/%d", name, r.first, r.second);
  };
  const int other_jobs = runs.jobs == 1 ? 3 : 1;  // also shows thread-count independence
  if (runs.have_frontier) {
    harness::run_frontier(default_spec(ExperimentKind::kFrontier), {again / "frontier", other_jobs, std::nullopt});
    tally("frontier", compare_csvs(runs.root / "frontier", again / "frontier", false));
  }
  if (runs.have_task1) {
    harness::run_task1_ilqr_es(default_spec(ExperimentKind::kTask1IlqrEs),
                               {again / "task1-ilqr-es", other_jobs, std::nullopt});
    tally("task1-ilqr-es", compare_csvs(runs.root / "task1-ilqr-es", again / "task1-ilqr-es", false));
  }
  if (runs.have_pi2seq) {
    harness::run_task1_pi2seq(default_spec(ExperimentKind::kTask1Pi2Seq), {again / "task1-pi2seq", other_jobs, 1});
    tally("task1-pi2seq(seed 1)", compare_csvs(runs.root / "task1-pi2seq", again / "task1-pi2seq", true));
  }
  if (runs.have_task2) {
    harness::run_task2_tidc_es(default_spec(ExperimentKind::kTask2TidcEs),
                               {again / "task2-tidc-es", other_jobs, std::nullopt});
    tally("task2-tidc-es", compare_csvs(runs.root / "task2-tidc-es", again / "task2-tidc-es", false));
  }
  return {total > 0 && same == total, fmt("identical CSVs:%s (rerun with %d worker threads)", per.c_str(), other_jobs)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-11"};
  Runs runs;
  std::string out = "acceptance_out";
  runs.jobs = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
  app.add_option("--out", out, "Directory for experiment outputs")->capture_default_str();
  app.add_option("--jobs", runs.jobs, "Worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  runs.root = out;
  fs::remove_all(runs.root);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"LQR oracle", criterion1},
      {"derivative suite", criterion2},
      {"energy convergence", criterion3},
      {"frontier reproduction", [&] { return criterion4(runs); }},
      {"task 1 ILQR-ES", [&] { return criterion5(runs); }},
      {"task 1 PI2SEQ baseline", [&] { return criterion6(runs); }},
      {"task 2 TIDC-ES", [&] { return criterion7(runs); }},
      {"ES unit properties", criterion8},
      {"min-jerk oracle", criterion9},
      {"TIDC closed loop", criterion10},
      {"determinism", [&] { return criterion11(runs); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
