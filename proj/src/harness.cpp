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

#include "viaes/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>

#include "viaes/csv.hpp"
#include "viaes/dynamics.hpp"
#include "viaes/simd/kernels.hpp"
#include "viaes/tasks.hpp"

namespace viaes::harness {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

EpisodeMetrics metrics(const EnergyReport& r, const std::string& csv_text) {
  return {r.e_in, r.e_elec, r.j_perf, r.j_energy, csv::fnv1a(csv_text)};
}

json metrics_json(const EpisodeMetrics& m) {
  return {{"E_in", m.e_in}, {"E_elec", m.e_elec}, {"J_p", m.j_perf}, {"J_e", m.j_energy}, {"hash", csv::hex(m.hash)}};
}

std::vector<std::uint64_t> seed_list(const ExperimentSpec& spec, const RunOptions& opts) {
  if (opts.seed) return {*opts.seed};
  return spec.seeds;
}

void write(const RunOptions& opts, const std::string& name, const std::string& content) {
  if (!opts.out.empty()) csv::write_file(opts.out / name, content);
}

struct FinalEpisode {
  EpisodeMetrics metrics;
  std::string csv;
  std::vector<double> durations;
};

/// Shared ES driver: baseline and initial episodes are already computed;
/// `final_episode` replays a policy.
RunReport run_es(const ExperimentSpec& spec, const RunOptions& opts, const oces::TaskAdapter& adapter,
                 const FinalEpisode& baseline, const std::string& baseline_name, const FinalEpisode* initial,
                 const std::function<FinalEpisode(const Eigen::VectorXd&)>& final_episode) {
  RunReport rep;
  rep.kind = spec.kind;
  rep.baseline = baseline.metrics;
  rep.initial = initial ? initial->metrics : baseline.metrics;
  write(opts, "baseline_trajectory.csv", baseline.csv);
  if (initial) write(opts, "initial_trajectory.csv", initial->csv);

  std::vector<oces::LearningHistory> histories;
  for (std::uint64_t seed : seed_list(spec, opts)) {
    const auto t0 = Clock::now();
    oces::EsConfig cfg = spec.es;
    cfg.seed = seed;
    SeedRun run;
    run.seed = seed;
    run.history = oces::run(adapter, cfg, spec.xi0, opts.jobs);
    const FinalEpisode fin = final_episode(run.history.best_xi);
    run.final = fin.metrics;
    run.durations = fin.durations;
    run.seconds = seconds_since(t0);

    const std::string dir = "seed_" + std::to_string(seed) + "/";
    write(opts, dir + "history.csv", csv::history(run.history));
    write(opts, dir + "final_trajectory.csv", fin.csv);
    json elites = json::array();
    for (const auto& e : run.history.elites)
      elites.push_back({{"xi", to_std(e.xi)}, {"J", e.j}, {"J_e", e.j_energy}, {"J_p", e.j_perf}});
    const json result = {{"seed", seed},
                         {"iterations", run.history.rows.back().iteration},
                         {"converged", run.history.converged},
                         {"J_p_bound", run.history.j_perf_bound},
                         {"best_iteration", run.history.best_iteration},
                         {"best_xi", to_std(run.history.best_xi)},
                         {"final_xi", to_std(run.history.final_xi)},
                         {"elites", elites}};
    write(opts, dir + "result.json", result.dump(2) + "\n");
    ExperimentSpec resume = spec;
    resume.xi0 = run.history.final_xi;
    resume.seeds = {seed};
    write(opts, dir + "resume.json", to_json(resume).dump(2) + "\n");

    histories.push_back(run.history);
    rep.seeds.push_back(std::move(run));
  }
  write(opts, "summary.csv", csv::seed_summary(histories));

  // Baseline immutability: the stored CSV must still hash to the value taken
  // when it was produced.
  rep.baseline_verified = csv::fnv1a(baseline.csv) == rep.baseline.hash;
  if (!rep.baseline_verified) throw std::logic_error("baseline episode changed during the run");
  double sum = 0.0;
  for (auto& s : rep.seeds) {
    s.reduction = 1.0 - s.final.j_energy / rep.baseline.j_energy;
    s.reduction_vs_initial = 1.0 - s.final.j_energy / rep.initial.j_energy;
    sum += s.reduction;
  }
  rep.mean_reduction = rep.seeds.empty() ? 0.0 : sum / static_cast<double>(rep.seeds.size());

  json seeds = json::array();
  for (const auto& s : rep.seeds) {
    json entry = {{"seed", s.seed},
                  {"final", metrics_json(s.final)},
                  {"best_iteration", s.history.best_iteration},
                  {"J_p_bound", s.history.j_perf_bound},
                  {"relative_reduction", s.reduction},
                  {"relative_reduction_vs_initial", s.reduction_vs_initial},
                  {"best_xi", to_std(s.history.best_xi)}};
    if (!s.durations.empty()) entry["durations"] = s.durations;
    seeds.push_back(entry);
  }
  json report = {{"kind", to_string(spec.kind)},
                 {baseline_name, metrics_json(rep.baseline)},
                 {"initial", metrics_json(rep.initial)},
                 {"baseline_verified", rep.baseline_verified},
                 {"mean_relative_reduction", rep.mean_reduction},
                 {"seeds", seeds},
                 {"config", to_json(spec)}};
  write(opts, "report.json", report.dump(2) + "\n");
  return rep;
}

FinalEpisode reach_final(const ExperimentSpec& spec, const Eigen::VectorXd& xi) {
  const ReachEpisode ep = reach_episode(spec.reach, spec.physical, xi);
  FinalEpisode f;
  f.csv = csv::trajectory(ep.fine);
  f.metrics = metrics(ep.report, f.csv);
  return f;
}

/// ILQR-0: unit effort weights, presets at the lower end used by the ES start.
Eigen::VectorXd ilqr0_policy(const ExperimentSpec& spec) {
  const auto ns = static_cast<Eigen::Index>(spec.reach.targets.size());
  Eigen::VectorXd xi(2 * ns);
  xi.head(ns).setOnes();
  xi.tail(ns).setConstant(std::numbers::pi / 24.0);
  return xi;
}

/// Wraps the tracking adapter and records the timing of every rollout.
class TimingAudit final : public oces::TaskAdapter {
 public:
  TimingAudit(const TrackingAdapter& inner, const TrackingTask& task, EnergyObjective objective)
      : inner_(inner), task_(task), objective_(objective) {}
  std::size_t dim() const override { return inner_.dim(); }
  oces::Vec lower() const override { return inner_.lower(); }
  oces::Vec upper() const override { return inner_.upper(); }
  oces::Evaluation evaluate(const oces::Vec& xi) const override {
    try {
      const TrackingEpisode ep = inner_.episode(xi);
      double total = 0.0;
      for (double d : ep.durations) total += d;
      const auto expected = static_cast<std::size_t>(std::llround(task_.total_time / task_.dt));
      {
        std::lock_guard lock(mu_);
        ++count_;
        max_error_ = std::max(max_error_, std::abs(total - task_.total_time));
        if (ep.trajectory.steps() != expected) ++wrong_;
      }
      const double je = objective_ == EnergyObjective::kInputWork ? ep.report.e_in : ep.report.e_elec;
      return {je, ep.report.j_perf, true};
    } catch (const InfeasibleTiming&) {
      return {0.0, 0.0, false};
    } catch (const SingularGeometry&) {
      return {0.0, 0.0, false};
    }
  }
  void fill(RunReport& rep) const {
    rep.audited_rollouts = count_;
    rep.max_total_time_error = max_error_;
    rep.wrong_length_rollouts = wrong_;
  }

 private:
  const TrackingAdapter& inner_;
  const TrackingTask& task_;
  EnergyObjective objective_;
  mutable std::mutex mu_;
  mutable std::size_t count_ = 0;
  mutable double max_error_ = 0.0;
  mutable std::size_t wrong_ = 0;
};

// Validation helpers.

class DoubleIntegrator final : public ilqr::Problem {
 public:
  DoubleIntegrator() {
    a_ << 1.0, dt_, 0.0, 1.0;
    b_ << 0.5 * dt_ * dt_, dt_;
  }
  int state_dim() const override { return 2; }
  int control_dim() const override { return 1; }
  std::size_t horizon() const override { return 50; }
  ilqr::Vec initial_state() const override { return Eigen::Vector2d(1.0, -0.5); }
  ilqr::Vec lower_bound() const override { return ilqr::Vec::Constant(1, -1e6); }
  ilqr::Vec upper_bound() const override { return ilqr::Vec::Constant(1, 1e6); }
  ilqr::Vec step(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t) const override { return a_ * x + b_ * u; }
  ilqr::Vec step_linearized(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Mat& a,
                            ilqr::Mat& b) const override {
    a = a_;
    b = b_;
    return a_ * x + b_ * u;
  }
  double stage_cost(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t) const override {
    return 0.5 * (x.squaredNorm() + r_ * u.squaredNorm());
  }
  void stage_expansion(const ilqr::Vec& x, const ilqr::Vec& u, std::size_t, ilqr::Expansion& e) const override {
    e.lx = x;
    e.lu = r_ * u;
    e.lxx = ilqr::Mat::Identity(2, 2);
    e.luu = ilqr::Mat::Constant(1, 1, r_);
    e.lux = ilqr::Mat::Zero(1, 2);
  }
  double final_cost(const ilqr::Vec& x) const override { return 0.5 * qf_ * x.squaredNorm(); }
  void final_expansion(const ilqr::Vec& x, ilqr::Vec& lx, ilqr::Mat& lxx) const override {
    lx = qf_ * x;
    lxx = qf_ * ilqr::Mat::Identity(2, 2);
  }
  Eigen::Matrix2d a_;
  Eigen::Vector2d b_;
  double dt_ = 0.1;
  double r_ = 0.1;
  double qf_ = 10.0;
};

Check lqr_check() {
  const DoubleIntegrator prob;
  const std::vector<ilqr::Vec> u0(prob.horizon(), ilqr::Vec::Zero(1));
  // A quadratic problem needs no damping: start at the minimum regularisation.
  ilqr::Options opt;
  opt.reg_init = opt.reg_min;
  const ilqr::Result res = ilqr::solve(prob, u0, opt);
  // Backward Riccati recursion and forward rollout.
  const std::size_t n = prob.horizon();
  std::vector<Eigen::RowVector2d> gains(n);
  Eigen::Matrix2d pm = prob.qf_ * Eigen::Matrix2d::Identity();
  for (std::size_t k = n; k-- > 0;) {
    const double s = prob.r_ + prob.b_.dot(pm * prob.b_);
    gains[k] = (prob.b_.transpose() * pm * prob.a_) / s;
    pm = Eigen::Matrix2d::Identity() + prob.a_.transpose() * pm * (prob.a_ - prob.b_ * gains[k]);
  }
  Eigen::Vector2d x = prob.initial_state();
  double cost = 0.0, max_du = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double u = -gains[k] * x;
    cost += 0.5 * (x.squaredNorm() + prob.r_ * u * u);
    max_du = std::max(max_du, std::abs(u - res.controls[k][0]));
    x = prob.a_ * x + prob.b_ * u;
  }
  cost += 0.5 * prob.qf_ * x.squaredNorm();
  const double err = std::max(max_du, std::abs(cost - res.cost));
  return {"lqr_riccati_match", err, 1e-6, err < 1e-6};
}

State random_state(std::mt19937_64& rng, const PhysicalParams& p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };
  State x;
  x << in(-1.2, 1.2), in(-5.0, 5.0), in(p.u_min[0], p.u_max[0]), in(p.theta2_min, p.theta2_max), in(-5.0, 5.0),
      in(-5.0, 5.0);
  return x;
}

Control random_control(std::mt19937_64& rng, const PhysicalParams& p) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Control c;
  for (int i = 0; i < 3; ++i) c[i] = p.u_min[i] + (p.u_max[i] - p.u_min[i]) * u(rng);
  return c;
}

double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& fd) {
  return (a - fd).norm() / std::max(fd.norm(), 1e-12);
}

std::vector<Check> jacobian_checks(const PhysicalParams& p) {
  std::mt19937_64 rng(20240917);
  double worst_dyn = 0.0, worst_step = 0.0, worst_act = 0.0;
  const double dt = 0.02;
  for (int s = 0; s < 1000; ++s) {
    const State x = random_state(rng, p);
    const Control u = random_control(rng, p);
    if (lever_extension(x[ix::q], x[ix::th1], p) < 1e-3) continue;
    StateMatrix fx, ax;
    InputMatrix fu, bu;
    dynamics_jacobians(x, u, p, fx, fu);
    step_with_jacobians(x, u, dt, p, ax, bu);
    Eigen::Matrix<double, 6, 9> fd_c, fd_s, an_c, an_s;
    an_c << fx, fu;
    an_s << ax, bu;
    Eigen::RowVector3d fd_act;
    for (int j = 0; j < 9; ++j) {
      State xp = x, xm = x;
      Control up = u, um = u;
      const double h = 1e-6;
      if (j < 6) {
        xp[j] += h;
        xm[j] -= h;
      } else {
        up[j - 6] += h;
        um[j - 6] -= h;
      }
      fd_c.col(j) = (dynamics(xp, up, p) - dynamics(xm, um, p)) / (2 * h);
      fd_s.col(j) = (step(xp, up, dt, p) - step(xm, um, dt, p)) / (2 * h);
      if (j == ix::q || j == ix::th1 || j == ix::th2) {
        const double d = (spring_torques(xp, p).joint - spring_torques(xm, p).joint) / (2 * h);
        fd_act[j == ix::q ? 0 : (j == ix::th1 ? 1 : 2)] = d;
      }
    }
    const auto aj = actuator_torque_jacobians(x, p);
    const Eigen::RowVector3d an_act(aj.j_q, aj.j_theta[0], aj.j_theta[1]);
    worst_dyn = std::max(worst_dyn, rel_err(an_c, fd_c));
    worst_step = std::max(worst_step, rel_err(an_s, fd_s));
    worst_act = std::max(worst_act, rel_err(an_act, fd_act));
  }
  return {{"dynamics_jacobian_fd", worst_dyn, 1e-4, worst_dyn < 1e-4},
          {"rk4_step_jacobian_fd", worst_step, 1e-4, worst_step < 1e-4},
          {"actuator_jacobian_fd", worst_act, 1e-4, worst_act < 1e-4}};
}

std::vector<Check> energy_checks(const ExperimentSpec& spec) {
  ReachSequence task = spec.reach;
  const ReachEpisode ep = reach_episode(task, spec.physical, ilqr0_policy(spec));
  std::vector<Control> commands;
  for (const auto& part : ep.parts)
    commands.insert(commands.end(), part.trajectory.controls.begin(), part.trajectory.controls.end());
  std::vector<EnergyReport> reps;
  for (double h : {0.002, 0.001, 0.0005}) {
    task.dt_fine = h;
    const Trajectory fine = resimulate(task.x0, commands, task.dt, h, spec.physical);
    reps.push_back(energy_report(fine, spec.physical, reach_sequence_reference(task), task.objective));
  }
  const double d1 = std::abs(reps[0].e_in - reps[1].e_in);
  const double d2 = std::abs(reps[1].e_in - reps[2].e_in);
  const double ratio = d2 > 0.0 ? d1 / d2 : std::numeric_limits<double>::infinity();
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& r : reps) margin = std::min(margin, r.e_elec - r.e_in);
  return {{"energy_grid_ratio", ratio, 2.0, ratio >= 2.0}, {"elec_minus_input_work", margin, 0.0, margin >= 0.0}};
}

std::vector<Check> tidc_checks(const ExperimentSpec& spec) {
  const PhysicalParams& p = spec.physical;
  // Boundary conditions of the quintic.
  const MinJerkSegment seg{0.2, -0.9, 0.7};
  const auto a = min_jerk(seg, 0.0);
  const auto b = min_jerk(seg, seg.duration);
  const double bc = std::max({std::abs(a.q - seg.q0), std::abs(a.qd), std::abs(a.qdd), std::abs(b.q - seg.qf),
                              std::abs(b.qd), std::abs(b.qdd)});

  // The null-space command must not change J_theta v.
  std::mt19937_64 rng(77);
  std::normal_distribution<double> n01;
  double worst_ns = 0.0;
  const TidcGains& g = spec.tracking.gains;
  for (int s = 0; s < 200; ++s) {
    const State x = random_state(rng, p);
    if (lever_extension(x[ix::q], x[ix::th1], p) < 1e-3) continue;
    const MinJerkSample ref{n01(rng), n01(rng), n01(rng), n01(rng)};
    const TidcCommand c0 = tidc_control(x, ref, g, Eigen::Vector2d::Zero(), p);
    const TidcCommand c1 = tidc_control(x, ref, g, Eigen::Vector2d(n01(rng), n01(rng)), p);
    if (c0.fallback) continue;
    const auto j = actuator_torque_jacobians(x, p);
    worst_ns = std::max(worst_ns, std::abs(j.j_theta.dot(c1.v - c0.v)));
  }

  // Closed-loop tracking of the initial Task 2 schedule.
  const auto ns = spec.tracking.targets.size();
  std::vector<double> durations(ns - 1), presets(ns);
  for (std::size_t i = 0; i < ns - 1; ++i) durations[i] = spec.xi0.size() ? spec.xi0[static_cast<Eigen::Index>(i)] : 0.6;
  for (std::size_t i = 0; i < ns; ++i)
    presets[i] = spec.xi0.size() ? spec.xi0[static_cast<Eigen::Index>(ns - 1 + i)] : 0.2;
  const TrackingEpisode ep = track_sequence(spec.tracking, durations, presets, p);
  double err = 0.0;
  for (std::size_t k = 0; k < ep.q_des.size(); ++k)
    err = std::max(err, std::abs(ep.trajectory.states[k][ix::q] - ep.q_des[k]));

  return {{"min_jerk_boundary", bc, 1e-12, bc <= 1e-12},
          {"nullspace_joint_effect", worst_ns, 1e-9, worst_ns < 1e-9},
          {"tracking_max_error", err, 0.02, err < 0.02}};
}

Check kernel_check() {
  const auto* fast = simd::avx2_kernels();
  if (!fast) return {"simd_kernel_match", 0.0, 1e-12, true};
  const auto& ref = simd::scalar_kernels();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  const std::size_t n = 1003;
  std::vector<double> load(n), vel(n), acc(n), a(n), b(n), c(n), d(n);
  for (std::size_t i = 0; i < n; ++i) {
    load[i] = n01(rng);
    vel[i] = n01(rng);
    acc[i] = 10 * n01(rng);
    a[i] = n01(rng);
    b[i] = n01(rng);
    c[i] = n01(rng);
    d[i] = n01(rng);
  }
  const simd::MotorConstants mc{0.3, 0.0012, 0.0007};
  std::vector<double> pi0(n), pe0(n), pi1(n), pe1(n);
  ref.motor_power(load.data(), vel.data(), acc.data(), n, mc, pi0.data(), pe0.data());
  fast->motor_power(load.data(), vel.data(), acc.data(), n, mc, pi1.data(), pe1.data());
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(pi0[i] - pi1[i]) / std::max(1.0, std::abs(pi0[i])));
    worst = std::max(worst, std::abs(pe0[i] - pe1[i]) / std::max(1.0, std::abs(pe0[i])));
  }
  const double t0 = ref.positive_trapezoid(a.data(), b.data(), n);
  const double t1 = fast->positive_trapezoid(a.data(), b.data(), n);
  const double s0 = ref.squared_error_trapezoid(a.data(), b.data(), c.data(), d.data(), n);
  const double s1 = fast->squared_error_trapezoid(a.data(), b.data(), c.data(), d.data(), n);
  worst = std::max({worst, std::abs(t0 - t1) / std::max(1.0, std::abs(t0)), std::abs(s0 - s1) / std::max(1.0, std::abs(s0))});
  return {"simd_kernel_match", worst, 1e-12, worst <= 1e-12};
}

}  // namespace

RunReport run_task1_ilqr_es(const ExperimentSpec& spec, const RunOptions& opts) {
  if (spec.kind != ExperimentKind::kTask1IlqrEs) throw ConfigError("spec is not a task1-ilqr-es experiment");
  viaes::validate(spec);
  const ReachAdapter adapter(spec.reach, spec.physical, spec.xi_min, spec.xi_max);
  const FinalEpisode base = reach_final(spec, ilqr0_policy(spec));
  const FinalEpisode start = reach_final(spec, spec.xi0);
  const bool same = spec.xi0 == ilqr0_policy(spec);
  return run_es(spec, opts, adapter, base, "ilqr0", same ? nullptr : &start,
                [&](const Eigen::VectorXd& xi) { return reach_final(spec, xi); });
}

RunReport run_task1_pi2seq(const ExperimentSpec& spec, const RunOptions& opts) {
  if (spec.kind != ExperimentKind::kTask1Pi2Seq) throw ConfigError("spec is not a task1-pi2seq experiment");
  viaes::validate(spec);
  DmpSequenceTask task;
  task.reach = spec.reach;
  task.encoding = spec.dmp;
  task.start_duty = spec.dmp_start_duty;
  const DmpAdapter dmp_adapter(task, spec.physical);
  // The encoding's own box, optionally narrowed by the config.
  struct Boxed final : oces::TaskAdapter {
    const oces::TaskAdapter& inner;
    Eigen::VectorXd lo, hi;
    Boxed(const oces::TaskAdapter& a, Eigen::VectorXd l, Eigen::VectorXd h) : inner(a), lo(std::move(l)), hi(std::move(h)) {}
    std::size_t dim() const override { return inner.dim(); }
    oces::Vec lower() const override { return lo; }
    oces::Vec upper() const override { return hi; }
    oces::Evaluation evaluate(const oces::Vec& xi) const override { return inner.evaluate(xi); }
  };
  const Boxed adapter(dmp_adapter, spec.xi_min.cwiseMax(dmp_adapter.lower()), spec.xi_max.cwiseMin(dmp_adapter.upper()));

  auto dmp_final = [&](const Eigen::VectorXd& xi) {
    const DmpEpisode ep = dmp_episode(task, spec.physical, xi);
    FinalEpisode f;
    f.csv = csv::trajectory(ep.fine);
    f.metrics = metrics(ep.report, f.csv);
    f.metrics.j_perf = ep.composite_cost;
    return f;
  };
  const FinalEpisode base = reach_final(spec, ilqr0_policy(spec));
  const FinalEpisode start = dmp_final(spec.xi0);
  return run_es(spec, opts, adapter, base, "ilqr0", &start, dmp_final);
}

RunReport run_task2_tidc_es(const ExperimentSpec& spec, const RunOptions& opts) {
  if (spec.kind != ExperimentKind::kTask2TidcEs) throw ConfigError("spec is not a task2-tidc-es experiment");
  viaes::validate(spec);
  const TrackingAdapter inner(spec.tracking, spec.physical, spec.xi_min, spec.xi_max, spec.reach.objective);
  const TimingAudit audit(inner, spec.tracking, spec.reach.objective);
  auto tracking_final = [&](const Eigen::VectorXd& xi) {
    const TrackingEpisode ep = inner.episode(xi);
    FinalEpisode f;
    f.csv = csv::tracking(ep);
    f.metrics = metrics(ep.report, f.csv);
    f.metrics.j_energy = spec.reach.objective == EnergyObjective::kInputWork ? ep.report.e_in : ep.report.e_elec;
    f.durations = ep.durations;
    return f;
  };
  const FinalEpisode base = tracking_final(spec.xi0);
  RunReport rep = run_es(spec, opts, audit, base, "tidc0", nullptr, tracking_final);
  audit.fill(rep);
  return rep;
}

FrontierReport run_frontier(const ExperimentSpec& spec, const RunOptions& opts) {
  if (spec.kind != ExperimentKind::kFrontier) throw ConfigError("spec is not a frontier experiment");
  viaes::validate(spec);
  const auto t0 = Clock::now();
  FrontierSpec fs = spec.frontier;
  fs.solver = spec.reach.solver;
  FrontierReport rep;
  rep.rows = frontier_sweep(fs, spec.physical, opts.jobs);
  rep.seconds = seconds_since(t0);
  write(opts, "frontier.csv", csv::frontier(rep.rows));
  write(opts, "config.json", to_json(spec).dump(2) + "\n");
  return rep;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

ValidationReport validate(const ExperimentSpec& spec, const RunOptions& opts) {
  viaes::validate(spec);
  ExperimentSpec s = spec;
  if (s.xi0.size() == 0) {
    const ExperimentSpec t2 = default_spec(ExperimentKind::kTask2TidcEs);
    s.xi0 = t2.xi0;
  }
  ValidationReport rep;
  rep.checks.push_back(lqr_check());
  for (auto& c : jacobian_checks(s.physical)) rep.checks.push_back(c);
  for (auto& c : energy_checks(s)) rep.checks.push_back(c);
  for (auto& c : tidc_checks(s)) rep.checks.push_back(c);
  rep.checks.push_back(kernel_check());

  std::string text = "check,value,threshold,pass\n";
  for (const auto& c : rep.checks)
    text += c.name + ',' + csv::number(c.value) + ',' + csv::number(c.threshold) + ',' + (c.pass ? "1" : "0") + '\n';
  write(opts, "validation.csv", text);
  return rep;
}

int run(const ExperimentSpec& spec, const RunOptions& opts) {
  switch (spec.kind) {
    case ExperimentKind::kFrontier:
      run_frontier(spec, opts);
      return 0;
    case ExperimentKind::kTask1IlqrEs:
      run_task1_ilqr_es(spec, opts);
      return 0;
    case ExperimentKind::kTask1Pi2Seq:
      run_task1_pi2seq(spec, opts);
      return 0;
    case ExperimentKind::kTask2TidcEs:
      run_task2_tidc_es(spec, opts);
      return 0;
    case ExperimentKind::kValidate:
      return validate(spec, opts).all_passed() ? 0 : 2;
  }
  return 1;
}

}  // namespace viaes::harness
