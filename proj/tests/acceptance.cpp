// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vpt/camera_geometry.hpp"
#include "vpt/control.hpp"
#include "vpt/fuzzy.hpp"
#include "vpt/scenario_config.hpp"
#include "vpt/sim.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct PresetRun {
  vpt::RunSummary summary;
  std::string csv;
  double wall_s = 0.0;
  bool deterministic = false;
};

std::string to_csv(const std::vector<vpt::TraceRecord>& trace) {
  std::ostringstream out;
  vpt::write_trace_csv(out, trace);
  return out.str();
}

// Runs a preset twice with timing disabled; the trace is then a pure
// function of the scenario.
PresetRun run_preset_twice(const std::string& name) {
  vpt::Scenario sc = vpt::to_scenario(vpt::preset(name));
  sc.measure_timing = false;
  PresetRun out;
  const auto t0 = Clock::now();
  const vpt::RunResult first = vpt::run_closed_loop(sc);
  out.wall_s = seconds_since(t0);
  const vpt::RunResult second = vpt::run_closed_loop(sc);
  out.summary = first.summary;
  out.csv = to_csv(first.trace);
  out.deterministic = out.csv == to_csv(second.trace);
  return out;
}

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0,
                double e = 0, double g = 0) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d, e, g);
  return buf;
}

void ipm_exactness() {
  const vpt::CameraModel cam = vpt::default_camera();
  double worst = 0.0;
  int below = 0;
  int total = 0;
  for (int v = 0; v < cam.res_v; ++v) {
    for (int u = 0; u < cam.res_u; ++u) {
      ++total;
      if (!(cam.vertical_angle(v) > 0.0)) {
        continue;
      }
      ++below;
      const vpt::GroundPoint g = vpt::pixel_to_ground(cam, {double(u), double(v)});
      const vpt::PixelCoord p = vpt::ground_to_pixel(cam, g);
      worst = std::max({worst, std::abs(p.u - u), std::abs(p.v - v)});
    }
  }
  vpt::CameraModel ex;
  ex.height = 0.8;
  ex.pitch = vpt::deg2rad(30.0);
  ex.half_fov_u = vpt::deg2rad(30.0);
  ex.half_fov_v = vpt::deg2rad(30.0);
  const double y = 0.8 / std::tan(vpt::deg2rad(30.0));
  const vpt::GroundPoint g = vpt::pixel_to_ground(ex, {159.5, 119.5});
  const vpt::PixelCoord p = vpt::ground_to_pixel(ex, {0.0, y});
  const double example_err =
      std::max({std::abs(g.x), std::abs(g.y - y), std::abs(p.u - 159.5), std::abs(p.v - 119.5)});
  report("C5 IPM exactness", total == 76800 && worst <= 0.5 && example_err <= 1e-9,
         fmt("%.0f pixels swept, %.0f below horizon, worst round trip %.3g px, worked example "
             "error %.3g",
             total, below, worst, example_err));
}

void fuzzy_suite() {
  static const char* const labelled[7][7] = {
      {"NBX", "NB", "NMB", "NM", "NMS", "NS", "ZO"},
      {"NB", "NMB", "NM", "NMS", "NS", "ZO", "PS"},
      {"NMB", "NM", "NMS", "NS", "ZO", "PS", "PMS"},
      {"NM", "NMS", "NS", "ZO", "PS", "PMS", "PM"},
      {"NMS", "NS", "ZO", "PS", "PMS", "PM", "PMB"},
      {"NS", "ZO", "PS", "PMS", "PM", "PMB", "PB"},
      {"ZO", "PS", "PMS", "PM", "PMB", "PB", "PBX"},
  };
  const vpt::FuzzyController ctrl = vpt::FuzzyController::standard();
  int table_ok = 0;
  int centers_ok = 0;
  for (int row = 0; row < 7; ++row) {
    for (int col = 0; col < 7; ++col) {
      const int out = ctrl.rules[row][col];
      table_ok += vpt::output_labels()[out] == labelled[row][col] &&
                  out - 6 == (row - 3) + (col - 3);
      const double u =
          ctrl.evaluate(ctrl.eod_partition.centers()[col], ctrl.eoa_partition.centers()[row]);
      centers_ok += u == ctrl.cte_partition.centers()[row + col];
    }
  }
  double worst_sym = 0.0;
  double worst_bound = 0.0;
  for (int a = 0; a <= 200; ++a) {
    for (int d = 0; d <= 200; ++d) {
      const double eod = -200.0 + 2.0 * d;
      const double eoa = -50.0 + 0.5 * a;
      const double u = ctrl.evaluate(eod, eoa);
      worst_sym = std::max(worst_sym, std::abs(u + ctrl.evaluate(-eod, -eoa)));
      worst_bound = std::max(worst_bound, std::abs(u));
    }
  }
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_cog = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::vector<double> k(13);
    double num = 0.0;
    double den = 0.0;
    for (int i = 0; i < 13; ++i) {
      k[i] = unit(rng) < 0.3 ? unit(rng) : 0.0;
    }
    k[trial % 13] += 1e-3;
    for (int i = 0; i < 13; ++i) {
      num += (i - 6.0) * k[i];
      den += k[i];
    }
    worst_cog = std::max(worst_cog, std::abs(vpt::defuzzify_cog(ctrl.cte_partition, k) - num / den));
  }
  report("C6 fuzzy unit suite",
         table_ok == 49 && centers_ok == 49 && worst_sym <= 1e-12 && worst_bound <= 6.0 &&
             worst_cog <= 1e-9,
         fmt("table %.0f/49, crisp centres %.0f/49, symmetry err %.3g, max |cte| %.3g, "
             "centroid err %.3g",
             table_ok, centers_ok, worst_sym, worst_bound, worst_cog));
}

void pid_exactness() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> cte(-6.0, 6.0);
  std::uniform_real_distribution<double> gain(0.0, 30.0);
  std::uniform_int_distribution<int> length(1, 40);
  double worst = 0.0;
  for (int seq = 0; seq < 10000; ++seq) {
    const vpt::PidGains g{gain(rng), gain(rng), gain(rng)};
    vpt::PidState st;
    double e1 = 0.0;
    double e2 = 0.0;
    const int n = length(rng);
    for (int i = 0; i < n; ++i) {
      const double e = cte(rng);
      const double expected = -(g.kp * (e - e1) + g.ki * e + g.kd * (e - 2.0 * e1 + e2));
      e2 = e1;
      e1 = e;
      worst = std::max(worst, std::abs(vpt::pid_step(g, st, e).raw_deg - expected));
    }
  }
  vpt::PidState st;
  const double first = vpt::pid_step({10, 10, 4}, st, 1.0).command.angle_deg;
  const double second = vpt::pid_step({10, 10, 4}, st, 1.0).command.angle_deg;
  report("C7 PID exactness", worst <= 1e-12 && first == -24.0 && second == -6.0,
         fmt("10000 sequences, worst err %.3g, steps %.17g then %.17g", worst, first, second));
}

void kinematics() {
  bool pass = true;
  std::string detail;
  for (double deg : {10.0, 21.8, 30.0}) {
    const double expected = 2.0 / std::tan(vpt::deg2rad(deg));
    vpt::VehicleState s;
    s.speed = 2.0;
    s.wheelbase = 2.0;
    const int steps = static_cast<int>(std::ceil(2.0 * std::numbers::pi * expected / (2.0 * 0.05)));
    std::vector<vpt::Vec2> path{{s.x, s.y}};
    for (int i = 0; i < steps; ++i) {
      s = vpt::bicycle_step(s, {deg}, 0.05);
      path.push_back({s.x, s.y});
    }
    // Circle through three well-spread samples, then the worst radius over
    // the whole path.
    const vpt::Vec2 a = path[0], b = path[steps / 3], c = path[2 * steps / 3];
    const double dd = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
    const vpt::Vec2 center{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / dd,
                           (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / dd};
    double worst = 0.0;
    for (const vpt::Vec2& p : path) {
      worst = std::max(worst, std::abs(vpt::norm(p - center) - expected) / expected);
    }
    pass = pass && worst <= 0.005;
    detail += fmt("%.1f deg: R %.4f m, worst rel err %.2g; ", deg, expected, worst);
  }
  report("C8 vehicle kinematics", pass, detail);
}

}  // namespace

int main() {
  ipm_exactness();
  fuzzy_suite();
  pid_exactness();
  kinematics();

  std::map<std::string, PresetRun> runs;
  for (const std::string& name : vpt::preset_names()) {
    runs[name] = run_preset_twice(name);
    const vpt::RunSummary& s = runs[name].summary;
    std::printf("  %-10s completed=%d max_lat=%.4f mean_lat=%.4f steer_var=%.4f wall=%.1fs\n",
                name.c_str(), s.completed, s.max_lat_err_m, s.mean_abs_lat_err_m,
                s.steering_variance_deg2, runs[name].wall_s);
  }

  {
    const PresetRun& fc = runs["se-fc"];
    const PresetRun& nfc = runs["se-nfc"];
    const double wall = fc.wall_s + nfc.wall_s;
    const bool pass = fc.summary.completed && nfc.summary.completed &&
                      fc.summary.steering_variance_deg2 < nfc.summary.steering_variance_deg2 &&
                      fc.summary.max_lat_err_m <= nfc.summary.max_lat_err_m && wall <= 120.0;
    report("C1 fuzzy ablation", pass,
           fmt("steer var %.5f vs %.5f deg^2, max lat err %.5f vs %.5f m, %.1f s",
               fc.summary.steering_variance_deg2, nfc.summary.steering_variance_deg2,
               fc.summary.max_lat_err_m, nfc.summary.max_lat_err_m, wall));
  }
  {
    const PresetRun& v = runs["set-v"];
    const PresetRun& pp = runs["set-pp"];
    const double wall = v.wall_s + pp.wall_s;
    const bool pp_fails = !pp.summary.completed || pp.summary.max_lat_err_m > 1.0;
    const bool pass = v.summary.completed && v.summary.max_lat_err_m <= 0.75 && pp_fails &&
                      wall <= 60.0;
    report("C2 tight turn", pass,
           fmt("fuzzy-pid max %.3f m (completed %.0f), pure pursuit max %.3f m (completed %.0f), "
               "%.1f s",
               v.summary.max_lat_err_m, v.summary.completed, pp.summary.max_lat_err_m,
               pp.summary.completed, wall));
  }
  {
    const PresetRun& day = runs["park-day"];
    const PresetRun& night = runs["park-night"];
    const bool pass = night.summary.completed &&
                      night.summary.max_lat_err_m <= 1.5 * day.summary.max_lat_err_m &&
                      night.wall_s <= 120.0;
    report("C3 night robustness", pass,
           fmt("night max %.3f m (completed %.0f), day max %.3f m, %.1f s",
               night.summary.max_lat_err_m, night.summary.completed, day.summary.max_lat_err_m,
               night.wall_s));
  }
  {
    double worst = 0.0;
    std::string detail;
    for (const char* name : {"se-fc", "set-v"}) {
      const vpt::RunResult r = vpt::run_closed_loop(vpt::to_scenario(vpt::preset(name)));
      worst = std::max(worst, r.summary.mean_proc_ms);
      detail += name + fmt(" mean %.2f ms; ", r.summary.mean_proc_ms);
    }
    report("C4 frame budget", worst <= 50.0, detail);
  }
  {
    bool pass = true;
    std::string detail;
    for (const auto& [name, run] : runs) {
      pass = pass && run.deterministic;
      detail += name + (run.deterministic ? " identical; " : " DIFFERS; ");
    }
    report("C9 determinism", pass, detail);
  }
  return failures == 0 ? 0 : 1;
}
