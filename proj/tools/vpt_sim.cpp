// vpt_sim: run lane-following scenarios and write per-frame traces.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vpt/errors.hpp"
#include "vpt/scenario_config.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitCompleted = 0;
constexpr int kExitError = 1;
constexpr int kExitDeparted = 2;

struct RunOptions {
  std::string config_path;
  std::string preset_name;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::string controller;
  bool no_fuzzy = false;
  std::string dump_frames;
  std::string dump_dir;
  bool all_presets = false;
  bool timing = false;
};

std::set<std::uint64_t> parse_frame_list(const std::string& text) {
  std::set<std::uint64_t> frames;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) {
      continue;
    }
    std::size_t used = 0;
    unsigned long long value = 0;
    try {
      value = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.front() == '-') {
      throw vpt::ConfigError("bad frame index '" + item + "' in --dump-frames");
    }
    frames.insert(value);
  }
  return frames;
}

vpt::ScenarioConfig apply_overrides(vpt::ScenarioConfig cfg, const RunOptions& opt) {
  if (opt.seed) {
    cfg.seed = *opt.seed;
  }
  if (!opt.controller.empty()) {
    cfg.controller = vpt::controller_from_string(opt.controller);
  }
  if (opt.no_fuzzy) {
    if (cfg.controller == vpt::ControllerKind::kPurePursuit) {
      throw vpt::ConfigError("--no-fuzzy applies to the PID controllers only");
    }
    cfg.controller = vpt::ControllerKind::kRawPid;
  }
  return cfg;
}

vpt::FrameObserver make_dumper(const std::string& name, const std::set<std::uint64_t>& frames,
                               const fs::path& dir) {
  if (frames.empty()) {
    return {};
  }
  return [name, frames, dir](std::uint64_t frame, const vpt::Image& camera,
                             const vpt::DetectionStages* stages) {
    if (!frames.count(frame)) {
      return;
    }
    auto file = [&](const char* stage) {
      return dir / (name + "_" + stage + "_" + std::to_string(frame) + ".ppm");
    };
    vpt::write_ppm(file("camera"), camera);
    if (stages) {
      vpt::write_ppm(file("overhead"), stages->overhead);
      vpt::write_ppm(file("binary"), vpt::to_rgb(stages->binary, true));
    }
  };
}

void prepare_dump_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw vpt::IoError("cannot create dump directory " + dir.string());
  }
  const fs::path probe = dir / ".vpt_write_probe";
  std::FILE* f = std::fopen(probe.c_str(), "wb");
  if (!f) {
    throw vpt::IoError("dump directory " + dir.string() + " is not writable");
  }
  std::fclose(f);
  fs::remove(probe, ec);
}

struct Outcome {
  std::string summary;
  bool completed = false;
};

Outcome run_one(const vpt::ScenarioConfig& cfg, const fs::path& out, const RunOptions& opt) {
  vpt::Scenario sc = vpt::to_scenario(cfg);
  sc.measure_timing = opt.timing;
  vpt::FrameObserver dumper;
  if (!opt.dump_frames.empty()) {
    const auto frames = parse_frame_list(opt.dump_frames);
    if (!frames.empty()) {
      prepare_dump_dir(opt.dump_dir);
    }
    dumper = make_dumper(cfg.name, frames, opt.dump_dir);
  }
  // Timing always runs for the summary; the trace keeps zeros unless asked.
  vpt::Scenario timed = sc;
  timed.measure_timing = true;
  vpt::RunResult result = vpt::run_closed_loop(timed, dumper);
  const vpt::RunSummary summary = result.summary;
  if (!opt.timing) {
    for (vpt::TraceRecord& r : result.trace) {
      r.proc_ms = 0.0;
    }
  }
  vpt::write_trace_csv(out, result.trace);
  return {vpt::format_summary(cfg.name, summary), summary.completed};
}

int run_command(const RunOptions& opt) {
  if (opt.all_presets) {
    if (!opt.config_path.empty() || !opt.preset_name.empty()) {
      throw vpt::ConfigError("--all-presets cannot be combined with --config or --preset");
    }
    if (!opt.dump_frames.empty()) {
      throw vpt::ConfigError("--dump-frames needs a single scenario");
    }
    const fs::path dir = opt.out_path;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
      throw vpt::IoError("cannot create output directory " + dir.string());
    }
    std::vector<std::future<Outcome>> jobs;
    for (const std::string& name : vpt::preset_names()) {
      const vpt::ScenarioConfig cfg = apply_overrides(vpt::preset(name), opt);
      jobs.push_back(std::async(std::launch::async, run_one, cfg, dir / (name + ".csv"), opt));
    }
    bool all_completed = true;
    for (auto& job : jobs) {
      const Outcome o = job.get();
      std::cout << o.summary;
      all_completed = all_completed && o.completed;
    }
    return all_completed ? kExitCompleted : kExitDeparted;
  }

  if (opt.config_path.empty() == opt.preset_name.empty()) {
    throw vpt::ConfigError("give exactly one of --config or --preset");
  }
  const vpt::ScenarioConfig base = opt.config_path.empty() ? vpt::preset(opt.preset_name)
                                                           : vpt::load_config(opt.config_path);
  const Outcome o = run_one(apply_overrides(base, opt), opt.out_path, opt);
  std::cout << o.summary;
  return o.completed ? kExitCompleted : kExitDeparted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vision-based lane following simulator"};
  app.require_subcommand(1);

  RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "Run one scenario (or every preset)");
  run->add_option("--config", opt.config_path, "Scenario JSON file");
  run->add_option("--preset", opt.preset_name, "Built-in scenario name");
  run->add_option("--out", opt.out_path, "Trace CSV (directory with --all-presets)")->required();
  run->add_option("--seed", opt.seed, "Override the noise seed");
  run->add_option("--controller", opt.controller, "fuzzy-pid, raw-pid or pure-pursuit");
  run->add_flag("--no-fuzzy", opt.no_fuzzy, "Feed the raw combined error to the PID");
  run->add_option("--dump-frames", opt.dump_frames, "Comma-separated frame indices to dump");
  run->add_option("--dump-dir", opt.dump_dir, "Directory for dumped images");
  run->add_flag("--all-presets", opt.all_presets, "Run every preset into the --out directory");
  run->add_flag("--timing", opt.timing, "Record measured proc_ms in the CSV");

  std::string preset_name;
  CLI::App* show = app.add_subcommand("preset", "Print a preset as scenario JSON");
  show->add_option("name", preset_name, "Preset name")->required();

  CLI::App* list = app.add_subcommand("list", "List preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*run) {
      if (!opt.dump_frames.empty() && opt.dump_dir.empty()) {
        throw vpt::ConfigError("--dump-frames needs --dump-dir");
      }
      return run_command(opt);
    }
    if (*show) {
      std::cout << vpt::config_to_json(vpt::preset(preset_name)) << '\n';
      return kExitCompleted;
    }
    if (*list) {
      for (const std::string& name : vpt::preset_names()) {
        std::cout << name << '\n';
      }
      return kExitCompleted;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
