#include "cli_config.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "CLI11.hpp"
#include "bipi/errors.hpp"

namespace bipi::cli {

PackingConfig RunConfig::packing() const {
  PackingConfig p = PackingConfig::from_resolution(dx, h_ratio);
  p.J = J;
  p.tol = tol;
  p.window = window;
  p.min_iters = min_iters;
  p.max_iters_2a = max_iters_2a;
  p.max_iters_2c = max_iters_2c;
  p.k_b = k_b_ratio * dx;
  p.boundary_force = !plain_shift;
  return p;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines; '#' starts a comment. Keys use '-' or '_' interchangeably.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  int n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    kv.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
      return args[i + 1];
    }
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

}  // namespace

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out,
                                      std::ostream& log) {
  RunConfig cfg;
  CLI::App app{"Boundary-integral particle initialization and WCSPH validation runs", "bipi"};
  app.require_subcommand(1);

  double mu = -1.0;
  double free_surface_y = 0.0;
  std::map<std::string, CLI::App*> subs;
  std::map<std::string, CLI::Option*> mu_opt;
  std::map<std::string, CLI::Option*> fs_opt;
  std::string config_file;

  auto common = [&](CLI::App* s) {
    s->add_option("--geometry", cfg.geometry, "Boundary file (loop <n> / x1 x2 lines)");
    s->add_option("--dx", cfg.dx, "Particle spacing dx_r [m]")->capture_default_str();
    s->add_option("--h-ratio", cfg.h_ratio, "Smoothing length over spacing, h/dx_r")->capture_default_str();
    s->add_option("--out", cfg.out, "Output directory")->capture_default_str();
    s->add_option("--config", config_file, "key=value file with defaults for this command");
    s->add_option("--seed", cfg.seed, "Reserved; runs are deterministic");
  };
  auto packing = [&](CLI::App* s) {
    s->add_option("--J", cfg.J, "Shifting coefficient, D = J h^2")->capture_default_str();
    s->add_option("--tol", cfg.tol, "Windowed relative change that stops a phase")->capture_default_str();
    s->add_option("--window", cfg.window, "Stopping window [iterations]")->capture_default_str();
    s->add_option("--min-iters", cfg.min_iters, "Iterations before the stopping test")->capture_default_str();
    s->add_option("--max-iters-2a", cfg.max_iters_2a, "Step 2a budget")->capture_default_str();
    s->add_option("--max-iters-2c", cfg.max_iters_2c, "Step 2c budget")->capture_default_str();
    s->add_option("--k-b", cfg.k_b_ratio, "Freeze distance over dx_r")->capture_default_str();
    s->add_flag("--plain-shift", cfg.plain_shift, "Shift without the wall step force");
    fs_opt[s->get_name()] =
        s->add_option("--free-surface-y", free_surface_y, "Edges on this height are packing-only");
  };
  auto flow = [&](CLI::App* s) {
    s->add_option("--t-end", cfg.t_end, "End time [s] (default: scenario)");
    s->add_option("--init", cfg.init, "Initial particles")->check(CLI::IsMember({"grid", "bipi"}))->capture_default_str();
    mu_opt[s->get_name()] = s->add_option("--mu", mu, "Dynamic viscosity [Pa s]");
    s->add_option("--c0", cfg.c0, "Sound speed [m/s] (default: 10 x expected speed)");
    s->add_option("--pb", cfg.pb, "Background pressure [Pa]")->capture_default_str();
  };

  subs["seed"] = app.add_subcommand("seed", "Seed particles on the Cartesian grid");
  common(subs["seed"]);
  subs["pack"] = app.add_subcommand("pack", "Run the packing pipeline");
  common(subs["pack"]);
  packing(subs["pack"]);
  subs["hydrostatic"] = app.add_subcommand("hydrostatic", "Hydrostatic tank (built-in wedge tank by default)");
  common(subs["hydrostatic"]);
  packing(subs["hydrostatic"]);
  flow(subs["hydrostatic"]);
  subs["hydrostatic"]->add_option("--water-depth", cfg.water_depth, "Water depth [m]")->capture_default_str();
  subs["drop"] = app.add_subcommand("drop", "Elliptical drop");
  common(subs["drop"]);
  packing(subs["drop"]);
  flow(subs["drop"]);
  subs["drop"]->add_option("--r0", cfg.r0, "Initial radius [m]")->capture_default_str();
  subs["drop"]->add_option("--a0", cfg.a0, "Initial strain rate [1/s]")->capture_default_str();
  subs["bench"] = app.add_subcommand("bench", "Per-iteration timing of Step 2a and Step 2c");
  common(subs["bench"]);
  subs["bench"]->add_option("--resolutions", cfg.resolutions, "Comma-separated spacings")->delimiter(',');
  subs["bench"]->add_option("--warmup", cfg.warmup, "Warmup iterations")->capture_default_str();
  subs["bench"]->add_option("--repeats", cfg.repeats, "Timed iterations (median reported)")->capture_default_str();

  // Merge the config file ahead of the real flags.
  std::vector<std::string> merged = args;
  if (const auto path = config_path(args)) {
    const auto it = std::find_if(args.begin(), args.end(), [&](const std::string& a) { return subs.count(a) > 0; });
    if (it == args.end()) throw ConfigError("--config needs a subcommand");
    CLI::App* sub = subs[*it];
    std::vector<std::string> injected;
    for (const auto& [key, value] : read_config_file(*path)) {
      if (key == "config" || sub->get_option_no_throw("--" + key) == nullptr) {
        throw ConfigError("unknown key '" + key + "' for '" + *it + "' in " + *path);
      }
      if (given_on_command_line(args, key)) {
        log << "warning: --" << key << " on the command line overrides " << key << " = " << value
            << " from " << *path << '\n';
        continue;
      }
      injected.push_back("--" + key + "=" + value);
    }
    merged.insert(std::next(merged.begin(), std::distance(args.begin(), it) + 1), injected.begin(),
                  injected.end());
  }

  try {
    std::vector<std::string> rev(merged.rbegin(), merged.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cfg.command = name;
  }
  if (auto m = mu_opt.find(cfg.command); m != mu_opt.end() && m->second->count() > 0) cfg.mu = mu;
  if (auto f = fs_opt.find(cfg.command); f != fs_opt.end() && f->second->count() > 0) cfg.free_surface_y = free_surface_y;

  require(cfg.dx > 0.0, "--dx must be positive");
  require(cfg.h_ratio >= 1.2 && cfg.h_ratio <= 3.0, "--h-ratio must lie in [1.2, 3]");
  require(cfg.J > 0.0, "--J must be positive");
  require(cfg.tol > 0.0 && cfg.tol < 1.0, "--tol must lie in (0, 1)");
  require(cfg.window >= 1, "--window must be >= 1");
  require(cfg.min_iters >= 0, "--min-iters must be >= 0");
  require(cfg.max_iters_2a >= 0 && cfg.max_iters_2c >= 0, "iteration budgets must be >= 0");
  require(cfg.k_b_ratio > 0.5, "--k-b must exceed 0.5");
  require(cfg.t_end >= 0.0, "--t-end must be non-negative");
  require(!cfg.mu || *cfg.mu >= 0.0, "--mu must be non-negative");
  require(cfg.c0 >= 0.0, "--c0 must be non-negative");
  require(cfg.water_depth > 0.0, "--water-depth must be positive");
  require(cfg.r0 > 0.0, "--r0 must be positive");
  require(cfg.warmup >= 0 && cfg.repeats >= 1, "--warmup must be >= 0 and --repeats >= 1");
  if (cfg.command == "seed" || cfg.command == "pack" || cfg.command == "bench") {
    require(!cfg.geometry.empty(), "missing --geometry");
  }
  if (cfg.command == "bench") {
    require(cfg.resolutions.size() >= 3, "--resolutions needs at least 3 spacings");
    for (double r : cfg.resolutions) require(r > 0.0, "--resolutions must be positive");
  }
  cfg.packing().validate();
  return cfg;
}

}  // namespace bipi::cli
