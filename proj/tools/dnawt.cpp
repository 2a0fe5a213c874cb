// dnawt: command-line front end for the DNA wiretap experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dnawt/config.hpp"
#include "dnawt/csv.hpp"
#include "dnawt/errors.hpp"
#include "dnawt/experiments.hpp"
#include "dnawt/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitBudget = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> budget;
  std::string out;
  std::string grid;
  std::string format = "csv";
  std::map<std::string, std::string> keys;
};

int exit_code_for(const dnawt::Error& e) {
  switch (e.kind()) {
    case dnawt::ErrorKind::BudgetExceeded:
    case dnawt::ErrorKind::CapacityBudget: return kExitBudget;
    default: return kExitConfig;
  }
}

// Writes to --out when given, stdout otherwise.
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) dnawt::config_error("cannot open output file '" + path + "'");
  write(out);
}

int run_experiment(const dnawt::Experiment& exp, const CommonFlags& flags) {
  dnawt::Config config;
  if (!flags.config_path.empty()) config = dnawt::Config::load_file(flags.config_path);

  dnawt::Config overrides;
  for (const auto& [k, v] : flags.keys) overrides.set(k, v);
  if (flags.seed) overrides.set("seed", std::to_string(*flags.seed));
  if (flags.trials) overrides.set(exp.keys.count("mc_trials") ? "mc_trials" : "trials", std::to_string(*flags.trials));
  if (flags.budget) overrides.set("budget", std::to_string(*flags.budget));
  config.merge(overrides);
  config.check_known(exp.keys);

  const auto axes = dnawt::parse_grid(flags.grid);
  for (const auto& axis : axes) {
    if (!exp.keys.count(axis.key)) dnawt::config_error("unknown grid key '" + axis.key + "'");
  }
  const auto points = dnawt::expand_grid(config, axes);
  if (exp.stochastic) {
    for (const auto& p : points) {
      if (!p.has("seed")) dnawt::config_error(exp.name + " is stochastic and needs --seed");
    }
  }

  const auto result = exp.run(points);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  emit(flags.out, [&](std::ostream& os) {
    if (flags.format == "gnuplot")
      dnawt::write_gnuplot(os, result.table);
    else
      dnawt::write_csv(os, result.table);
  });
  return kExitOk;
}

int run_verify(std::uint64_t seed, bool inject_fault, const std::string& out) {
  const auto verdicts = dnawt::run_verify_suite({seed, inject_fault});
  emit(out, [&](std::ostream& os) {
    for (const auto& v : verdicts) {
      char time[32];
      std::snprintf(time, sizeof time, "%.3fs", v.seconds);
      os << (v.passed ? "PASS " : "FAIL ") << v.claim << " [" << v.detail << "] (" << time << ")\n";
    }
  });
  return dnawt::all_passed(verdicts) ? kExitOk : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DNA storage wiretap experiments"};
  app.set_version_flag("--version", std::string("dnawt ") + DNAWT_VERSION);
  app.require_subcommand(1);

  const auto experiments = dnawt::experiments();
  std::vector<std::unique_ptr<CommonFlags>> flags;
  std::vector<std::pair<CLI::App*, const dnawt::Experiment*>> commands;

  for (const auto& exp : experiments) {
    auto* sub = app.add_subcommand(exp.name, exp.summary);
    auto& f = *flags.emplace_back(std::make_unique<CommonFlags>());
    sub->add_option("--config", f.config_path, "key=value file; flags override it")->check(CLI::ExistingFile);
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--grid", f.grid, "sweep, e.g. 'q0=0:1:11;beta=2,3'");
    sub->add_option("--budget", f.budget, "enumeration budget in cells");
    sub->add_option("--format", f.format, "csv or gnuplot")->check(CLI::IsMember({"csv", "gnuplot"}));
    if (exp.stochastic) {
      sub->add_option("--seed", f.seed, "RNG seed (required)");
      sub->add_option("--trials", f.trials, "Monte Carlo trials");
    }
    for (const auto& key : exp.keys) {
      if (key == "seed" || key == "trials" || key == "budget") continue;
      sub->add_option_function<std::string>(
          "--" + key, [&f, key](const std::string& v) { f.keys[key] = v; }, "sets " + key);
    }
    commands.emplace_back(sub, &exp);
  }

  std::uint64_t verify_seed = 1;
  bool inject_fault = false;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "run the analysis verification suite");
  verify->add_option("--seed", verify_seed, "seed for the sampled checks");
  verify->add_option("--out", verify_out, "report path (default stdout)");
  verify->add_flag("--inject-fault", inject_fault, "perturb a degrading-matrix entry by 1e-9");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (verify->parsed()) return run_verify(verify_seed, inject_fault, verify_out);
    for (std::size_t i = 0; i < commands.size(); ++i) {
      if (commands[i].first->parsed()) return run_experiment(*commands[i].second, *flags[i]);
    }
  } catch (const dnawt::Error& e) {
    std::cerr << "dnawt: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitConfig;
}
