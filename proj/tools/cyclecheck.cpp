#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "cyclecheck/config.hpp"
#include "cyclecheck/errors.hpp"
#include "cyclecheck/pipeline.hpp"
#include "cyclecheck/report.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  std::string out_dir;  // overrides [output] dir when set
  bool overwrite = false;
  int jobs = -1;  // -1 = keep config value
  bool verbose = false;
  std::string only;  // full: restrict to one stage
  std::string role = "osm";
};

void add_common(CLI::App& cmd, CliArgs& args) {
  cmd.add_option("--config", args.config_path, "TOML run configuration")
      ->required();
  cmd.add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd.add_flag("--overwrite", args.overwrite,
               "replace files from an earlier run");
  cmd.add_option("--jobs", args.jobs, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  cmd.add_flag("--verbose", args.verbose,
               "JSON progress lines on standard error");
}

/// CYCLECHECK_LOG=debug turns on the same progress stream as --verbose.
bool env_verbose() {
  const char* level = std::getenv("CYCLECHECK_LOG");
  return level != nullptr && std::string(level) == "debug";
}

template <typename Runner>
int load_and_run(const CliArgs& args, Runner&& runner) {
  cyclecheck::RunOptions options;
  options.verbose = args.verbose || env_verbose();
  try {
    cyclecheck::RunConfig config = cyclecheck::load_config(args.config_path);
    if (!args.out_dir.empty()) config.output.out_dir = args.out_dir;
    if (args.overwrite) config.output.overwrite = true;
    if (args.jobs >= 0) config.output.jobs = args.jobs;
    return runner(config, options);
  } catch (const cyclecheck::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cyclecheck::kExitParse;
  } catch (const cyclecheck::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cyclecheck::kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bicycle infrastructure network data quality assessment"};
  app.set_version_flag("--version", std::string(cyclecheck::kToolVersion));
  app.require_subcommand(1);

  CliArgs args;

  CLI::App* intrinsic = app.add_subcommand(
      "intrinsic", "analyze one data set on its own");
  add_common(*intrinsic, args);
  intrinsic->add_option("--role", args.role, "which data set to analyze")
      ->check(CLI::IsMember({"osm", "reference"}));

  CLI::App* compare = app.add_subcommand(
      "compare", "match and compare the two configured data sets");
  add_common(*compare, args);

  CLI::App* full = app.add_subcommand(
      "full", "both intrinsic analyses, then the comparison");
  add_common(*full, args);
  full->add_option("--only", args.only, "run a single stage of the full run")
      ->check(CLI::IsMember({"osm", "reference", "compare"}));

  CLI11_PARSE(app, argc, argv);

  if (intrinsic->parsed()) {
    const auto role = args.role == "reference" ? cyclecheck::DataRole::Reference
                                               : cyclecheck::DataRole::Osm;
    return load_and_run(args, [role](const cyclecheck::RunConfig& c,
                                     const cyclecheck::RunOptions& o) {
      return cyclecheck::run_intrinsic(c, role, o);
    });
  }
  if (compare->parsed()) {
    return load_and_run(args, [](const cyclecheck::RunConfig& c,
                                 const cyclecheck::RunOptions& o) {
      return cyclecheck::run_compare(c, o);
    });
  }
  // full, optionally narrowed to one stage
  return load_and_run(args, [&args](const cyclecheck::RunConfig& c,
                                    const cyclecheck::RunOptions& o) {
    if (args.only == "osm")
      return cyclecheck::run_intrinsic(c, cyclecheck::DataRole::Osm, o);
    if (args.only == "reference")
      return cyclecheck::run_intrinsic(c, cyclecheck::DataRole::Reference, o);
    if (args.only == "compare") return cyclecheck::run_compare(c, o);
    return cyclecheck::run_full(c, o);
  });
}
