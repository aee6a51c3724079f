#include <CLI11.hpp>

#include <iostream>

#include "bpguard/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = bpguard::cli;

  CLI::App app{"Replica behavior-profile verification"};
  app.require_subcommand(1);

  cli::RunOverrides run_opts;
  std::string scenario, out;
  auto* run = app.add_subcommand("run", "simulate a scenario and write its report as JSON");
  run->add_option("scenario", scenario, "scenario descriptor (JSON)")->required();
  run->add_option("--seed", run_opts.seed, "seed, overrides the descriptor");
  run->add_option("--alpha", run_opts.alpha);
  run->add_option("--delta", run_opts.delta);
  run->add_option("--percentile", run_opts.percentile);
  run->add_option("--interval-ms", run_opts.interval_ms);
  run->add_option("--out", out, "report path (default stdout)");

  std::string call_log, smaps, identifier, node_id;
  std::int64_t interval_ms = bpguard::kDefaultIntervalMs;
  auto* ingest = app.add_subcommand("ingest", "build a profile from a call log and smaps dump");
  ingest->add_option("call_log", call_log)->required();
  ingest->add_option("smaps", smaps)->required();
  ingest->add_option("identifier", identifier)->required();
  ingest->add_option("node_id", node_id)->required();
  ingest->add_option("--interval-ms", interval_ms);
  ingest->add_option("--out", out, "profile path (default stdout)");

  std::vector<std::string> profiles;
  bpguard::VerifyConfig vc;
  auto* verify = app.add_subcommand("verify", "cross-verify serialized profiles");
  verify->add_option("profiles", profiles)->required();
  verify->add_option("--alpha", vc.alpha)->capture_default_str();
  verify->add_option("--delta", vc.delta)->capture_default_str();
  verify->add_option("--percentile", vc.percentile)->capture_default_str();

  std::string report_path;
  auto* report = app.add_subcommand("report", "write CSV series from a simulation report");
  report->add_option("report", report_path)->required();
  report->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kUsage;
  }

  if (*run) return cli::cmd_run(scenario, run_opts, out, std::cout, std::cerr);
  if (*ingest)
    return cli::cmd_ingest(call_log, smaps, identifier, node_id, out, interval_ms, std::cout, std::cerr);
  if (*verify) return cli::cmd_verify(profiles, vc, std::cout, std::cerr);
  return cli::cmd_report(report_path, out, std::cout, std::cerr);
}
