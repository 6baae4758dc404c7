#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "mmx/harness.hpp"

namespace {

int write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "cannot write '" << path << "'\n";
    return 2;
  }
  out << content;
  return 0;
}

std::string default_report_path(const char* name) {
  const char* dir = std::getenv("MMX_REPORT_DIR");
  if (!dir || !*dir) return {};
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmx: exact piecewise-linear convex analysis and minimax verification"};
  app.require_subcommand(1);

  std::string suite_path, report_path, csv_path, scenario_path, out_path;
  std::string kind, params_text = "{}";
  double tol = -1.0;
  int jobs = 1;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "run a scenario suite");
  run->add_option("suite", suite_path, "suite JSON file")->required();
  run->add_option("--tol", tol, "override the exact-assertion tolerance");
  run->add_option("--jobs", jobs, "worker threads");
  run->add_option("--report", report_path, "write the JSON report here");
  run->add_option("--csv", csv_path, "write the CSV gap table here");

  CLI::App* gen = app.add_subcommand("gen", "generate a scenario");
  gen->add_option("--kind", kind, "scenario kind")->required();
  gen->add_option("--seed", seed, "generator seed")->required();
  gen->add_option("--out", out_path, "output file")->required();
  gen->add_option("--params", params_text, "generator parameters (JSON object)");

  CLI::App* check = app.add_subcommand("check", "run a single scenario file");
  check->add_option("scenario", scenario_path, "scenario JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) {
      std::vector<mmx::Scenario> scenarios = mmx::load_suite(suite_path);
      if (tol > 0)
        for (auto& s : scenarios) s.tol.exact = tol;
      mmx::SuiteResult res = mmx::run_suite(scenarios, jobs);
      std::cout << mmx::suite_report_text(res);
      if (report_path.empty()) report_path = default_report_path("report.json");
      if (!report_path.empty() &&
          write_file(report_path, mmx::suite_report_json(res).dump(2) + "\n") != 0)
        return 2;
      if (!csv_path.empty() && write_file(csv_path, mmx::suite_report_csv(res)) != 0) return 2;
      return res.summary.ok() ? 0 : 1;
    }
    if (*gen) {
      mmx::Json params = mmx::Json::parse(params_text);
      mmx::Scenario s = mmx::generate(kind, seed, params);
      return write_file(out_path, mmx::to_json(s).dump(2) + "\n");
    }
    if (*check) {
      std::ifstream in(scenario_path);
      if (!in) {
        std::cerr << "cannot open '" << scenario_path << "'\n";
        return 2;
      }
      mmx::Json j;
      in >> j;
      mmx::Scenario s = mmx::scenario_from_json(j);
      mmx::Report rep = mmx::run_scenario(s);
      std::cout << mmx::report_to_json(rep).dump(2) << "\n";
      if (rep.status == "pass" || rep.status == "vacuous") return 0;
      return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
