// Command-line driver: runs scenario files and property suites, writes
// report.json / envelopes.csv / rho.csv. Timing goes to stderr so that
// report bytes depend only on (scenario, seed).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "moscolab/moscolab.hpp"

namespace {

int run_command(const std::string& file, std::uint64_t seed,
                const std::string& out_dir, double tol_geom, double tol_prox) {
  auto t0 = std::chrono::steady_clock::now();
  nlohmann::json doc;
  {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "error: cannot open scenario file '" << file << "'\n";
      return 2;
    }
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: " << file << ": " << e.what() << "\n";
      return 2;
    }
  }

  moscolab::RunReport report;
  try {
    moscolab::Scenario sc = moscolab::parse_scenario(doc);
    if (tol_geom > 0.0) sc.tol_geom = tol_geom;
    if (tol_prox > 0.0) sc.tol_prox = tol_prox;
    report = moscolab::run_scenario(sc, seed);
  } catch (const moscolab::ParseError& e) {
    std::cerr << "error: " << file << ": " << e.what() << "\n";
    return 2;
  }

  std::filesystem::create_directories(out_dir);
  auto write = [&out_dir](const std::string& name, const std::string& body) {
    std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
    out << body;
  };
  write("report.json", report.report.dump(2) + "\n");
  write("envelopes.csv", report.envelopes_csv);
  write("rho.csv", report.rho_csv);

  std::cout << report.report["id"].get<std::string>() << ": verdict "
            << report.report["verdict"].get<std::string>() << ", expectations "
            << (report.matched ? "matched" : "NOT matched") << "\n";
  for (const auto& [name, entry] : report.report["checks"].items())
    std::cout << "  " << name << ": " << entry["outcome"].get<std::string>()
              << "\n";

  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cerr << "elapsed: " << ms << " ms\n";
  return report.matched ? 0 : 1;
}

int suite_command(const std::string& name, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<moscolab::SuiteReport> reports;
  if (name == "geometry") reports.push_back(moscolab::run_geometry_suite(seed));
  else if (name == "prox") reports.push_back(moscolab::run_prox_suite(seed));
  else if (name == "convergence")
    reports.push_back(moscolab::run_convergence_suite(seed));
  else if (name == "metric") reports.push_back(moscolab::run_metric_suite(seed));
  else if (name == "all") reports = moscolab::run_all_suites(seed);
  else {
    std::cerr << "error: unknown suite '" << name
              << "' (expected geometry|prox|convergence|metric|all)\n";
    return 2;
  }

  bool all_pass = true;
  for (const moscolab::SuiteReport& rep : reports) {
    for (const moscolab::PropertyResult& r : rep.results) {
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << rep.suite << "/"
                << r.name << " — " << r.detail << "\n";
      all_pass = all_pass && r.pass;
    }
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cerr << "elapsed: " << ms << " ms\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for Moreau envelopes and Mosco "
               "convergence on Hadamard spaces"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  double tol_geom = -1.0, tol_prox = -1.0;

  std::string scenario_file, out_dir = ".";
  CLI::App* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("file", scenario_file, "scenario JSON file")->required();
  run->add_option("--seed", seed, "random seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--tol-geom", tol_geom, "override geometry tolerance");
  run->add_option("--tol-prox", tol_prox, "override prox solver tolerance");

  std::string suite_name;
  CLI::App* suite = app.add_subcommand("suite", "run a property suite");
  suite->add_option("name", suite_name,
                    "geometry|prox|convergence|metric|all")->required();
  suite->add_option("--seed", seed, "random seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return run_command(scenario_file, seed, out_dir, tol_geom, tol_prox);
    return suite_command(suite_name, seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
