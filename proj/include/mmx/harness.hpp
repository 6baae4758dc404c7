#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mmx/json_io.hpp"

namespace mmx {

/// Deterministic random source: a fixed engine plus explicit mappings, so
/// identical seeds reproduce byte-identical scenarios on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  int uniform_int(int a, int b) {  // inclusive
    return a + static_cast<int>(uniform() * (b - a + 1)) % (b - a + 1);
  }
  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

namespace gen {

/// Random proper convex lsc function: continuous, strictly increasing slopes,
/// bounded or affine tails.
PwlFunction gamma0(Rng& rng);

/// Random proper convex function; may carry an upward value jump at a closed
/// domain endpoint (convex but not lsc) when allow_nonlsc is set.
PwlFunction convex_proper(Rng& rng, bool allow_nonlsc);

/// Random proper function: arbitrary segment limits (non-lsc, non-convex),
/// +inf holes, mixed tails.
PwlFunction proper_pwl(Rng& rng);

/// -inf on a closed interval, +inf outside: convex, lsc, improper.
PwlFunction improper_plateau(Rng& rng);

/// Raise one breakpoint value above its limits.
PwlFunction nonlsc_corrupt(PwlFunction f, Rng& rng);

/// Replace one cell (segment plus its endpoints) by -inf.
PwlFunction improper_inject(PwlFunction f, Rng& rng);

}  // namespace gen

struct Tolerances {
  double exact = 1e-9;
  double mesh = 1e-6;
  double envelope = 1e-6;
};

struct Scenario {
  std::string id;
  std::string kind;
  std::uint64_t seed = 0;
  Json payload;
  Tolerances tol;
};

struct Report {
  std::string id;
  std::string kind;
  std::string status;  // pass | fail | vacuous | error
  Json detail;
  double wall_ms = 0.0;
};

struct SuiteSummary {
  int pass = 0;
  int fail = 0;
  int vacuous = 0;
  int error = 0;
  bool ok() const { return fail == 0 && error == 0; }
};

struct SuiteResult {
  std::vector<Report> reports;
  SuiteSummary summary;
};

/// Parse and validate a suite file; throws std::runtime_error with the
/// offending path / id on malformed input.
std::vector<Scenario> load_suite(const std::string& path);
std::vector<Scenario> suite_from_json(const Json& j);

Json to_json(const Scenario& s);
Scenario scenario_from_json(const Json& j);

/// Seeded scenario generation; identical (kind, seed, params) give identical
/// scenarios.
Scenario generate(const std::string& kind, std::uint64_t seed, const Json& params = Json::object());

Report run_scenario(const Scenario& s);
SuiteResult run_suite(const std::vector<Scenario>& scenarios, int jobs = 1);

Json report_to_json(const Report& r, bool include_timing = true);
Json suite_report_json(const SuiteResult& res, bool include_timing = true);
std::string suite_report_text(const SuiteResult& res);
std::string suite_report_csv(const SuiteResult& res);

}  // namespace mmx
