#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rvline/bounds.hpp"
#include "rvline/simulator.hpp"

namespace rvline::harness {

// Plain description of one rendezvous run; everything the CSV row and the
// reproduction command need.
struct ScenarioSpec {
    std::string algorithm = "canon";   // canon | known-d | no-d
    std::string generator = "canonical";  // canonical | random | huge | explicit
    unsigned tier = 4;                 // huge generator
    std::uint64_t seed = 1;
    Position start_a = 0;
    Position start_b = 1;
    std::uint64_t delay = 0;
    bool b_first = false;  // when true, agent b wakes first
    int orient_a = +1;
    int orient_b = +1;
    unsigned kappa = kDefaultKappa;
    std::uint64_t max_rounds = 0;  // 0 = default derived from the bound
    std::optional<ExplicitSpec> explicit_spec;  // generator == explicit
    bool capture_trace = false;
};

struct RunRow {
    ScenarioSpec spec;
    std::uint64_t d = 0;
    Natural ell;       // larger starting label
    bool met = false;
    std::uint64_t elapsed = 0;  // meaningful when met
    Position node = 0;
    Natural bound;
    bool ok = false;  // met && elapsed <= bound
};

std::uint64_t scenario_distance(const ScenarioSpec& spec);

// Builds the line + scenario (validating the spec) and derives the default
// round budget from the applicable bound when max_rounds == 0.
Scenario build_scenario(const ScenarioSpec& spec);

// Runs one scenario and checks it against the applicable bound.
RunRow run_one(const ScenarioSpec& spec, Trace* trace_out = nullptr);

// Reproduction command line for a row.
std::string repro_command(const ScenarioSpec& spec);

void write_rendezvous_csv_header(std::ostream& out);
void write_rendezvous_csv_row(std::ostream& out, const RunRow& row);

// Parameter sweep: one row per (D, delay, generator, orientation) cell with
// the max elapsed over the seeds. Empty delay list selects a per-cell default
// grid (small delays plus the large-delay threshold of the algorithm).
struct SweepSpec {
    std::string algorithm = "canon";
    std::vector<std::string> generators;  // default per algorithm
    std::uint64_t d_min = 1;
    std::uint64_t d_max = 8;
    std::vector<std::uint64_t> delays;
    std::vector<std::uint64_t> seeds = {1};
    std::vector<std::pair<int, int>> orientations = {{+1, +1}, {+1, -1}};
    unsigned kappa = kDefaultKappa;
    unsigned jobs = 1;
};

struct SweepCell {
    ScenarioSpec representative;  // spec of the worst trial in the cell
    std::optional<ScenarioSpec> failing;  // first trial that missed its bound
    std::uint64_t d = 0;
    std::uint64_t delay = 0;
    unsigned trials = 0;
    bool all_met = false;
    std::uint64_t max_elapsed = 0;
    Natural bound;
    bool ok = false;
};

std::vector<SweepCell> run_sweep(const SweepSpec& spec);
void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells);

// Per-cell default delay grid, exposed for tests.
std::vector<std::uint64_t> default_delays(const std::string& algorithm, std::uint64_t d,
                                          unsigned log_star_ell, unsigned kappa);

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the verification suite (all criteria, or the listed subset) and
// prints one PASS/FAIL line per criterion to `out`.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& which, unsigned kappa,
                                            std::ostream& out);

}  // namespace rvline::harness
