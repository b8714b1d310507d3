// Scenario runner: JSON experiment configs, named checks against the
// classification run, and machine-readable reports (JSON + CSV + PGM).
#ifndef FRONTLAB_SCENARIO_HPP
#define FRONTLAB_SCENARIO_HPP

#include <string>

#include <json.hpp>

#include "frontlab/barrier.hpp"
#include "frontlab/dynamics.hpp"

namespace frontlab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Shared config pieces (also used by the geom / barrier subcommands).
ObstacleSpec parse_obstacle(const nlohmann::json& j, const std::string& file);
DynParams parse_dynamics(const nlohmann::json& j, const std::string& file);
Extent parse_extent(const nlohmann::json& j, const std::string& file,
                    double fallback_height);

struct Scenario {
    std::string name;
    std::string source;  // config path, for error context
    double alpha = 0.25;
    ObstacleSpec obstacle{Empty{}};
    DynParams params;
    nlohmann::json checks;  // array of named assertions
    nlohmann::json extra;   // full document (slide/grid sections etc.)
};

Scenario load_scenario(const std::string& path);

// CLI-level overrides; zero means "keep the scenario value".
struct RunOverrides {
    double h = 0.0;
    double dt = 0.0;
    double t_max = 0.0;
};

struct CheckOutcome {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ScenarioReport {
    std::string name;
    ClassificationResult cls;
    std::vector<CheckOutcome> checks;
    bool pass = false;
    bool errored = false;
    std::string error;
    double wall_clock_s = 0.0;  // printed, never written (determinism)

    nlohmann::json to_json() const;
};

// Runs classification + the scenario's checks; when out_dir is nonempty,
// writes report.json, history.csv and vbar.pgm there.
ScenarioReport run_scenario(const Scenario& s, const RunOverrides& o,
                            const std::string& out_dir);

struct SuiteSummary {
    int total = 0;
    int passed = 0;
    std::vector<ScenarioReport> reports;
};

// Runs every *.json in dir (sorted by name); a failing or throwing scenario
// does not stop the others.
SuiteSummary run_suite(const std::string& dir, const RunOverrides& o,
                       const std::string& out_dir);

// Output helpers (shared with the CLI subcommands).
void write_pgm(const std::string& path, const GridDomain& g,
               const std::vector<double>& values);
void write_mask_pgm(const std::string& path, const GridDomain& g);
void write_history_csv(const std::string& path, const RunHistory& h);

}  // namespace frontlab

#endif
