#ifndef ROLLER_EVALSUITE_HPP
#define ROLLER_EVALSUITE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "roller/episode.hpp"
#include "roller/metric.hpp"

namespace roller {

// One evaluation case: rotate `object` by `angle` about `axis` starting
// from the identity orientation.
struct SuiteCase {
    Vec3 axis;  // unit
    double angle = kPi / 2.0;
    ObjectModel object;
};

struct SuiteSpec {
    std::string name;  // "S", "D", or "N"
    std::vector<SuiteCase> cases;
    int trials = 5;
    std::uint64_t seed = 0;
};

struct SuiteResult {
    struct Entry {
        int case_index = 0;
        int trial = 0;
        double final_e_omega = 100.0;
        StopReason reason = StopReason::InitFailure;
        int steps = 0;
        bool dropped = false;
    };

    std::vector<Entry> entries;
    double mean = 0.0;
    double std_dev = 0.0;  // sample standard deviation (n - 1)
    int drop_count = 0;
};

// The default suites: S rotates about near-vertical axes, D about
// horizontal-dominant axes (both on the 30 mm sphere), N reuses two
// D-style axes on the 60 x 60 x 80 mm prism. All angles 90 degrees.
SuiteSpec default_suite(const std::string& name, int trials = 5, std::uint64_t seed = 0);

// Episode start pose used by the suites.
Pose suite_start_pose();

// Runs every (case, trial) with a per-trial derived noise seed, the
// object starting at identity orientation. Failed or dropped episodes
// score 100. Deterministic for a fixed suite seed.
SuiteResult run_suite(const SuiteSpec& suite, const PolicyFn& policy,
                      const GrasperConfig& config, const WorldParams& world,
                      double stop_threshold, int max_steps,
                      double pos_scale = kDefaultPosScale);

// Tabular comparison across policies sharing suites.
struct Report {
    struct Row {
        std::string suite;
        std::string case_axis;
        double angle_deg = 0.0;
        std::string policy;
        int trial = 0;
        double final_e_omega = 0.0;
        int steps = 0;
        std::string reason;
    };

    struct Summary {
        std::string policy;
        std::string suite;
        double mean = 0.0;
        double std_dev = 0.0;
        int drops = 0;
    };

    std::vector<Row> rows;
    std::vector<Summary> summaries;
};

// Key: (policy name, suite). Suites sharing a name must have identical
// case counts across policies.
Expected<Report, std::string> compare_report(
    const std::map<std::pair<std::string, std::string>, std::pair<SuiteSpec, SuiteResult>>&
        results);

}  // namespace roller

#endif  // ROLLER_EVALSUITE_HPP
