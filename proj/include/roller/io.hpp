#ifndef ROLLER_IO_HPP
#define ROLLER_IO_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "roller/demoset.hpp"
#include "roller/evalsuite.hpp"
#include "roller/policynet.hpp"

namespace roller {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Learner-side configuration: training hyperparameters plus the expert
// generation and DAgger schedule.
struct LearnerConfig {
    int epochs = 200;
    int batch = 64;
    double lr = 1e-3;
    double leaky_slope = 0.01;
    double pos_scale = kDefaultPosScale;
    int dagger_rounds = 0;
    int dagger_epochs = 50;
    double eps_pos_mm = 10.0;
    double eps_ang = 10.0;
    int expert_count = 50;
    double axis_jitter = 0.4;   // z-dominant axes: [jx, jy, 1]/|.| with j in +-jitter
    double angle_deg = 90.0;

    TrainHyper hyper(std::uint64_t seed) const {
        TrainHyper h;
        h.epochs = epochs;
        h.batch = batch;
        h.lr = lr;
        h.seed = seed;
        return h;
    }
};

// Everything a run needs, loaded from one JSON file. Field names carry
// explicit units; angles are degrees in the file, radians in memory.
struct RunConfig {
    std::uint64_t seed = 12345;
    std::string out_dir = "out";
    GrasperConfig grasper;
    ObjectModel object;
    WorldParams world;
    ControllerParams controller;
    double start_height_mm = 210.0;
    LearnerConfig learner;
    int suite_trials = 5;

    Pose start_pose() const {
        Pose p;
        p.position = {0.0, 0.0, start_height_mm};
        return p;
    }
};

RunConfig load_run_config(const std::filesystem::path& path);
RunConfig run_config_from_json_text(const std::string& text, const std::string& origin);
std::string run_config_to_json_text(const RunConfig& config);

// FNV-1a over the canonical JSON dump; stable across runs, sensitive to
// every semantically meaningful field.
std::uint64_t config_hash(const RunConfig& config);

// Write-temp-then-rename so readers never observe partial files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Shortest decimal that parses back to the same double.
std::string format_double(double x);

// Trajectories: line-delimited JSON, header line with the spec and
// outcome, one line per step.
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                     double pos_scale = kDefaultPosScale);
Trajectory load_trajectory(const std::filesystem::path& path);

// Policy weights: single JSON document, layer-major arrays plus metadata.
void save_policy_net(const std::filesystem::path& path, const PolicyNet& net);
PolicyNet load_policy_net(const std::filesystem::path& path);

// Demo sets: a manifest JSON referencing per-trajectory files (relative
// to the manifest) plus the graph.
void save_demoset(const std::filesystem::path& manifest_path, const DemoSet& demos);
DemoSet load_demoset(const std::filesystem::path& manifest_path);

// Reports: CSV with fixed column order, numbers at round-trip precision;
// summaries in a second CSV.
void save_report_csv(const std::filesystem::path& path, const Report& report);
std::vector<Report::Row> load_report_rows(const std::filesystem::path& path);
void save_summary_csv(const std::filesystem::path& path, const Report& report);

struct ArtifactManifest {
    std::string run_id;
    std::uint64_t config_hash_value = 0;
    std::vector<std::string> files;
    std::string version = "0.1.0";
};

void save_manifest(const std::filesystem::path& path, const ArtifactManifest& manifest);

}  // namespace roller

#endif  // ROLLER_IO_HPP
