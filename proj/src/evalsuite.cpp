#include "roller/evalsuite.hpp"

#include <cmath>
#include <sstream>

#include "roller/rng.hpp"

namespace roller {

namespace {

void finalize_stats(SuiteResult& r) {
    if (r.entries.empty()) return;
    double sum = 0.0;
    for (const auto& e : r.entries) sum += e.final_e_omega;
    r.mean = sum / static_cast<double>(r.entries.size());
    if (r.entries.size() > 1) {
        double ss = 0.0;
        for (const auto& e : r.entries) {
            double d = e.final_e_omega - r.mean;
            ss += d * d;
        }
        r.std_dev = std::sqrt(ss / static_cast<double>(r.entries.size() - 1));
    }
}

std::string axis_string(const Vec3& a) {
    std::ostringstream os;
    os.precision(3);
    os << "[" << a.x << " " << a.y << " " << a.z << "]";
    return os.str();
}

}  // namespace

Pose suite_start_pose() {
    Pose p;
    p.position = {0.0, 0.0, 210.0};
    return p;
}

SuiteSpec default_suite(const std::string& name, int trials, std::uint64_t seed) {
    SuiteSpec suite;
    suite.name = name;
    suite.trials = trials;
    suite.seed = seed;
    ObjectModel sphere;
    sphere.shape = Sphere{30.0};
    ObjectModel prism;
    prism.shape = Box{60.0, 60.0, 80.0};

    auto add = [&suite](const ObjectModel& obj, double x, double y, double z) {
        SuiteCase c;
        c.axis = normalized(Vec3{x, y, z});
        c.angle = kPi / 2.0;
        c.object = obj;
        suite.cases.push_back(c);
    };

    if (name == "S") {
        add(sphere, 0.0, 0.0, 1.0);
        add(sphere, 0.25, 0.0, 0.968);
        add(sphere, 0.0, 0.25, 0.968);
        add(sphere, 0.35, 0.35, 0.868);
        add(sphere, -0.25, 0.0, 0.968);
    } else if (name == "D") {
        add(sphere, 1.0, 0.0, 0.0);
        add(sphere, 0.0, 1.0, 0.0);
        add(sphere, 0.707, 0.707, 0.0);
        add(sphere, 0.968, 0.0, 0.25);
        add(sphere, 0.0, 0.968, 0.25);
        add(sphere, 0.707, -0.707, 0.0);
    } else if (name == "N") {
        add(prism, 1.0, 0.0, 0.0);
        add(prism, 0.707, 0.707, 0.0);
    } else {
        throw std::invalid_argument("unknown suite: " + name);
    }
    return suite;
}

SuiteResult run_suite(const SuiteSpec& suite, const PolicyFn& policy,
                      const GrasperConfig& config, const WorldParams& world,
                      double stop_threshold, int max_steps, double pos_scale) {
    SuiteResult result;
    for (std::size_t ci = 0; ci < suite.cases.size(); ++ci) {
        const SuiteCase& c = suite.cases[ci];
        TargetSpec spec;
        spec.start = suite_start_pose();
        spec.target = spec.start;
        spec.target.orientation = quat_from_angle_axis(c.axis, c.angle);

        for (int trial = 0; trial < suite.trials; ++trial) {
            std::uint64_t episode_seed =
                Rng::derive(suite.seed, "suite-episode", ci * 1000 + static_cast<std::size_t>(trial))
                    .next_u64();
            Trajectory traj = run_episode_from_spec(config, world, c.object, spec, policy,
                                                    stop_threshold, max_steps, episode_seed,
                                                    pos_scale);
            SuiteResult::Entry e;
            e.case_index = static_cast<int>(ci);
            e.trial = trial;
            e.steps = static_cast<int>(traj.steps.size());
            e.reason = traj.reason;
            e.dropped = traj.reason == StopReason::Dropped ||
                        traj.reason == StopReason::InitFailure ||
                        traj.reason == StopReason::NotGrasping;
            e.final_e_omega = e.dropped ? 100.0 : traj.final_e_omega;
            if (e.dropped) result.drop_count += 1;
            result.entries.push_back(e);
        }
    }
    finalize_stats(result);
    return result;
}

Expected<Report, std::string> compare_report(
    const std::map<std::pair<std::string, std::string>, std::pair<SuiteSpec, SuiteResult>>&
        results) {
    if (results.empty()) return std::string("compare_report: empty input");

    // Shared suites must agree on shape.
    std::map<std::string, std::size_t> case_counts;
    for (const auto& [key, value] : results) {
        const auto& [policy, suite_name] = key;
        (void)policy;
        auto it = case_counts.find(suite_name);
        if (it == case_counts.end()) {
            case_counts[suite_name] = value.first.cases.size();
        } else if (it->second != value.first.cases.size()) {
            return std::string("compare_report: mismatched case count for suite " + suite_name);
        }
    }

    Report report;
    for (const auto& [key, value] : results) {
        const auto& [policy, suite_name] = key;
        const SuiteSpec& suite = value.first;
        const SuiteResult& res = value.second;
        for (const auto& e : res.entries) {
            Report::Row row;
            row.suite = suite_name;
            row.case_axis = axis_string(suite.cases[static_cast<std::size_t>(e.case_index)].axis);
            row.angle_deg =
                rad_to_deg(suite.cases[static_cast<std::size_t>(e.case_index)].angle);
            row.policy = policy;
            row.trial = e.trial;
            row.final_e_omega = e.final_e_omega;
            row.steps = e.steps;
            row.reason = to_string(e.reason);
            report.rows.push_back(row);
        }
        Report::Summary s;
        s.policy = policy;
        s.suite = suite_name;
        s.mean = res.mean;
        s.std_dev = res.std_dev;
        s.drops = res.drop_count;
        report.summaries.push_back(s);
    }
    return report;
}

}  // namespace roller
