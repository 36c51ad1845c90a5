#include "roller/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace roller {

using nlohmann::json;

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json quat_to_json(const UnitQuat& q) { return json::array({q.w, q.x, q.y, q.z}); }

UnitQuat quat_from_json(const json& j) {
    return UnitQuat(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
                    j.at(3).get<double>());
}

json pose_to_json(const Pose& p) {
    return json{{"position", vec3_to_json(p.position)},
                {"orientation", quat_to_json(p.orientation)}};
}

Pose pose_from_json(const json& j) {
    Pose p;
    p.position = vec3_from_json(j.at("position"));
    p.orientation = quat_from_json(j.at("orientation"));
    return p;
}

json spec_to_json(const TargetSpec& s) {
    return json{{"start", pose_to_json(s.start)}, {"target", pose_to_json(s.target)}};
}

TargetSpec spec_from_json(const json& j) {
    TargetSpec s;
    s.start = pose_from_json(j.at("start"));
    s.target = pose_from_json(j.at("target"));
    return s;
}

double require_positive(const json& j, const char* field, const std::string& origin) {
    double v = j.at(field).get<double>();
    if (!(v > 0.0)) {
        throw IoError(origin + ": field '" + field + "' must be > 0, got " +
                      std::to_string(v));
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

std::string format_double(double x) {
    // json serializes doubles with the shortest round-trip decimal.
    return json(x).dump();
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return run_config_from_json_text(read_file(path), path.string());
}

RunConfig run_config_from_json_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw IoError(origin + ": " + e.what());
    }

    RunConfig c;
    try {
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();

        if (j.contains("grasper")) {
            const json& g = j.at("grasper");
            if (g.contains("link_a_mm")) c.grasper.link_a = require_positive(g, "link_a_mm", origin);
            if (g.contains("link_b_mm")) c.grasper.link_b = require_positive(g, "link_b_mm", origin);
            if (g.contains("roller_radius_mm"))
                c.grasper.roller_radius_r = require_positive(g, "roller_radius_mm", origin);
            if (g.contains("base_circle_radius_mm"))
                c.grasper.base_circle_radius = require_positive(g, "base_circle_radius_mm", origin);
            if (g.contains("finger_azimuths_deg")) {
                const json& az = g.at("finger_azimuths_deg");
                for (int i = 0; i < 3; ++i) {
                    c.grasper.finger_azimuths[static_cast<std::size_t>(i)] =
                        deg_to_rad(az.at(i).get<double>());
                }
            }
            if (g.contains("pivot_limit_deg"))
                c.grasper.pivot_limit = deg_to_rad(require_positive(g, "pivot_limit_deg", origin));
            if (g.contains("pivot_rate_limit_deg"))
                c.grasper.pivot_rate_limit =
                    deg_to_rad(require_positive(g, "pivot_rate_limit_deg", origin));
            if (g.contains("lambda")) {
                c.grasper.lambda = g.at("lambda").get<double>();
                if (!(c.grasper.lambda > 0.0 && c.grasper.lambda <= 1.0)) {
                    throw IoError(origin + ": field 'lambda' must be in (0, 1], got " +
                                  std::to_string(c.grasper.lambda));
                }
            }
            if (g.contains("grip_preload_deg"))
                c.grasper.grip_setpoint = deg_to_rad(g.at("grip_preload_deg").get<double>());
            if (g.contains("leaky_slope"))
                c.grasper.leaky_slope = g.at("leaky_slope").get<double>();
        }

        if (j.contains("object")) {
            const json& o = j.at("object");
            std::string shape = o.at("shape").get<std::string>();
            if (shape == "sphere") {
                c.object.shape = Sphere{require_positive(o, "radius_mm", origin)};
            } else if (shape == "box") {
                c.object.shape = Box{require_positive(o, "dx_mm", origin),
                                     require_positive(o, "dy_mm", origin),
                                     require_positive(o, "dz_mm", origin)};
            } else {
                throw IoError(origin + ": field 'shape' must be sphere or box, got " + shape);
            }
            if (o.contains("mass_g")) c.object.mass_g = o.at("mass_g").get<double>();
        }

        if (j.contains("world")) {
            const json& w = j.at("world");
            if (w.contains("sigma_pos_mm")) c.world.sigma_pos_mm = w.at("sigma_pos_mm").get<double>();
            if (w.contains("sigma_ang_deg"))
                c.world.sigma_ang_rad = deg_to_rad(w.at("sigma_ang_deg").get<double>());
            if (w.contains("base_rate_limit_deg"))
                c.world.base_rate_limit =
                    deg_to_rad(require_positive(w, "base_rate_limit_deg", origin));
            if (w.contains("pivot_rate_limit_deg"))
                c.world.pivot_rate_limit =
                    deg_to_rad(require_positive(w, "pivot_rate_limit_deg", origin));
            if (w.contains("roller_rate_limit_rad"))
                c.world.roller_rate_limit = require_positive(w, "roller_rate_limit_rad", origin);
            if (w.contains("contact_gap_tolerance_mm"))
                c.world.contact_gap_tolerance_mm =
                    require_positive(w, "contact_gap_tolerance_mm", origin);
            if (w.contains("drop_gap_mm"))
                c.world.drop_gap_mm = require_positive(w, "drop_gap_mm", origin);
            if (w.contains("drop_fall_mm"))
                c.world.drop_fall_mm = require_positive(w, "drop_fall_mm", origin);
        }

        if (j.contains("controller")) {
            const json& k = j.at("controller");
            if (k.contains("w_pos")) c.controller.w_pos = k.at("w_pos").get<double>();
            if (k.contains("stop_threshold"))
                c.controller.stop_threshold = require_positive(k, "stop_threshold", origin);
            if (k.contains("max_steps")) c.controller.max_steps = k.at("max_steps").get<int>();
            if (k.contains("assumed_radius_mm"))
                c.controller.assumed_radius_mm = require_positive(k, "assumed_radius_mm", origin);
            if (k.contains("contact_band_mm"))
                c.controller.contact_band_mm = require_positive(k, "contact_band_mm", origin);
            if (k.contains("start_height_mm"))
                c.start_height_mm = require_positive(k, "start_height_mm", origin);
        }

        if (j.contains("learner")) {
            const json& l = j.at("learner");
            if (l.contains("epochs")) c.learner.epochs = l.at("epochs").get<int>();
            if (l.contains("batch")) c.learner.batch = l.at("batch").get<int>();
            if (l.contains("lr")) c.learner.lr = require_positive(l, "lr", origin);
            if (l.contains("leaky_slope")) c.learner.leaky_slope = l.at("leaky_slope").get<double>();
            if (l.contains("pos_scale")) c.learner.pos_scale = require_positive(l, "pos_scale", origin);
            if (l.contains("dagger_rounds")) c.learner.dagger_rounds = l.at("dagger_rounds").get<int>();
            if (l.contains("dagger_epochs")) c.learner.dagger_epochs = l.at("dagger_epochs").get<int>();
            if (l.contains("eps_pos_mm")) c.learner.eps_pos_mm = require_positive(l, "eps_pos_mm", origin);
            if (l.contains("eps_ang")) c.learner.eps_ang = require_positive(l, "eps_ang", origin);
            if (l.contains("expert_count")) c.learner.expert_count = l.at("expert_count").get<int>();
            if (l.contains("axis_jitter")) c.learner.axis_jitter = l.at("axis_jitter").get<double>();
            if (l.contains("angle_deg")) c.learner.angle_deg = l.at("angle_deg").get<double>();
        }

        if (j.contains("suite")) {
            const json& s = j.at("suite");
            if (s.contains("trials")) c.suite_trials = s.at("trials").get<int>();
        }
    } catch (const json::exception& e) {
        throw IoError(origin + ": " + e.what());
    }

    c.grasper.validate();
    c.object.validate();
    if (c.controller.max_steps <= 0) throw IoError(origin + ": field 'max_steps' must be > 0");
    if (c.learner.epochs < 0) throw IoError(origin + ": field 'epochs' must be >= 0");
    if (c.learner.batch <= 0) throw IoError(origin + ": field 'batch' must be > 0");
    if (c.suite_trials <= 0) throw IoError(origin + ": field 'trials' must be > 0");
    return c;
}

std::string run_config_to_json_text(const RunConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["out_dir"] = c.out_dir;
    j["grasper"] = {
        {"link_a_mm", c.grasper.link_a},
        {"link_b_mm", c.grasper.link_b},
        {"roller_radius_mm", c.grasper.roller_radius_r},
        {"base_circle_radius_mm", c.grasper.base_circle_radius},
        {"finger_azimuths_deg", json::array({rad_to_deg(c.grasper.finger_azimuths[0]),
                                             rad_to_deg(c.grasper.finger_azimuths[1]),
                                             rad_to_deg(c.grasper.finger_azimuths[2])})},
        {"pivot_limit_deg", rad_to_deg(c.grasper.pivot_limit)},
        {"pivot_rate_limit_deg", rad_to_deg(c.grasper.pivot_rate_limit)},
        {"lambda", c.grasper.lambda},
        {"grip_preload_deg", rad_to_deg(c.grasper.grip_setpoint)},
        {"leaky_slope", c.grasper.leaky_slope},
    };
    if (c.object.is_sphere()) {
        j["object"] = {{"shape", "sphere"},
                       {"radius_mm", c.object.sphere().radius},
                       {"mass_g", c.object.mass_g}};
    } else {
        j["object"] = {{"shape", "box"},
                       {"dx_mm", c.object.box().dx},
                       {"dy_mm", c.object.box().dy},
                       {"dz_mm", c.object.box().dz},
                       {"mass_g", c.object.mass_g}};
    }
    j["world"] = {
        {"sigma_pos_mm", c.world.sigma_pos_mm},
        {"sigma_ang_deg", rad_to_deg(c.world.sigma_ang_rad)},
        {"base_rate_limit_deg", rad_to_deg(c.world.base_rate_limit)},
        {"pivot_rate_limit_deg", rad_to_deg(c.world.pivot_rate_limit)},
        {"roller_rate_limit_rad", c.world.roller_rate_limit},
        {"contact_gap_tolerance_mm", c.world.contact_gap_tolerance_mm},
        {"drop_gap_mm", c.world.drop_gap_mm},
        {"drop_fall_mm", c.world.drop_fall_mm},
    };
    j["controller"] = {
        {"w_pos", c.controller.w_pos},
        {"stop_threshold", c.controller.stop_threshold},
        {"max_steps", c.controller.max_steps},
        {"assumed_radius_mm", c.controller.assumed_radius_mm},
        {"contact_band_mm", c.controller.contact_band_mm},
        {"start_height_mm", c.start_height_mm},
    };
    j["learner"] = {
        {"epochs", c.learner.epochs},
        {"batch", c.learner.batch},
        {"lr", c.learner.lr},
        {"leaky_slope", c.learner.leaky_slope},
        {"pos_scale", c.learner.pos_scale},
        {"dagger_rounds", c.learner.dagger_rounds},
        {"dagger_epochs", c.learner.dagger_epochs},
        {"eps_pos_mm", c.learner.eps_pos_mm},
        {"eps_ang", c.learner.eps_ang},
        {"expert_count", c.learner.expert_count},
        {"axis_jitter", c.learner.axis_jitter},
        {"angle_deg", c.learner.angle_deg},
    };
    j["suite"] = {{"trials", c.suite_trials}};
    return j.dump(2) + "\n";
}

std::uint64_t config_hash(const RunConfig& config) {
    std::string text = run_config_to_json_text(config);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char ch : text) {
        h ^= static_cast<std::uint8_t>(ch);
        h *= 0x00000100000001b3ull;
    }
    return h;
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                     double pos_scale) {
    std::ostringstream out;
    json header{{"type", "trajectory"},
                {"seed", traj.seed},
                {"pos_scale", pos_scale},
                {"spec", spec_to_json(traj.spec)},
                {"reason", to_string(traj.reason)},
                {"final_e_omega", traj.final_e_omega}};
    out << header.dump() << "\n";
    int index = 0;
    for (const TrajectoryStep& s : traj.steps) {
        json line{{"step", index++},
                  {"state", s.state.v},
                  {"action", s.action.v},
                  {"e_omega", s.e_omega},
                  {"residuals", s.residuals},
                  {"dropped", s.dropped}};
        out << line.dump() << "\n";
    }
    atomic_write(path, out.str());
}

Trajectory load_trajectory(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    std::size_t offset = 0;
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty trajectory file");

    Trajectory traj;
    try {
        json header = json::parse(line);
        traj.seed = header.at("seed").get<std::uint64_t>();
        traj.spec = spec_from_json(header.at("spec"));
        traj.reason = stop_reason_from_string(header.at("reason").get<std::string>());
        traj.final_e_omega = header.at("final_e_omega").get<double>();
    } catch (const std::exception& e) {
        throw IoError(path.string() + " at byte 0: " + e.what());
    }
    offset += line.size() + 1;

    while (std::getline(in, line)) {
        if (line.empty()) {
            offset += 1;
            continue;
        }
        try {
            json js = json::parse(line);
            TrajectoryStep s;
            const json& state = js.at("state");
            if (state.size() != 35) throw IoError("state size != 35");
            for (int i = 0; i < 35; ++i) s.state[i] = state.at(i).get<double>();
            const json& action = js.at("action");
            if (action.size() != 9) throw IoError("action size != 9");
            for (std::size_t i = 0; i < 9; ++i) s.action.v[i] = action.at(i).get<double>();
            s.e_omega = js.at("e_omega").get<double>();
            const json& res = js.at("residuals");
            for (std::size_t i = 0; i < 3; ++i) s.residuals[i] = res.at(i).get<double>();
            s.dropped = js.at("dropped").get<bool>();
            traj.steps.push_back(s);
        } catch (const std::exception& e) {
            throw IoError(path.string() + " at byte " + std::to_string(offset) + ": " + e.what());
        }
        offset += line.size() + 1;
    }
    return traj;
}

void save_policy_net(const std::filesystem::path& path, const PolicyNet& net) {
    json j;
    j["type"] = "policy_net";
    auto sizes = net.layer_sizes();
    j["arch"] = std::vector<int>(sizes.begin(), sizes.end());
    j["leaky_slope"] = net.leaky_slope;
    j["input_scaling"] = net.input_pos_scale;
    j["seed"] = net.seed;
    j["epochs_trained"] = net.epochs_trained;
    j["loss_curve"] = net.loss_curve;
    json layers = json::array();
    for (int l = 0; l < PolicyNet::kLayers; ++l) {
        json rows = json::array();
        for (long i = 0; i < net.weights[l].rows(); ++i) {
            json row = json::array();
            for (long k = 0; k < net.weights[l].cols(); ++k) row.push_back(net.weights[l](i, k));
            rows.push_back(std::move(row));
        }
        json bias = json::array();
        for (long i = 0; i < net.biases[l].size(); ++i) bias.push_back(net.biases[l](i));
        layers.push_back(json{{"weights", std::move(rows)}, {"bias", std::move(bias)}});
    }
    j["layers"] = std::move(layers);
    atomic_write(path, j.dump() + "\n");
}

PolicyNet load_policy_net(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    PolicyNet net;
    try {
        net.leaky_slope = j.at("leaky_slope").get<double>();
        net.input_pos_scale = j.at("input_scaling").get<double>();
        net.seed = j.at("seed").get<std::uint64_t>();
        net.epochs_trained = j.at("epochs_trained").get<int>();
        net.loss_curve = j.at("loss_curve").get<std::vector<double>>();
        const json& layers = j.at("layers");
        if (layers.size() != PolicyNet::kLayers) {
            throw IoError("expected " + std::to_string(PolicyNet::kLayers) + " layers");
        }
        for (int l = 0; l < PolicyNet::kLayers; ++l) {
            const json& rows = layers.at(l).at("weights");
            long nrows = static_cast<long>(rows.size());
            long ncols = static_cast<long>(rows.at(0).size());
            net.weights[l].resize(nrows, ncols);
            for (long i = 0; i < nrows; ++i) {
                for (long k = 0; k < ncols; ++k) {
                    net.weights[l](i, k) = rows.at(static_cast<std::size_t>(i))
                                               .at(static_cast<std::size_t>(k))
                                               .get<double>();
                }
            }
            const json& bias = layers.at(l).at("bias");
            net.biases[l].resize(static_cast<long>(bias.size()));
            for (long i = 0; i < net.biases[l].size(); ++i) {
                net.biases[l](i) = bias.at(static_cast<std::size_t>(i)).get<double>();
            }
        }
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
    return net;
}

void save_demoset(const std::filesystem::path& manifest_path, const DemoSet& demos) {
    std::filesystem::path dir = manifest_path.parent_path();
    json j;
    j["type"] = "demoset";
    json files = json::array();
    char name[64];
    for (std::size_t i = 0; i < demos.trajectories.size(); ++i) {
        std::snprintf(name, sizeof(name), "traj_%04zu.jsonl", i);
        save_trajectory(dir / name, demos.trajectories[i]);
        files.push_back(std::string(name));
    }
    j["trajectory_files"] = std::move(files);
    json nodes = json::array();
    for (const Pose& p : demos.nodes) nodes.push_back(pose_to_json(p));
    j["nodes"] = std::move(nodes);
    json edges = json::array();
    for (const DemoSet::Edge& e : demos.edges) {
        edges.push_back(json{{"from", e.from}, {"to", e.to}, {"trajectory", e.trajectory_index}});
    }
    j["edges"] = std::move(edges);
    atomic_write(manifest_path, j.dump(2) + "\n");
}

DemoSet load_demoset(const std::filesystem::path& manifest_path) {
    json j;
    try {
        j = json::parse(read_file(manifest_path));
    } catch (const json::parse_error& e) {
        throw IoError(manifest_path.string() + ": " + e.what());
    }
    DemoSet demos;
    std::filesystem::path dir = manifest_path.parent_path();
    try {
        for (const auto& f : j.at("trajectory_files")) {
            Trajectory t = load_trajectory(dir / f.get<std::string>());
            demos.trajectories.push_back(t);
            demos.specs.push_back(t.spec);
        }
        for (const auto& n : j.at("nodes")) demos.nodes.push_back(pose_from_json(n));
        for (const auto& e : j.at("edges")) {
            DemoSet::Edge edge;
            edge.from = e.at("from").get<int>();
            edge.to = e.at("to").get<int>();
            edge.trajectory_index = e.at("trajectory").get<int>();
            if (edge.trajectory_index < 0 ||
                edge.trajectory_index >= static_cast<int>(demos.trajectories.size())) {
                throw IoError("edge references missing trajectory");
            }
            demos.edges.push_back(edge);
        }
    } catch (const json::exception& e) {
        throw IoError(manifest_path.string() + ": " + e.what());
    }
    return demos;
}

void save_report_csv(const std::filesystem::path& path, const Report& report) {
    std::ostringstream out;
    out << "suite,case_axis,angle_deg,policy,trial,final_e_omega,steps,reason\n";
    for (const Report::Row& r : report.rows) {
        out << r.suite << "," << r.case_axis << "," << format_double(r.angle_deg) << ","
            << r.policy << "," << r.trial << "," << format_double(r.final_e_omega) << ","
            << r.steps << "," << r.reason << "\n";
    }
    atomic_write(path, out.str());
}

std::vector<Report::Row> load_report_rows(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw IoError(path.string() + ": empty report");
    std::vector<Report::Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.size() != 8) {
            throw IoError(path.string() + ": bad row '" + line + "'");
        }
        Report::Row r;
        r.suite = cells[0];
        r.case_axis = cells[1];
        r.angle_deg = std::stod(cells[2]);
        r.policy = cells[3];
        r.trial = std::stoi(cells[4]);
        r.final_e_omega = std::stod(cells[5]);
        r.steps = std::stoi(cells[6]);
        r.reason = cells[7];
        rows.push_back(r);
    }
    return rows;
}

void save_summary_csv(const std::filesystem::path& path, const Report& report) {
    std::ostringstream out;
    out << "policy,suite,mean,std,drops\n";
    for (const Report::Summary& s : report.summaries) {
        out << s.policy << "," << s.suite << "," << format_double(s.mean) << ","
            << format_double(s.std_dev) << "," << s.drops << "\n";
    }
    atomic_write(path, out.str());
}

void save_manifest(const std::filesystem::path& path, const ArtifactManifest& manifest) {
    for (const std::string& f : manifest.files) {
        if (!std::filesystem::exists(path.parent_path() / f)) {
            throw IoError("manifest lists missing file: " + f);
        }
    }
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(manifest.config_hash_value));
    json j{{"type", "manifest"},
           {"run_id", manifest.run_id},
           {"config_hash", std::string(hash_hex)},
           {"files", manifest.files},
           {"version", manifest.version}};
    atomic_write(path, j.dump(2) + "\n");
}

}  // namespace roller
