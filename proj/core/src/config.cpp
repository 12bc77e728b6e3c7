#include "surgeid/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace surgeid {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& why) { throw std::invalid_argument("config: " + why); }

void check_keys(const json& obj, const char* where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok) bad(std::string("unknown key \"") + item.key() + "\" in " + where);
  }
}

template <typename T>
void get(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    bad(std::string("bad value for \"") + key + "\"");
  }
}

json thrust_to_json(const ThrustParams& p) {
  return {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};
}

ThrustParams thrust_from_json(const json& obj, ThrustParams base) {
  check_keys(obj, "thruster", {"alpha", "beta", "gamma"});
  get(obj, "alpha", base.alpha);
  get(obj, "beta", base.beta);
  get(obj, "gamma", base.gamma);
  return base;
}

}  // namespace

const char* to_string(RnnInputSet set) {
  switch (set) {
    case RnnInputSet::commands_heading: return "commands_heading";
    case RnnInputSet::commands_heading_rate: return "commands_heading_rate";
  }
  return "unknown";
}

void RunConfig::validate() const {
  engine.validate();
  noise.validate();
  nominal.validate();
  if (fleet_size < 1) bad("fleet_size must be positive");
  if (spread < 0.0 || spread >= 1.0) bad("spread must be in [0, 1)");
  if (!(mission_duration > 0.0)) bad("mission_duration must be positive");
  if (!(message_period > 0.0)) bad("message_period must be positive");
  if (substeps < 1) bad("substeps must be >= 1");
  if (runs_per_vehicle < 1) bad("runs_per_vehicle must be >= 1");
  if (threads < 0) bad("threads must be >= 0");
}

std::string to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;

  json e;
  e["vehicle_id"] = cfg.engine.vehicle_id;
  e["run_id"] = cfg.engine.run_id;
  e["window"] = cfg.engine.gate.window;
  e["quantization_step"] = cfg.engine.gate.quantization_step;
  e["v_max"] = cfg.engine.v_max;
  e["xi_max"] = cfg.engine.xi_max;
  e["rnn_inputs"] = to_string(cfg.engine.rnn_inputs);
  e["snapshot_period"] = cfg.engine.snapshot_period;
  e["seed"] = cfg.engine.seed;
  e["enable_aid"] = cfg.engine.enable_aid;
  e["enable_rnn"] = cfg.engine.enable_rnn;
  e["enable_rls"] = cfg.engine.enable_rls;
  e["aid"] = {{"mass", cfg.engine.aid.mass},
              {"k_v", cfg.engine.aid.k_v},
              {"gamma", std::vector<double>(cfg.engine.aid.gamma.data(),
                                            cfg.engine.aid.gamma.data() + kAidParamCount)}};
  e["rnn"] = {{"n", cfg.engine.rnn.n},
              {"m", cfg.engine.rnn.m},
              {"eta", cfg.engine.rnn.eta},
              {"init_scale", cfg.engine.rnn.init_scale},
              {"lr", cfg.engine.rnn.adam.lr},
              {"beta1", cfg.engine.rnn.adam.beta1},
              {"beta2", cfg.engine.rnn.adam.beta2},
              {"eps", cfg.engine.rnn.adam.eps}};
  e["rls"] = {{"lambda_f", cfg.engine.rls.lambda_f}, {"p0", cfg.engine.rls.p0}};
  e["ensemble"] = {{"lambda_f", cfg.engine.ensemble.lambda_f},
                   {"p0", cfg.engine.ensemble.p0}};
  j["engine"] = e;

  json s;
  s["fleet_size"] = cfg.fleet_size;
  s["spread"] = cfg.spread;
  s["couple_mass"] = cfg.couple_mass;
  s["noise"] = {{"velocity_std", cfg.noise.velocity_std},
                {"outlier_prob", cfg.noise.outlier_prob},
                {"outlier_mag", cfg.noise.outlier_mag}};
  s["duration"] = cfg.mission_duration;
  s["message_period"] = cfg.message_period;
  s["substeps"] = cfg.substeps;
  s["runs_per_vehicle"] = cfg.runs_per_vehicle;
  s["nominal"] = {{"m", cfg.nominal.m},
                  {"c_q", cfg.nominal.c_q},
                  {"c_l", cfg.nominal.c_l},
                  {"c_thetadot", cfg.nominal.c_thetadot},
                  {"thrust_left", thrust_to_json(cfg.nominal.thrust_left)},
                  {"thrust_right", thrust_to_json(cfg.nominal.thrust_right)}};
  j["sim"] = s;
  return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("JSON parse failure: ") + e.what());
  }
  RunConfig cfg;
  check_keys(j, "top level", {"seed", "threads", "engine", "sim"});
  get(j, "seed", cfg.seed);
  get(j, "threads", cfg.threads);

  bool engine_seed_given = false;
  if (j.contains("engine")) {
    const json& e = j.at("engine");
    check_keys(e, "engine",
               {"vehicle_id", "run_id", "window", "quantization_step", "v_max", "xi_max",
                "rnn_inputs", "snapshot_period", "seed", "enable_aid", "enable_rnn",
                "enable_rls", "aid", "rnn", "rls", "ensemble"});
    get(e, "vehicle_id", cfg.engine.vehicle_id);
    get(e, "run_id", cfg.engine.run_id);
    get(e, "window", cfg.engine.gate.window);
    get(e, "quantization_step", cfg.engine.gate.quantization_step);
    get(e, "v_max", cfg.engine.v_max);
    get(e, "xi_max", cfg.engine.xi_max);
    if (e.contains("rnn_inputs")) {
      const std::string set = e.at("rnn_inputs").get<std::string>();
      if (set == "commands_heading") cfg.engine.rnn_inputs = RnnInputSet::commands_heading;
      else if (set == "commands_heading_rate")
        cfg.engine.rnn_inputs = RnnInputSet::commands_heading_rate;
      else bad("unknown rnn_inputs \"" + set + "\"");
    }
    get(e, "snapshot_period", cfg.engine.snapshot_period);
    engine_seed_given = e.contains("seed");
    get(e, "seed", cfg.engine.seed);
    get(e, "enable_aid", cfg.engine.enable_aid);
    get(e, "enable_rnn", cfg.engine.enable_rnn);
    get(e, "enable_rls", cfg.engine.enable_rls);
    if (e.contains("aid")) {
      const json& a = e.at("aid");
      check_keys(a, "engine.aid", {"mass", "k_v", "gamma"});
      get(a, "mass", cfg.engine.aid.mass);
      get(a, "k_v", cfg.engine.aid.k_v);
      if (a.contains("gamma")) {
        std::vector<double> g;
        get(a, "gamma", g);
        if (g.size() != kAidParamCount) bad("engine.aid.gamma needs 9 entries");
        for (int i = 0; i < kAidParamCount; ++i) cfg.engine.aid.gamma[i] = g[i];
      }
    }
    if (e.contains("rnn")) {
      const json& r = e.at("rnn");
      check_keys(r, "engine.rnn",
                 {"n", "m", "eta", "init_scale", "lr", "beta1", "beta2", "eps"});
      get(r, "n", cfg.engine.rnn.n);
      get(r, "m", cfg.engine.rnn.m);
      get(r, "eta", cfg.engine.rnn.eta);
      get(r, "init_scale", cfg.engine.rnn.init_scale);
      get(r, "lr", cfg.engine.rnn.adam.lr);
      get(r, "beta1", cfg.engine.rnn.adam.beta1);
      get(r, "beta2", cfg.engine.rnn.adam.beta2);
      get(r, "eps", cfg.engine.rnn.adam.eps);
    }
    if (e.contains("rls")) {
      const json& r = e.at("rls");
      check_keys(r, "engine.rls", {"lambda_f", "p0"});
      get(r, "lambda_f", cfg.engine.rls.lambda_f);
      get(r, "p0", cfg.engine.rls.p0);
    }
    if (e.contains("ensemble")) {
      const json& r = e.at("ensemble");
      check_keys(r, "engine.ensemble", {"lambda_f", "p0"});
      get(r, "lambda_f", cfg.engine.ensemble.lambda_f);
      get(r, "p0", cfg.engine.ensemble.p0);
    }
  }
  if (!engine_seed_given) cfg.engine.seed = cfg.seed;

  if (j.contains("sim")) {
    const json& s = j.at("sim");
    check_keys(s, "sim",
               {"fleet_size", "spread", "couple_mass", "noise", "duration",
                "message_period", "substeps", "runs_per_vehicle", "nominal"});
    get(s, "fleet_size", cfg.fleet_size);
    get(s, "spread", cfg.spread);
    get(s, "couple_mass", cfg.couple_mass);
    if (s.contains("noise")) {
      const json& n = s.at("noise");
      check_keys(n, "sim.noise", {"velocity_std", "outlier_prob", "outlier_mag"});
      get(n, "velocity_std", cfg.noise.velocity_std);
      get(n, "outlier_prob", cfg.noise.outlier_prob);
      get(n, "outlier_mag", cfg.noise.outlier_mag);
    }
    get(s, "duration", cfg.mission_duration);
    get(s, "message_period", cfg.message_period);
    get(s, "substeps", cfg.substeps);
    get(s, "runs_per_vehicle", cfg.runs_per_vehicle);
    if (s.contains("nominal")) {
      const json& n = s.at("nominal");
      check_keys(n, "sim.nominal",
                 {"m", "c_q", "c_l", "c_thetadot", "thrust_left", "thrust_right"});
      get(n, "m", cfg.nominal.m);
      get(n, "c_q", cfg.nominal.c_q);
      get(n, "c_l", cfg.nominal.c_l);
      get(n, "c_thetadot", cfg.nominal.c_thetadot);
      if (n.contains("thrust_left"))
        cfg.nominal.thrust_left = thrust_from_json(n.at("thrust_left"), cfg.nominal.thrust_left);
      if (n.contains("thrust_right"))
        cfg.nominal.thrust_right =
            thrust_from_json(n.at("thrust_right"), cfg.nominal.thrust_right);
    }
  }

  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) bad("cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return run_config_from_json(buf.str());
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("config: cannot open " + file.string() + " for writing");
  out << to_json(cfg) << '\n';
}

}  // namespace surgeid
