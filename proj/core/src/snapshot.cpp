#include "surgeid/snapshot.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace surgeid {
namespace {

constexpr const char* kHeader = "surgeid_snapshot 1";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Writer {
  std::ostringstream out;

  void put(const std::string& key, const std::string& v) { out << key << ' ' << v << '\n'; }
  void put(const std::string& key, double v) { put(key, fmt(v)); }
  void put(const std::string& key, long v) { put(key, std::to_string(v)); }
  void put(const std::string& key, std::uint64_t v) { put(key, std::to_string(v)); }
  void put(const std::string& key, int v) { put(key, std::to_string(v)); }
  void put(const std::string& key, bool v) { put(key, std::string(v ? "1" : "0")); }

  void put_vec(const std::string& key, const Eigen::VectorXd& v) {
    out << key << ' ' << v.size();
    for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << fmt(v[i]);
    out << '\n';
  }
  void put_mat(const std::string& key, const Eigen::MatrixXd& m) {
    out << key << ' ' << m.rows() << ' ' << m.cols();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) out << ' ' << fmt(m(r, c));
    out << '\n';
  }
};

[[noreturn]] void corrupt(const std::string& why) {
  throw std::runtime_error("snapshot: " + why);
}

struct Reader {
  std::map<std::string, std::vector<std::string>> kv;

  explicit Reader(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    bool header_seen = false, end_seen = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (!header_seen) {
        if (line != kHeader) corrupt("bad header");
        header_seen = true;
        continue;
      }
      if (end_seen) corrupt("content after terminal marker");
      if (line == "end") {
        end_seen = true;
        continue;
      }
      std::istringstream ls(line);
      std::string key;
      ls >> key;
      std::vector<std::string> vals;
      std::string tok;
      while (ls >> tok) vals.push_back(tok);
      kv[key] = std::move(vals);
    }
    if (!header_seen) corrupt("empty file");
    if (!end_seen) corrupt("missing terminal marker (truncated?)");
  }

  const std::vector<std::string>& raw(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) corrupt("missing key " + key);
    return it->second;
  }
  double num(const std::string& key) const {
    const auto& v = raw(key);
    if (v.size() != 1) corrupt("key " + key + " is not scalar");
    return parse(v[0], key);
  }
  long integer(const std::string& key) const {
    const auto& v = raw(key);
    if (v.size() != 1) corrupt("key " + key + " is not scalar");
    try {
      return std::stol(v[0]);
    } catch (const std::exception&) {
      corrupt("key " + key + " is not an integer");
    }
  }
  std::string word(const std::string& key) const {
    const auto& v = raw(key);
    if (v.size() != 1) corrupt("key " + key + " is not scalar");
    return v[0];
  }
  bool flag(const std::string& key) const { return integer(key) != 0; }

  Eigen::VectorXd vec(const std::string& key) const {
    const auto& v = raw(key);
    if (v.empty()) corrupt("key " + key + " has no size");
    const long n = std::stol(v[0]);
    if (n < 0 || static_cast<long>(v.size()) != n + 1)
      corrupt("key " + key + " has wrong element count");
    Eigen::VectorXd out(n);
    for (long i = 0; i < n; ++i) out[i] = parse(v[i + 1], key);
    return out;
  }
  Eigen::MatrixXd mat(const std::string& key) const {
    const auto& v = raw(key);
    if (v.size() < 2) corrupt("key " + key + " has no shape");
    const long r = std::stol(v[0]), c = std::stol(v[1]);
    if (r < 0 || c < 0 || static_cast<long>(v.size()) != r * c + 2)
      corrupt("key " + key + " has wrong element count");
    Eigen::MatrixXd out(r, c);
    for (long i = 0; i < r; ++i)
      for (long j = 0; j < c; ++j) out(i, j) = parse(v[2 + i * c + j], key);
    return out;
  }

  // strtod rather than stod: subnormals such as 5e-324 are valid state and
  // must round-trip instead of raising out_of_range.
  static double parse(const std::string& s, const std::string& key) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double d = std::strtod(begin, &end);
    if (end == begin) corrupt("key " + key + " is not numeric");
    if (end != begin + s.size()) corrupt("key " + key + " has trailing garbage");
    return d;
  }
};

}  // namespace

std::string serialize_snapshot(const SnapshotData& s) {
  Writer w;
  w.out << kHeader << '\n';
  w.put("vehicle_id", s.vehicle_id);
  w.put("run_id", s.run_id);
  w.put("wall_time", s.wall_time);
  w.put("stream_time", s.stream_time);

  w.put("aid.m", s.aid_cfg.mass);
  w.put("aid.k_v", s.aid_cfg.k_v);
  w.put_vec("aid.gamma", s.aid_cfg.gamma);
  w.put_vec("aid.theta_hat", s.aid_theta);
  w.put("aid.v_hat", s.aid_v_hat);
  w.put("aid.skipped", s.aid_skipped);

  w.put("rnn.n", s.rnn_cfg.n);
  w.put("rnn.m", s.rnn_cfg.m);
  w.put("rnn.eta", s.rnn_cfg.eta);
  w.put("rnn.init_scale", s.rnn_cfg.init_scale);
  w.put("rnn.adam.lr", s.rnn_cfg.adam.lr);
  w.put("rnn.adam.beta1", s.rnn_cfg.adam.beta1);
  w.put("rnn.adam.beta2", s.rnn_cfg.adam.beta2);
  w.put("rnn.adam.eps", s.rnn_cfg.adam.eps);
  w.put_vec("rnn.a", s.rnn_weights.a);
  w.put_vec("rnn.w1", s.rnn_weights.w1);
  w.put_mat("rnn.W2", s.rnn_weights.W2);
  w.put_vec("rnn.b", s.rnn_weights.b);
  w.put("rnn.adam.t", static_cast<long>(s.rnn_adam.t));
  w.put_vec("rnn.adam.m1.a", s.rnn_adam.m1.a);
  w.put_vec("rnn.adam.m1.w1", s.rnn_adam.m1.w1);
  w.put_mat("rnn.adam.m1.W2", s.rnn_adam.m1.W2);
  w.put_vec("rnn.adam.m1.b", s.rnn_adam.m1.b);
  w.put_vec("rnn.adam.m2.a", s.rnn_adam.m2.a);
  w.put_vec("rnn.adam.m2.w1", s.rnn_adam.m2.w1);
  w.put_mat("rnn.adam.m2.W2", s.rnn_adam.m2.W2);
  w.put_vec("rnn.adam.m2.b", s.rnn_adam.m2.b);
  w.put("rnn.x_hat", s.rnn_x_hat);
  w.put("rnn.skipped", s.rnn_skipped);

  w.put("rls.lambda_f", s.rls_cfg.lambda_f);
  w.put("rls.p0", s.rls_cfg.p0);
  w.put_vec("rls.zeta", s.rls_zeta);
  w.put_mat("rls.P", s.rls_P);
  w.put("rls.resets", s.rls_resets);
  w.put("rls.skipped", s.rls_skipped);

  w.put("ensemble.lambda_f", s.ens_cfg.lambda_f);
  w.put("ensemble.p0", s.ens_cfg.p0);
  w.put_vec("ensemble.c_bar", s.ens_c);
  w.put_mat("ensemble.P3", s.ens_P);
  w.put("ensemble.resets", s.ens_resets);

  w.put("cert.theorem3_ok", s.certification.theorem3_ok);
  w.put("cert.gersgorin_ok", s.certification.gersgorin_ok);
  w.put("cert.m_psd_ok", s.certification.m_psd_ok);
  w.put("cert.min_eigenvalue_of_m", s.certification.min_eigenvalue_of_m);
  w.put("cert.theorem3_value", s.certification.theorem3_value);
  {
    w.out << "cert.violating_neurons " << s.certification.violating_neurons.size();
    for (int i : s.certification.violating_neurons) w.out << ' ' << i;
    w.out << '\n';
  }

  w.put("equilibrium.count", static_cast<long>(s.equilibrium.equilibria.size()));
  for (std::size_t i = 0; i < s.equilibrium.equilibria.size(); ++i) {
    const auto& e = s.equilibrium.equilibria[i];
    const std::string p = "equilibrium." + std::to_string(i);
    w.put(p + ".x", e.x);
    w.put(p + ".slope", e.slope);
    w.put(p + ".class", std::string(to_string(e.cls)));
  }
  {
    Eigen::VectorXd cv(static_cast<Eigen::Index>(s.equilibrium.critical_values.size()));
    for (std::size_t i = 0; i < s.equilibrium.critical_values.size(); ++i)
      cv[static_cast<Eigen::Index>(i)] = s.equilibrium.critical_values[i];
    w.put_vec("equilibrium.critical_values", cv);
  }
  w.put("equilibrium.has_marginal_segment", s.equilibrium.has_marginal_segment);
  {
    w.out << "equilibrium.marginal_segments " << s.equilibrium.marginal_segments.size();
    for (const auto& [lo, hi] : s.equilibrium.marginal_segments)
      w.out << ' ' << fmt(lo) << ' ' << fmt(hi);
    w.out << '\n';
  }

  for (int c = 0; c < kChannelCount; ++c) {
    const auto& slot = s.gate.slots[c];
    const std::string p = std::string("gate.slot.") + to_string(static_cast<Channel>(c));
    w.out << p << ' ' << (slot.has ? 1 : 0) << ' ' << fmt(slot.t) << ' ' << fmt(slot.value)
          << ' ' << (slot.consumed ? 1 : 0) << '\n';
  }
  w.put("gate.has_prev_heading", s.gate.has_prev_heading);
  w.put("gate.prev_heading_t", s.gate.prev_heading_t);
  w.put("gate.prev_heading", s.gate.prev_heading);
  w.put("gate.skipped", s.gate_skipped);

  w.put("engine.has_last_frame", s.has_last_frame);
  w.put("engine.next_snapshot_time", s.next_snapshot_time);

  w.out << "end\n";
  return w.out.str();
}

SnapshotData parse_snapshot(const std::string& text) {
  Reader r(text);
  SnapshotData s;
  s.vehicle_id = r.word("vehicle_id");
  s.run_id = r.word("run_id");
  s.wall_time = r.num("wall_time");
  s.stream_time = r.num("stream_time");

  s.aid_cfg.mass = r.num("aid.m");
  s.aid_cfg.k_v = r.num("aid.k_v");
  const Eigen::VectorXd gamma = r.vec("aid.gamma");
  if (gamma.size() != kAidParamCount) corrupt("aid.gamma has wrong dimension");
  s.aid_cfg.gamma = gamma;
  const Eigen::VectorXd theta = r.vec("aid.theta_hat");
  if (theta.size() != kAidParamCount) corrupt("aid.theta_hat has wrong dimension");
  s.aid_theta = theta;
  s.aid_v_hat = r.num("aid.v_hat");
  s.aid_skipped = r.integer("aid.skipped");

  s.rnn_cfg.n = static_cast<int>(r.integer("rnn.n"));
  s.rnn_cfg.m = static_cast<int>(r.integer("rnn.m"));
  s.rnn_cfg.eta = r.num("rnn.eta");
  s.rnn_cfg.init_scale = r.num("rnn.init_scale");
  s.rnn_cfg.adam.lr = r.num("rnn.adam.lr");
  s.rnn_cfg.adam.beta1 = r.num("rnn.adam.beta1");
  s.rnn_cfg.adam.beta2 = r.num("rnn.adam.beta2");
  s.rnn_cfg.adam.eps = r.num("rnn.adam.eps");
  if (s.rnn_cfg.n < 2 || s.rnn_cfg.m < 1) corrupt("rnn dimensions invalid");

  s.rnn_weights.a = r.vec("rnn.a");
  s.rnn_weights.w1 = r.vec("rnn.w1");
  s.rnn_weights.W2 = r.mat("rnn.W2");
  s.rnn_weights.b = r.vec("rnn.b");
  const auto check_rnn_dims = [&](const Eigen::VectorXd& v, const char* what) {
    if (v.size() != s.rnn_cfg.n) corrupt(std::string(what) + " has wrong dimension");
  };
  check_rnn_dims(s.rnn_weights.a, "rnn.a");
  check_rnn_dims(s.rnn_weights.w1, "rnn.w1");
  check_rnn_dims(s.rnn_weights.b, "rnn.b");
  if (s.rnn_weights.W2.rows() != s.rnn_cfg.n || s.rnn_weights.W2.cols() != s.rnn_cfg.m)
    corrupt("rnn.W2 has wrong shape");

  s.rnn_adam.t = r.integer("rnn.adam.t");
  s.rnn_adam.m1.a = r.vec("rnn.adam.m1.a");
  s.rnn_adam.m1.w1 = r.vec("rnn.adam.m1.w1");
  s.rnn_adam.m1.W2 = r.mat("rnn.adam.m1.W2");
  s.rnn_adam.m1.b = r.vec("rnn.adam.m1.b");
  s.rnn_adam.m2.a = r.vec("rnn.adam.m2.a");
  s.rnn_adam.m2.w1 = r.vec("rnn.adam.m2.w1");
  s.rnn_adam.m2.W2 = r.mat("rnn.adam.m2.W2");
  s.rnn_adam.m2.b = r.vec("rnn.adam.m2.b");
  for (const auto* t : {&s.rnn_adam.m1, &s.rnn_adam.m2}) {
    check_rnn_dims(t->a, "adam moment a");
    check_rnn_dims(t->w1, "adam moment w1");
    check_rnn_dims(t->b, "adam moment b");
    if (t->W2.rows() != s.rnn_cfg.n || t->W2.cols() != s.rnn_cfg.m)
      corrupt("adam moment W2 has wrong shape");
  }
  s.rnn_x_hat = r.num("rnn.x_hat");
  s.rnn_skipped = static_cast<std::uint64_t>(r.integer("rnn.skipped"));

  s.rls_cfg.lambda_f = r.num("rls.lambda_f");
  s.rls_cfg.p0 = r.num("rls.p0");
  s.rls_zeta = r.vec("rls.zeta");
  s.rls_P = r.mat("rls.P");
  if (s.rls_zeta.size() != kRlsParamCount ||
      s.rls_P.rows() != kRlsParamCount || s.rls_P.cols() != kRlsParamCount)
    corrupt("rls payload has wrong dimension");
  s.rls_resets = r.integer("rls.resets");
  s.rls_skipped = r.integer("rls.skipped");

  s.ens_cfg.lambda_f = r.num("ensemble.lambda_f");
  s.ens_cfg.p0 = r.num("ensemble.p0");
  const Eigen::VectorXd c_bar = r.vec("ensemble.c_bar");
  const Eigen::MatrixXd p3 = r.mat("ensemble.P3");
  if (c_bar.size() != 3 || p3.rows() != 3 || p3.cols() != 3)
    corrupt("ensemble payload has wrong dimension");
  s.ens_c = c_bar;
  s.ens_P = p3;
  s.ens_resets = r.integer("ensemble.resets");

  s.certification.theorem3_ok = r.flag("cert.theorem3_ok");
  s.certification.gersgorin_ok = r.flag("cert.gersgorin_ok");
  s.certification.m_psd_ok = r.flag("cert.m_psd_ok");
  s.certification.min_eigenvalue_of_m = r.num("cert.min_eigenvalue_of_m");
  s.certification.theorem3_value = r.num("cert.theorem3_value");
  {
    const Eigen::VectorXd v = r.vec("cert.violating_neurons");
    s.certification.violating_neurons.clear();
    for (Eigen::Index i = 0; i < v.size(); ++i)
      s.certification.violating_neurons.push_back(static_cast<int>(v[i]));
  }

  const long eq_count = r.integer("equilibrium.count");
  s.equilibrium.equilibria.clear();
  for (long i = 0; i < eq_count; ++i) {
    const std::string p = "equilibrium." + std::to_string(i);
    Equilibrium e;
    e.x = r.num(p + ".x");
    e.slope = r.num(p + ".slope");
    const std::string cls = r.word(p + ".class");
    if (cls == "stable") e.cls = StabilityClass::stable;
    else if (cls == "stable-oscillatory") e.cls = StabilityClass::stable_oscillatory;
    else if (cls == "unstable") e.cls = StabilityClass::unstable;
    else if (cls == "marginal") e.cls = StabilityClass::marginal;
    else corrupt("unknown stability class " + cls);
    s.equilibrium.equilibria.push_back(e);
  }
  {
    const Eigen::VectorXd cv = r.vec("equilibrium.critical_values");
    s.equilibrium.critical_values.assign(cv.data(), cv.data() + cv.size());
  }
  s.equilibrium.has_marginal_segment = r.flag("equilibrium.has_marginal_segment");
  {
    const auto& v = r.raw("equilibrium.marginal_segments");
    if (v.empty()) corrupt("equilibrium.marginal_segments has no size");
    const long k = std::stol(v[0]);
    if (static_cast<long>(v.size()) != 2 * k + 1)
      corrupt("equilibrium.marginal_segments has wrong element count");
    s.equilibrium.marginal_segments.clear();
    for (long i = 0; i < k; ++i)
      s.equilibrium.marginal_segments.emplace_back(
          Reader::parse(v[1 + 2 * i], "marginal_segments"),
          Reader::parse(v[2 + 2 * i], "marginal_segments"));
  }

  for (int c = 0; c < kChannelCount; ++c) {
    const std::string key = std::string("gate.slot.") + to_string(static_cast<Channel>(c));
    const auto& v = r.raw(key);
    if (v.size() != 4) corrupt(key + " has wrong element count");
    FrameGate::Slot slot;
    slot.has = std::stol(v[0]) != 0;
    slot.t = Reader::parse(v[1], key);
    slot.value = Reader::parse(v[2], key);
    slot.consumed = std::stol(v[3]) != 0;
    s.gate.slots[c] = slot;
  }
  s.gate.has_prev_heading = r.flag("gate.has_prev_heading");
  s.gate.prev_heading_t = r.num("gate.prev_heading_t");
  s.gate.prev_heading = r.num("gate.prev_heading");
  s.gate_skipped = r.integer("gate.skipped");

  s.has_last_frame = r.flag("engine.has_last_frame");
  s.next_snapshot_time = r.num("engine.next_snapshot_time");

  return s;
}

void save_snapshot(const SnapshotData& s, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("snapshot: cannot open " + file.string() + " for writing");
  out << serialize_snapshot(s);
  if (!out) throw std::runtime_error("snapshot: write failed for " + file.string());
}

SnapshotData load_snapshot(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_snapshot(buf.str());
}

std::string snapshot_filename(const std::string& vehicle_id, double stream_time) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%012.1f", stream_time);
  return vehicle_id + "_" + buf + ".snap";
}

std::optional<SnapshotData> load_latest_snapshot(const std::filesystem::path& dir,
                                                 const std::string& vehicle_id) {
  if (!std::filesystem::is_directory(dir)) return std::nullopt;
  const std::string prefix = vehicle_id + "_";
  std::vector<std::filesystem::path> candidates;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && name.size() > 5 &&
        name.compare(name.size() - 5, 5, ".snap") == 0)
      candidates.push_back(entry.path());
  }
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) { return a.filename().string() > b.filename().string(); });
  for (const auto& path : candidates) {
    try {
      return load_snapshot(path);
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping snapshot " << path.string() << ": " << e.what() << '\n';
    }
  }
  return std::nullopt;
}

}  // namespace surgeid
