#include "surgeid/log_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace surgeid {

namespace {

constexpr const char* kLogMagic = "surgeid_log";
constexpr const char* kRecordHeader =
    "t,v_meas,v_aid,v_rnn,v_rls,v_ave,v_we,err_aid,err_rnn,err_rls,err_ave,err_we";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  return out;
}

}  // namespace

void write_mission_log(const MissionLog& log, const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("log: cannot open " + file.string() + " for writing");
  out << kLogMagic << " vehicle_id=" << log.vehicle_id << " run_id=" << log.run_id << '\n';
  for (const auto& m : log.messages)
    out << fmt(m.t) << ',' << to_string(m.channel) << ',' << fmt(m.value) << '\n';
  if (!out) throw std::runtime_error("log: write failed for " + file.string());
}

MissionLog read_mission_log(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("log: cannot open " + file.string());
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("log: empty file " + file.string());

  std::istringstream hs(header);
  std::string magic;
  hs >> magic;
  if (magic != kLogMagic)
    throw std::runtime_error("log: bad header in " + file.string());
  MissionLog log;
  std::string kv;
  while (hs >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
    if (key == "vehicle_id") log.vehicle_id = value;
    else if (key == "run_id") log.run_id = value;
  }

  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    Message m;
    std::optional<Channel> ch;
    if (fields.size() == 3 && parse_double(fields[0], m.t) &&
        (ch = channel_from_string(fields[1])) && parse_double(fields[2], m.value)) {
      m.channel = *ch;
      log.messages.push_back(m);
    } else {
      ++log.skipped_lines;
    }
  }
  return log;
}

void write_prediction_records(const std::vector<PredictionRecord>& records,
                              const std::string& vehicle_id, const std::string& run_id,
                              const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("records: cannot open " + file.string() + " for writing");
  out << "# vehicle_id=" << vehicle_id << " run_id=" << run_id << '\n';
  out << kRecordHeader << '\n';
  for (const auto& r : records) {
    out << fmt(r.t) << ',';
    if (r.v_meas) out << fmt(*r.v_meas);
    out << ',' << fmt(r.v_aid) << ',' << fmt(r.v_rnn) << ',' << fmt(r.v_rls) << ','
        << fmt(r.v_ave) << ',' << fmt(r.v_we);
    const double preds[] = {r.v_aid, r.v_rnn, r.v_rls, r.v_ave, r.v_we};
    for (double p : preds) {
      out << ',';
      if (r.v_meas) out << fmt(std::abs(*r.v_meas - p));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("records: write failed for " + file.string());
}

std::vector<PredictionRecord> read_prediction_records(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("records: cannot open " + file.string());
  std::vector<PredictionRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    const auto fields = split(line, ',');
    if (fields.size() < 7) throw std::runtime_error("records: malformed line in " + file.string());
    PredictionRecord r;
    double v = 0.0;
    if (!parse_double(fields[0], v)) throw std::runtime_error("records: bad t in " + file.string());
    r.t = v;
    if (!fields[1].empty()) {
      if (!parse_double(fields[1], v))
        throw std::runtime_error("records: bad v_meas in " + file.string());
      r.v_meas = v;
    }
    double* slots[] = {&r.v_aid, &r.v_rnn, &r.v_rls, &r.v_ave, &r.v_we};
    for (int i = 0; i < 5; ++i) {
      if (!parse_double(fields[2 + i], *slots[i]))
        throw std::runtime_error("records: bad prediction in " + file.string());
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace surgeid
