#pragma once

#include <array>
#include <cmath>

namespace surgeid {

enum class Method { aid = 0, rnn, rls, ave, we };
constexpr int kMethodCount = 5;

inline const char* to_string(Method m) {
  switch (m) {
    case Method::aid: return "aid";
    case Method::rnn: return "rnn";
    case Method::rls: return "rls";
    case Method::ave: return "ave";
    case Method::we: return "we";
  }
  return "unknown";
}

struct ErrorStats {
  double abs_sum{0.0};
  double sq_sum{0.0};
  long count{0};

  void add(double err) {
    abs_sum += std::abs(err);
    sq_sum += err * err;
    ++count;
  }
  double mae() const { return count ? abs_sum / count : 0.0; }
  double mse() const { return count ? sq_sum / count : 0.0; }
  double rmse() const { return std::sqrt(mse()); }
};

class MetricsAccumulator {
 public:
  // Scores one measured frame against all five predictions.
  void add(double v_meas, double v_aid, double v_rnn, double v_rls,
           double v_ave, double v_we) {
    if (!std::isfinite(v_meas)) {
      ++skipped_;
      return;
    }
    const double preds[kMethodCount] = {v_aid, v_rnn, v_rls, v_ave, v_we};
    for (int i = 0; i < kMethodCount; ++i) {
      if (std::isfinite(preds[i]))
        stats_[i].add(v_meas - preds[i]);
      else
        ++skipped_;
    }
  }

  const ErrorStats& stats(Method m) const { return stats_[static_cast<int>(m)]; }
  ErrorStats& stats(Method m) { return stats_[static_cast<int>(m)]; }
  long skipped() const { return skipped_; }
  void set_skipped(long n) { skipped_ = n; }

 private:
  std::array<ErrorStats, kMethodCount> stats_{};
  long skipped_{0};
};

}  // namespace surgeid
