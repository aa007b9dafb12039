#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alstop/stopping.hpp"

namespace alstop {

struct CriterionCell {
  bool stop = false;
  std::optional<double> diagnostic;
};

// One active-learning iteration. Iteration 0 is the seed model and leaves
// every batch-derived column empty. Doubles are written with %.17g so the
// CSV round-trips bit-exactly; reading a trace back and replaying it is the
// canonical way every summary is produced.
struct TraceRow {
  int iteration = 0;
  int labeled = 0;         // annotations so far (seed + queried)
  int pool_remaining = 0;  // unlabeled examples left after this iteration
  long queried_cum = 0;    // queried instances, excluding the seed
  std::vector<int> batch_ids;
  std::string stopset_digest;  // 16-hex FNV-1a over the stop-set predictions
  std::optional<double> kappa;
  bool kappa_degenerate = false;
  std::optional<double> batch_acc;
  std::optional<double> batch_conf;
  double pool_conf = 0.0;
  std::optional<int> pool_changes;
  std::optional<int> pool_inside_margin;  // svm only
  double test_f = 0.0;
  std::array<CriterionCell, kCriterionCount> criteria;
};

struct RunTrace {
  std::vector<TraceRow> rows;
  bool pool_exhausted() const { return !rows.empty() && rows.back().pool_remaining == 0; }
};

// Decimal string (%.17g) that parses back to exactly the same double.
std::string format_double(double v);

// FNV-1a over '+'/'-' bytes of the prediction vector, 16 lowercase hex
// digits. Two digests agree exactly when the predictions agree.
std::string predictions_digest(std::span<const int> predictions);

extern const char* const kTraceHeader;

void write_trace_csv(const std::string& path, const RunTrace& trace);
RunTrace read_trace_csv(const std::string& path);

}  // namespace alstop
