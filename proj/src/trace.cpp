#include "alstop/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "alstop/rng.hpp"

namespace alstop {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string predictions_digest(std::span<const int> predictions) {
  std::string bytes;
  bytes.reserve(predictions.size());
  for (int p : predictions) bytes.push_back(p > 0 ? '+' : '-');
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

const char* const kTraceHeader =
    "iter,labeled,pool_remaining,queried_cum,batch_ids,stopset_digest,"
    "kappa,kappa_degenerate,batch_acc,batch_conf,pool_conf,pool_changes,"
    "pool_inside_margin,test_f,"
    "sp_stop,sp_diag,sc2000_stop,sc2000_diag,zwh2008_stop,zwh2008_diag,"
    "minerr_stop,minerr_diag,ls2008_stop,ls2008_diag,v2008_stop,v2008_diag";

namespace {

std::string opt_double(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

std::string opt_int(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw std::runtime_error("bad double '" + s + "' in " + where);
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t used;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("bad integer '" + s + "' in " + where);
  }
}

}  // namespace

void write_trace_csv(const std::string& path, const RunTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << kTraceHeader << '\n';
  for (const auto& r : trace.rows) {
    out << r.iteration << ',' << r.labeled << ',' << r.pool_remaining << ',' << r.queried_cum
        << ',';
    for (std::size_t i = 0; i < r.batch_ids.size(); ++i) {
      if (i) out << ' ';
      out << r.batch_ids[i];
    }
    out << ',' << r.stopset_digest << ',';
    out << opt_double(r.kappa) << ',';
    out << (r.kappa ? (r.kappa_degenerate ? "1" : "0") : "") << ',';
    out << opt_double(r.batch_acc) << ',' << opt_double(r.batch_conf) << ','
        << format_double(r.pool_conf) << ',' << opt_int(r.pool_changes) << ','
        << opt_int(r.pool_inside_margin) << ',' << format_double(r.test_f);
    for (const auto& cell : r.criteria)
      out << ',' << (cell.stop ? '1' : '0') << ',' << opt_double(cell.diagnostic);
    out << '\n';
  }
}

RunTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw std::runtime_error(path + " has an unexpected header");
  RunTrace trace;
  int line_no = 1;
  const int expected_fields = 14 + 2 * kCriterionCount;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    auto fields = split(line, ',');
    if (static_cast<int>(fields.size()) != expected_fields)
      throw std::runtime_error(where + ": expected " + std::to_string(expected_fields) +
                               " fields, got " + std::to_string(fields.size()));
    TraceRow r;
    r.iteration = parse_int(fields[0], where);
    r.labeled = parse_int(fields[1], where);
    r.pool_remaining = parse_int(fields[2], where);
    r.queried_cum = parse_int(fields[3], where);
    if (!fields[4].empty()) {
      std::istringstream ids(fields[4]);
      int id;
      while (ids >> id) r.batch_ids.push_back(id);
    }
    r.stopset_digest = fields[5];
    if (!fields[6].empty()) r.kappa = parse_double(fields[6], where);
    if (!fields[7].empty()) r.kappa_degenerate = fields[7] == "1";
    if (!fields[8].empty()) r.batch_acc = parse_double(fields[8], where);
    if (!fields[9].empty()) r.batch_conf = parse_double(fields[9], where);
    r.pool_conf = parse_double(fields[10], where);
    if (!fields[11].empty()) r.pool_changes = parse_int(fields[11], where);
    if (!fields[12].empty()) r.pool_inside_margin = parse_int(fields[12], where);
    r.test_f = parse_double(fields[13], where);
    for (int c = 0; c < kCriterionCount; ++c) {
      const std::string& stop_field = fields[14 + 2 * c];
      if (stop_field != "0" && stop_field != "1")
        throw std::runtime_error(where + ": bad stop flag '" + stop_field + "'");
      r.criteria[c].stop = stop_field == "1";
      const std::string& diag_field = fields[15 + 2 * c];
      if (!diag_field.empty()) r.criteria[c].diagnostic = parse_double(diag_field, where);
    }
    trace.rows.push_back(std::move(r));
  }
  return trace;
}

}  // namespace alstop
