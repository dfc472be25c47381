#pragma once

#include <atomic>
#include <cstdio>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace lrlab {

/// Slack tolerance: a row passes iff rhs - lhs >= kSlackTol.
constexpr double kSlackTol = -1e-12;

struct SweepRow {
  std::vector<std::pair<std::string, double>> params;  // fixed key order per report
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool pass = true;
};

inline SweepRow make_row(std::vector<std::pair<std::string, double>> params, double lhs,
                         double rhs) {
  SweepRow row;
  row.params = std::move(params);
  row.lhs = lhs;
  row.rhs = rhs;
  row.slack = rhs - lhs;
  row.pass = row.slack >= kSlackTol;
  return row;
}

struct SweepReport {
  std::vector<SweepRow> rows;
  double min_slack = 0.0;
  int violations = 0;

  void finalize() {
    min_slack = rows.empty() ? 0.0 : rows[0].slack;
    violations = 0;
    for (const SweepRow& r : rows) {
      min_slack = std::min(min_slack, r.slack);
      if (!r.pass) ++violations;
    }
  }

  void append(SweepReport other) {
    rows.insert(rows.end(), std::make_move_iterator(other.rows.begin()),
                std::make_move_iterator(other.rows.end()));
    finalize();
  }
};

/// 17 significant digits round-trips every double exactly.
inline std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// CSV with '.' decimals and LF line endings; header from the first row's
/// parameter keys (every row of a report carries the same keys).
inline std::string to_csv(const SweepReport& report) {
  std::string out;
  if (report.rows.empty()) {
    out += "lhs,rhs,slack,pass\n";
    return out;
  }
  for (const auto& [key, value] : report.rows[0].params) out += key + ",";
  out += "lhs,rhs,slack,pass\n";
  for (const SweepRow& r : report.rows) {
    for (const auto& [key, value] : r.params) out += fmt_double(value) + ",";
    out += fmt_double(r.lhs) + "," + fmt_double(r.rhs) + "," + fmt_double(r.slack) + "," +
           (r.pass ? "true" : "false") + "\n";
  }
  return out;
}

inline nlohmann::json to_json(const SweepReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& r : report.rows) {
    nlohmann::json row;
    for (const auto& [key, value] : r.params) row[key] = value;
    row["lhs"] = r.lhs;
    row["rhs"] = r.rhs;
    row["slack"] = r.slack;
    row["pass"] = r.pass;
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"rows", std::move(rows)},
                        {"min_slack", report.min_slack},
                        {"violations", report.violations}};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);  // binary: keep LF endings on any platform
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
}

/// Deterministic parallel map: fn(i) fills slot i, slots are concatenated in
/// index order, so the result is identical for any thread count.
template <typename Fn>
inline std::vector<SweepRow> parallel_rows(int n, int threads, Fn&& fn) {
  std::vector<std::vector<SweepRow>> slots(n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) slots[i] = fn(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    int workers = std::min(threads, n);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) slots[i] = fn(i);
      });
    for (auto& th : pool) th.join();
  }
  std::vector<SweepRow> out;
  for (auto& s : slots)
    out.insert(out.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  return out;
}

}  // namespace lrlab
