#pragma once

// Corpus runner producing the CSV report.
//
// Columns: file,mode,verdict,float_iterations,forced_pivots,
//          extra_rational_pivots,promoted_value_count,wall_time,agree
// One row per (file, mode), files sorted by name. verdict is sat, unsat or
// error; wall_time is in seconds; agree is 1 when every mode produced the
// same verdict for that file. After the data rows, one row per mode:
//   summary,<mode>,<instances>,,,<zero-extra fraction>,,<median wall_time>,<all agree>
// and a final comment line with the reference fraction for the dense family.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mixsimplex/constraints.hpp"
#include "mixsimplex/driver.hpp"

namespace mixsimplex {

inline constexpr double kReferenceZeroExtraFraction = 58.0 / 82.0;

struct BenchRow {
  std::string file;
  Mode mode = Mode::Rational;
  std::string verdict;  // "sat", "unsat" or "error"
  RunStats stats;
  bool agree = true;
  std::string error;
};

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Constraint files (*.lra) directly inside `dir`, sorted by name.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".lra") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

inline std::vector<BenchRow> run_bench(const std::filesystem::path& dir,
                                       const std::vector<Mode>& modes,
                                       const DriverOptions& opts = {}) {
  std::vector<BenchRow> rows;
  for (const auto& path : corpus_files(dir)) {
    std::size_t first = rows.size();
    std::optional<Problem> problem;
    std::string load_error;
    try {
      problem = build_problem(parse(read_file(path)));
    } catch (const std::exception& e) {
      load_error = e.what();
    }
    for (Mode m : modes) {
      BenchRow row;
      row.file = path.filename().string();
      row.mode = m;
      row.stats.mode = m;
      if (!problem) {
        row.verdict = "error";
        row.error = load_error;
      } else {
        try {
          Decision d = decide(*problem, m, opts);
          row.verdict = d.verdict.sat() ? "sat" : "unsat";
          row.stats = d.stats;
        } catch (const std::exception& e) {
          row.verdict = "error";
          row.error = e.what();
        }
      }
      rows.push_back(std::move(row));
    }
    bool agree = true;
    for (std::size_t i = first; i < rows.size(); ++i)
      agree = agree && rows[i].verdict == rows[first].verdict && rows[i].verdict != "error";
    for (std::size_t i = first; i < rows.size(); ++i) rows[i].agree = agree;
  }
  return rows;
}

inline constexpr std::string_view kBenchHeader =
    "file,mode,verdict,float_iterations,forced_pivots,extra_rational_pivots,"
    "promoted_value_count,wall_time,agree";

inline void write_bench_row(std::ostream& os, const BenchRow& r, bool with_agree) {
  os << r.file << ',' << to_string(r.mode) << ',' << r.verdict << ',' << r.stats.float_iterations
     << ',' << r.stats.forced_pivots << ',' << r.stats.extra_rational_pivots << ','
     << r.stats.promoted_value_count << ',' << std::fixed << std::setprecision(6)
     << r.stats.wall_time << std::defaultfloat << ',';
  if (with_agree) os << (r.agree ? 1 : 0);
  os << '\n';
}

struct ModeSummary {
  std::size_t instances = 0;
  double zero_extra_fraction = 0.0;
  double median_wall_time = 0.0;
  bool all_agree = true;
};

inline ModeSummary summarize(const std::vector<BenchRow>& rows, Mode mode) {
  ModeSummary s;
  std::vector<double> times;
  std::size_t zero = 0;
  for (const auto& r : rows) {
    if (r.mode != mode) continue;
    ++s.instances;
    s.all_agree = s.all_agree && r.agree;
    if (r.verdict == "error") continue;
    times.push_back(r.stats.wall_time);
    if (r.stats.extra_rational_pivots == 0) ++zero;
  }
  if (s.instances) s.zero_extra_fraction = static_cast<double>(zero) / s.instances;
  if (!times.empty()) {
    std::sort(times.begin(), times.end());
    std::size_t k = times.size();
    s.median_wall_time = k % 2 ? times[k / 2] : (times[k / 2 - 1] + times[k / 2]) / 2;
  }
  return s;
}

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows,
                            const std::vector<Mode>& modes) {
  os << kBenchHeader << '\n';
  for (const auto& r : rows) write_bench_row(os, r, true);
  if (rows.empty()) return;
  for (Mode m : modes) {
    ModeSummary s = summarize(rows, m);
    os << "summary," << to_string(m) << ',' << s.instances << ",,," << std::fixed
       << std::setprecision(4) << s.zero_extra_fraction << ",," << std::setprecision(6)
       << s.median_wall_time << std::defaultfloat << ',' << (s.all_agree ? 1 : 0) << '\n';
  }
  os << "# reference zero-extra-pivot fraction (dense 100x50 family): " << std::fixed
     << std::setprecision(4) << kReferenceZeroExtraFraction << std::defaultfloat << '\n';
}

}  // namespace mixsimplex
