#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bpmp/cim.hpp"

namespace bpmp {

// Markdown: per report a speedup table (min/mean/median/max rows per size,
// columns CPU, ticks, real time) and an index table (C_n, T_n, R_n, I_n,
// GCI). Values above 1 are bold.
std::string render_markdown(const std::vector<CompositeReport>& reports);

// CSV "label,size,metric,statistic,value". Speedup statistics use metric
// cpu/ticks/real with statistic min/mean/median/max; the indices C_n, T_n,
// R_n, I_n are statistic "index" under cpu/ticks/real/composite; the GCI is
// size "all", metric "composite", statistic "gci".
std::string render_csv(const std::vector<CompositeReport>& reports);

struct ReportCsvRow {
  std::string label;
  std::string size;
  std::string metric;
  std::string statistic;
  double value = 0.0;
};

std::vector<ReportCsvRow> parse_report_csv(std::istream& in);

}  // namespace bpmp
