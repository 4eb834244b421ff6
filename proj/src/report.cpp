#include "bpmp/report.hpp"

#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace bpmp {

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string cell(double v) { return v > 1.0 ? "**" + fixed2(v) + "**" : fixed2(v); }

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        out.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

void speedup_table(std::ostream& md, const CompositeReport& r) {
  bool any = false;
  for (const auto& s : r.sizes) any = any || s.stats.has_value();
  if (!any) return;
  md << "| | Ave. CPU Time | Ticks | Ave. Real Time |\n";
  md << "|---|---:|---:|---:|\n";
  for (const auto& s : r.sizes) {
    if (!s.stats) continue;
    md << "| **n = " << s.size << "** | | | |\n";
    const auto& st = *s.stats;
    md << "| Min | " << cell(st.cpu.min) << " | " << cell(st.ticks.min) << " | " << cell(st.real.min) << " |\n";
    md << "| Mean | " << cell(st.cpu.mean) << " | " << cell(st.ticks.mean) << " | " << cell(st.real.mean) << " |\n";
    md << "| Median | " << cell(st.cpu.median) << " | " << cell(st.ticks.median) << " | " << cell(st.real.median)
       << " |\n";
    md << "| Max | " << cell(st.cpu.max) << " | " << cell(st.ticks.max) << " | " << cell(st.real.max) << " |\n";
  }
  md << "\n";
}

}  // namespace

std::string render_markdown(const std::vector<CompositeReport>& reports) {
  std::ostringstream md;
  md << "# CIM report\n";
  for (const auto& r : reports) {
    md << "\n## " << r.label << "\n\n";
    if (!r.incumbent.empty() || !r.challenger.empty())
      md << "Incumbent `" << r.incumbent << "`, challenger `" << r.challenger << "`.\n\n";
    if (!r.note.empty()) md << r.note << "\n\n";
    speedup_table(md, r);
    if (!r.sizes.empty()) {
      md << "| n | C_n (CPU) | T_n (Ticks) | R_n (Real Time) | I_n | GCI |\n";
      md << "|---|---:|---:|---:|---:|---:|\n";
      bool first = true;
      for (const auto& s : r.sizes) {
        md << "| " << s.size << " | " << cell(s.indices.c) << " | " << cell(s.indices.t) << " | "
           << cell(s.indices.r) << " | " << cell(s.indices.i) << " |" << (first ? " " + cell(r.gci) + " |" : " |") << "\n";
        first = false;
      }
      md << "\n";
    }
    md << "Decision: " << (r.adopt ? "adopt" : "reject") << " (GCI " << fixed2(r.gci) << ")\n";
  }
  return md.str();
}

std::string render_csv(const std::vector<CompositeReport>& reports) {
  std::ostringstream csv;
  csv << "label,size,metric,statistic,value\n";
  for (const auto& r : reports) {
    const auto label = csv_field(r.label);
    for (const auto& s : r.sizes) {
      const auto size = std::to_string(s.size);
      if (s.stats) {
        for (Metric m : kMetrics) {
          const auto& st = s.stats->get(m);
          const auto prefix = label + "," + size + "," + to_string(m) + ",";
          csv << prefix << "min," << full(st.min) << "\n";
          csv << prefix << "mean," << full(st.mean) << "\n";
          csv << prefix << "median," << full(st.median) << "\n";
          csv << prefix << "max," << full(st.max) << "\n";
        }
      }
      csv << label << "," << size << ",cpu,index," << full(s.indices.c) << "\n";
      csv << label << "," << size << ",ticks,index," << full(s.indices.t) << "\n";
      csv << label << "," << size << ",real,index," << full(s.indices.r) << "\n";
      csv << label << "," << size << ",composite,index," << full(s.indices.i) << "\n";
    }
    csv << label << ",all,composite,gci," << full(r.gci) << "\n";
  }
  return csv.str();
}

std::vector<ReportCsvRow> parse_report_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "label,size,metric,statistic,value")
    throw std::invalid_argument("report CSV: expected header 'label,size,metric,statistic,value'");
  std::vector<ReportCsvRow> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 5) throw std::invalid_argument("report CSV line " + std::to_string(line_no) + ": expected 5 fields");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(f[4], &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != f[4].size())
      throw std::invalid_argument("report CSV line " + std::to_string(line_no) + ": bad value '" + f[4] + "'");
    out.push_back({f[0], f[1], f[2], f[3], v});
  }
  return out;
}

}  // namespace bpmp
