#include "bpmp/measure.hpp"

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <ostream>
#include <regex>
#include <sstream>

#include "bpmp/solve.hpp"

namespace bpmp {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char ch : s) {
    if (ch == '\'') out += "'\\''";
    else out += ch;
  }
  return out + "'";
}

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

CommandResult run_command(const std::string& command) {
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  if (!pipe) throw MeasurementError("cannot start command: " + command);
  CommandResult r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128;
  return r;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& text, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw std::invalid_argument(where + ": '" + text + "' is not a number");
  return v;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

RunMeasurement measure_builtin(const MipModel& model, const Instance& inst, int trials, std::string instance_id,
                               const std::vector<CutFamily>& families) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  RunMeasurement m;
  m.instance_id = std::move(instance_id);
  double objective = 0.0;
  for (int k = 0; k < trials; ++k) {
    const std::clock_t cpu0 = std::clock();
    const auto wall0 = std::chrono::steady_clock::now();
    const SolveOutcome out = solve(model, inst, families);
    const std::clock_t cpu1 = std::clock();
    const auto wall1 = std::chrono::steady_clock::now();

    if (out.solution.status != MipStatus::kOptimal)
      throw MeasurementError("instance " + m.instance_id + ": solver status " + to_string(out.solution.status));
    const auto ticks = static_cast<double>(out.solution.ticks);
    if (k == 0) {
      m.ticks = ticks;
      objective = out.solution.objective;
    } else if (ticks != m.ticks || out.solution.objective != objective) {
      throw MeasurementError("instance " + m.instance_id + ": trial " + std::to_string(k + 1) +
                             " differs from trial 1 (ticks " + std::to_string(out.solution.ticks) + " vs " +
                             std::to_string(static_cast<long long>(m.ticks)) + ")");
    }
    m.trials.push_back({static_cast<double>(cpu1 - cpu0) / CLOCKS_PER_SEC,
                        std::chrono::duration<double>(wall1 - wall0).count()});
  }
  return m;
}

std::optional<Metrics> parse_metrics(const std::string& output) {
  static const std::regex re(
      R"(METRICS\s+cpu=([-+0-9.eE]+)\s+wall=([-+0-9.eE]+)\s+ticks=([-+0-9.eE]+))");
  std::smatch match;
  if (!std::regex_search(output, match, re)) return std::nullopt;
  try {
    return Metrics{std::stod(match[1].str()), std::stod(match[2].str()), std::stod(match[3].str())};
  } catch (const std::logic_error&) {
    return std::nullopt;
  }
}

RunMeasurement measure_external(const std::string& command_template, const std::filesystem::path& model_file,
                                int trials, std::string instance_id) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  std::string command = command_template;
  const std::string placeholder = "{model}";
  const auto quoted = shell_quote(model_file.string());
  if (const auto pos = command.find(placeholder); pos != std::string::npos) {
    for (auto p = pos; p != std::string::npos; p = command.find(placeholder, p + quoted.size()))
      command.replace(p, placeholder.size(), quoted);
  } else {
    command += " " + quoted;
  }

  RunMeasurement m;
  m.instance_id = std::move(instance_id);
  for (int k = 0; k < trials; ++k) {
    const auto r = run_command(command);
    if (r.exit_code != 0)
      throw MeasurementError("instance " + m.instance_id + ": command exited with status " +
                             std::to_string(r.exit_code) + "; output:\n" + r.output);
    const auto metrics = parse_metrics(r.output);
    if (!metrics)
      throw MeasurementError("instance " + m.instance_id +
                             ": expected a line 'METRICS cpu=<f> wall=<f> ticks=<f>' in output:\n" + r.output);
    m.trials.push_back({metrics->cpu, metrics->wall});
    if (k == 0) {
      m.ticks = metrics->ticks;
    } else if (metrics->ticks != m.ticks) {
      m.warnings.push_back("trial " + std::to_string(k + 1) + " reported ticks " + std::to_string(metrics->ticks) +
                           ", keeping trial 1 value " + std::to_string(m.ticks));
    }
  }
  return m;
}

void write_measurement_log(std::ostream& out, const std::vector<RunMeasurement>& runs) {
  out << "instance,trial,cpu_s,wall_s,ticks\n";
  char buf[128];
  for (const auto& run : runs)
    for (std::size_t k = 0; k < run.trials.size(); ++k) {
      std::snprintf(buf, sizeof buf, ",%zu,%.17g,%.17g,%.17g\n", k + 1, run.trials[k].cpu_s, run.trials[k].wall_s,
                    run.ticks);
      out << run.instance_id << buf;
    }
}

std::vector<RunMeasurement> read_measurement_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "instance,trial,cpu_s,wall_s,ticks")
    throw std::invalid_argument("measurement log: expected header 'instance,trial,cpu_s,wall_s,ticks'");
  std::vector<RunMeasurement> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const auto where = "measurement log line " + std::to_string(line_no);
    if (cells.size() != 5) throw std::invalid_argument(where + ": expected 5 fields");
    const auto trial = parse_number(cells[1], where);
    const Trial t{parse_number(cells[2], where), parse_number(cells[3], where)};
    const double ticks = parse_number(cells[4], where);
    if (out.empty() || out.back().instance_id != cells[0]) {
      if (trial != 1.0) throw std::invalid_argument(where + ": first trial of '" + cells[0] + "' is not 1");
      out.push_back({cells[0], {}, ticks, {}});
    } else if (trial != static_cast<double>(out.back().trials.size() + 1)) {
      throw std::invalid_argument(where + ": trials out of order");
    }
    out.back().trials.push_back(t);
  }
  return out;
}

std::vector<RunMeasurement> load_run_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open run table " + path.string());
  std::string line;
  std::getline(in, line);
  if (split_csv_line(strip_cr(line)).size() != 10)
    throw std::invalid_argument(path.string() + ": header must have 10 columns");
  std::vector<RunMeasurement> out;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto where = path.filename().string() + " line " + std::to_string(line_no);
    const auto cells = split_csv_line(line);
    if (cells.size() != 10) throw std::invalid_argument(where + ": expected 10 fields");
    RunMeasurement m;
    m.instance_id = cells[0];
    for (int k = 0; k < 3; ++k)
      m.trials.push_back({parse_number(cells[1 + k], where), parse_number(cells[5 + k], where)});
    m.ticks = parse_number(cells[9], where);
    const double cpu_avg = parse_number(cells[4], where), real_avg = parse_number(cells[8], where);
    if (std::fabs(m.avg_cpu() - cpu_avg) >= 1.0 || std::fabs(m.avg_wall() - real_avg) >= 1.0)
      throw std::invalid_argument(where + ": stored average disagrees with the runs");
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace bpmp
