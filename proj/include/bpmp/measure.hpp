#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bpmp/cim.hpp"
#include "bpmp/cuts.hpp"
#include "bpmp/instance.hpp"
#include "bpmp/model.hpp"

namespace bpmp {

class MeasurementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Solves the model `trials` times in sequence with the built-in solver,
// recording process CPU and wall time per trial. Throws MeasurementError
// when a solve is not optimal or the tick counts differ between trials.
RunMeasurement measure_builtin(const MipModel& model, const Instance& inst, int trials, std::string instance_id,
                               const std::vector<CutFamily>& families = {});

struct Metrics {
  double cpu = 0.0;
  double wall = 0.0;
  double ticks = 0.0;
};

// First "METRICS cpu=<f> wall=<f> ticks=<f>" line of a command's output.
std::optional<Metrics> parse_metrics(const std::string& output);

// Runs an external command once per trial. "{model}" in the template is
// replaced by the quoted model path; without the placeholder the path is
// appended. Ticks come from the first trial, with a warning when later
// trials report a different count.
RunMeasurement measure_external(const std::string& command_template, const std::filesystem::path& model_file,
                                int trials, std::string instance_id);

// Measurement log: CSV "instance,trial,cpu_s,wall_s,ticks", one row per trial.
void write_measurement_log(std::ostream& out, const std::vector<RunMeasurement>& runs);
std::vector<RunMeasurement> read_measurement_log(std::istream& in);

// Per-run timing table: instance, three CPU runs, CPU average, three
// real-time runs, real-time average, ticks. The stored averages must agree
// with the mean of the runs to within one unit.
std::vector<RunMeasurement> load_run_table(const std::filesystem::path& path);

}  // namespace bpmp
