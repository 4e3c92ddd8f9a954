#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtime/bell.hpp"
#include "qtime/dilation.hpp"
#include "qtime/phase.hpp"
#include "qtime/polarizer.hpp"

namespace qtime::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_validation = 1,
    exit_numerical = 2,
};

/// Parses argv[1..] (no program name), runs exactly one subcommand and writes its artifact to
/// --output (or to `out` when absent). The summary line goes to `out` when
/// the artifact went to a file, otherwise to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Artifact encoders; column orders and key names are part of the public format.

/// %.17g formatting used for every CSV number.
std::string format_number(double value);

void write_trajectory_csv(std::ostream& os, const dilation::TrajectoryRecord& record);
void write_curve_csv(std::ostream& os, const std::vector<polarizer::CurveRow>& rows);
void write_phase_csv(std::ostream& os, const phase::PhaseTrajectory& trajectory);

nlohmann::json to_json(const phase::DefectReport& report);
nlohmann::json to_json(const polarizer::FitResult& result);
nlohmann::json to_json(const bell::CorrelationEstimate& estimate);
nlohmann::json to_json(const bell::SweepResult& result);

}  // namespace qtime::cli
