#pragma once

// Command-line front end. Every subcommand is a thin wrapper over the core
// library; numbers are computed there.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quasilab/dynamics.hpp"
#include "quasilab/riesz.hpp"

namespace quasilab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitPrecondition = 2;
inline constexpr int kExitSearchExhausted = 3;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNoInput = 66;

inline constexpr int kReportSchemaVersion = 1;

using Json = nlohmann::ordered_json;

struct ExperimentReport {
  Json summary = Json::object();
  std::optional<DiscrepancyTrace> trace;
  std::vector<BoundRow> bounds;
  std::vector<BoundRow> dual_bounds;
};

enum class PlotKind { discrepancy, bounds };

/// Writes Dn.dat (n, D_n) or lmin.dat (R, lambda_min; plus lmin_dual.dat
/// when present) and a JSON descriptor next to each. Throws
/// PreconditionError, writing nothing, when the series is missing.
std::vector<std::string> emit_plotdata(const ExperimentReport& report, PlotKind kind, const std::string& dir);

/// Runs one command line (args excludes the program name). Summaries go
/// to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace quasilab::cli
