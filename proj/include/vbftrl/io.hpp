#pragma once
// Run and sweep artifacts. Every number is written with 17 significant
// digits (format_double), so each writer/parser pair round-trips bit-exactly.

#include "vbftrl/config.hpp"
#include "vbftrl/game.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vbftrl {

/// One data row of trace.csv.
struct TraceRow {
  int t = 0;
  double loss = 0.0;
  double cumloss = 0.0;
  double pi = 0.0;
  double gain = 0.0;
  double miss = 0.0;
  int solve_iters = 0;
  double solve_seconds = 0.0;
};

inline constexpr const char* kTraceHeader = "t,loss,cumloss,pi,gain,miss,solve_iters,solve_seconds";
inline constexpr const char* kSweepHeader =
    "d,T,seed,learner,reality,regret,fitted_constant,wall_seconds,total_iters,seconds_per_iter,violations,aborted";

/// Rows of a game trace. solve_seconds is NaN unless wall_time is set, which
/// keeps reruns byte-identical.
std::vector<TraceRow> trace_rows(const GameTrace& trace, bool wall_time);

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows);
/// Throws ParseError (with line number) on a malformed file.
std::vector<TraceRow> parse_trace_csv(std::istream& in);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(std::istream& in);

/// rho as a one-record replay-format file (so it can be fed back as an observable).
void write_density(std::ostream& out, const DensityMatrix& rho, const std::string& comment);

/// Structured run summary as pretty-printed JSON; non-finite numbers become null.
std::string summary_json(const GameTrace& trace, const RunConfig& config, const std::string& warning);

}  // namespace vbftrl
