#include "vbftrl/io.hpp"

#include "vbftrl/errors.hpp"
#include "vbftrl/replay.hpp"

#include <json.hpp>

#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace vbftrl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Reads the header and yields the field lists of each data line.
template <class F>
void read_csv(std::istream& in, const std::string& header, F&& row) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty CSV file", 0);
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ParseError("unexpected CSV header '" + line + "'", line_no);
  const std::size_t n = split_csv(header).size();
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != n) {
      throw ParseError("expected " + std::to_string(n) + " fields, got " + std::to_string(fields.size()), line_no);
    }
    try {
      row(fields);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no);
    } catch (const std::out_of_range& e) {
      throw ParseError(e.what(), line_no);
    }
  }
}

int to_int(const std::string& s) {
  std::size_t pos = 0;
  const int x = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("malformed integer '" + s + "'");
  return x;
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

std::vector<TraceRow> trace_rows(const GameTrace& trace, bool wall_time) {
  std::vector<TraceRow> rows;
  double cum = 0.0;
  for (const auto& rec : trace.rounds) {
    cum += rec.loss;
    rows.push_back({rec.t, rec.loss, cum, rec.pi, rec.gain, rec.miss, rec.solve_iters,
                    wall_time ? rec.solve_seconds : kNaN});
  }
  return rows;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kTraceHeader << "\n";
  for (const auto& r : rows) {
    out << r.t << ',' << format_double(r.loss) << ',' << format_double(r.cumloss) << ',' << format_double(r.pi)
        << ',' << format_double(r.gain) << ',' << format_double(r.miss) << ',' << r.solve_iters << ','
        << format_double(r.solve_seconds) << "\n";
  }
}

std::vector<TraceRow> parse_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  read_csv(in, kTraceHeader, [&](const std::vector<std::string>& f) {
    rows.push_back({to_int(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]), parse_double(f[4]),
                    parse_double(f[5]), to_int(f[6]), parse_double(f[7])});
  });
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepHeader << "\n";
  for (const auto& r : rows) {
    const double per_iter = r.total_iters > 0 ? r.wall_seconds / static_cast<double>(r.total_iters) : kNaN;
    out << r.d << ',' << r.T << ',' << r.seed << ',' << r.learner << ',' << r.reality << ','
        << format_double(r.regret) << ',' << format_double(r.fitted_constant) << ','
        << format_double(r.wall_seconds) << ',' << r.total_iters << ',' << format_double(per_iter) << ','
        << r.violations << ',' << (r.aborted ? 1 : 0) << "\n";
  }
}

std::vector<SweepRow> parse_sweep_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  read_csv(in, kSweepHeader, [&](const std::vector<std::string>& f) {
    SweepRow r;
    r.d = to_int(f[0]);
    r.T = to_int(f[1]);
    std::size_t pos = 0;
    r.seed = std::stoull(f[2], &pos);
    if (pos != f[2].size()) throw std::invalid_argument("malformed seed '" + f[2] + "'");
    r.learner = f[3];
    r.reality = f[4];
    r.regret = parse_double(f[5]);
    r.fitted_constant = parse_double(f[6]);
    r.wall_seconds = parse_double(f[7]);
    r.total_iters = std::stol(f[8]);
    parse_double(f[9]);  // derived column
    r.violations = to_int(f[10]);
    r.aborted = to_int(f[11]) != 0;
    rows.push_back(r);
  });
  return rows;
}

void write_density(std::ostream& out, const DensityMatrix& rho, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << "\n";
  write_replay(out, rho.dim(), {Observable(rho.herm())});
}

std::string summary_json(const GameTrace& trace, const RunConfig& config, const std::string& warning) {
  using nlohmann::json;
  json j;
  j["d"] = trace.d;
  j["T"] = trace.T;
  j["lambda"] = trace.lambda;
  j["mu"] = trace.mu;
  j["seed"] = trace.seed;
  j["learner"] = trace.learner;
  j["reality"] = trace.reality;
  j["rounds_completed"] = trace.rounds.size();
  j["aborted"] = trace.aborted;
  j["error"] = trace.error;
  j["cum_loss"] = number(trace.cum_loss);
  j["hindsight_value"] = trace.aborted ? json(nullptr) : number(trace.hindsight_value);
  j["regularized_value"] = trace.aborted ? json(nullptr) : number(trace.regularized_value);
  j["regret"] = trace.aborted ? json(nullptr) : number(trace.regret);
  j["min_potential"] = number(trace.min_potential);
  j["initial_potential"] = number(trace.initial_potential);
  j["bias"] = number(trace.bias);
  double gain_plus_miss = 0.0;
  for (const auto& r : trace.rounds) gain_plus_miss += r.gain + r.miss;
  j["sum_gain_plus_miss"] = number(gain_plus_miss);
  j["violations"] = {{"pi_bound", trace.violations.pi_bound},
                     {"gain_identity", trace.violations.gain_identity},
                     {"miss_bound", trace.violations.miss_bound},
                     {"gain_plus_miss", trace.violations.gain_plus_miss},
                     {"total", trace.violations.total()}};
  const SolverConfig& s = config.game.solver;
  j["solver"] = {{"max_iters", s.max_iters},
                 {"eps_vol", s.eps_vol},
                 {"tol_psd_cut", s.tol_psd_cut < 0 ? json("auto") : json(s.tol_psd_cut)},
                 {"value_tol", s.value_tol},
                 {"radius_tol", s.radius_tol},
                 {"gradient", s.gradient == GradientMode::closed_form ? "closed-form" : "directional"}};
  j["warning"] = warning;
  return j.dump(2) + "\n";
}

}  // namespace vbftrl
