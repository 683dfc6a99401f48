#include "vbftrl/replay.hpp"

#include "vbftrl/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vbftrl {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) throw std::invalid_argument("not a number: '" + s + "'");
  return value;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

Complex parse_entry(const std::string& tok, int line) {
  try {
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos) return {parse_double(tok), 0.0};
    return {parse_double(tok.substr(0, colon)), parse_double(tok.substr(colon + 1))};
  } catch (const std::invalid_argument&) {
    throw ParseError("malformed entry '" + tok + "' (expected re:im)", line);
  }
}

Observable finish_record(const CMatrix& m, int line) {
  const double scale = std::max(1.0, m.norm());
  if ((m - m.adjoint()).norm() > 1e-12 * scale) throw ParseError("observable is not Hermitian", line);
  try {
    return Observable(HermitianMatrix(m));
  } catch (const DomainError& e) {
    throw ParseError(std::string("invalid observable: ") + e.what(), line);
  }
}

}  // namespace

ReplayFile parse_replay(std::istream& in) {
  ReplayFile out;
  std::string raw;
  int line = 0;
  bool have_header = false;

  CMatrix current;
  int rows = 0;
  int record_line = 0;
  const auto flush = [&](int at_line) {
    if (rows == 0) return;
    if (rows != out.d) {
      throw ParseError("record has " + std::to_string(rows) + " rows, expected " + std::to_string(out.d), at_line);
    }
    out.observables.push_back(finish_record(current, record_line));
    rows = 0;
  };

  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (!text.empty() && text[0] == '#') continue;
    if (!have_header) {
      if (text.empty()) continue;
      if (text.rfind("d=", 0) != 0) throw ParseError("expected header 'd=<int>'", line);
      const std::string num = trim(text.substr(2));
      int d = 0;
      const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), d);
      if (ec != std::errc() || ptr != num.data() + num.size() || num.empty()) {
        throw ParseError("malformed dimension '" + num + "'", line);
      }
      if (d < 1) throw ParseError("dimension must be >= 1", line);
      out.d = d;
      have_header = true;
      continue;
    }
    if (text.empty()) {
      flush(line);
      continue;
    }
    if (rows == out.d) throw ParseError("record has more than " + std::to_string(out.d) + " rows", line);
    if (rows == 0) {
      current = CMatrix::Zero(out.d, out.d);
      record_line = line;
    }
    std::istringstream ss(text);
    std::string tok;
    int col = 0;
    while (ss >> tok) {
      if (col >= out.d) throw ParseError("row has more than " + std::to_string(out.d) + " entries", line);
      current(rows, col++) = parse_entry(tok, line);
    }
    if (col != out.d) {
      throw ParseError("row has " + std::to_string(col) + " entries, expected " + std::to_string(out.d), line);
    }
    ++rows;
  }
  if (!have_header) throw ParseError("empty replay file (missing 'd=<int>' header)", line > 0 ? line : 1);
  flush(line);
  if (out.observables.empty()) throw ParseError("replay file holds no observables", line);
  return out;
}

ReplayFile read_replay_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open replay file '" + path + "'", 0);
  return parse_replay(in);
}

void write_replay(std::ostream& out, int d, const std::vector<Observable>& observables) {
  out << "d=" << d << "\n";
  for (const auto& a : observables) {
    if (a.dim() != d) throw std::invalid_argument("write_replay: observable dimension mismatch");
    out << "\n";
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        if (j > 0) out << ' ';
        out << format_double(a.mat()(i, j).real()) << ':' << format_double(a.mat()(i, j).imag());
      }
      out << "\n";
    }
  }
}

void write_replay_file(const std::string& path, int d, const std::vector<Observable>& observables) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write replay file '" + path + "'");
  write_replay(out, d, observables);
}

}  // namespace vbftrl
