#pragma once
// Observable replay files.
//
//   file    := (comment | blank)* header record*
//   header  := "d=" INT
//   record  := blank+ row{d}           (records are separated by blank lines)
//   row     := entry (WS entry){d-1}   (row-major, one matrix row per line)
//   entry   := REAL ":" REAL | REAL    (real part ":" imaginary part)
//   comment := "#" ...                 (ignored anywhere)
//
// Each record must be Hermitian (within 1e-12 relative) and PSD. The writer
// prints every number with 17 significant digits, so write -> parse is bit-exact.

#include "vbftrl/derivatives.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vbftrl {

struct ReplayFile {
  int d = 0;
  std::vector<Observable> observables;
};

/// Throws ParseError (with the offending line) on malformed input, including an empty file.
ReplayFile parse_replay(std::istream& in);
ReplayFile read_replay_file(const std::string& path);

void write_replay(std::ostream& out, int d, const std::vector<Observable>& observables);
void write_replay_file(const std::string& path, int d, const std::vector<Observable>& observables);

/// printf("%.17g"); "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double x);
/// Exact inverse of format_double for finite values. Throws std::invalid_argument.
double parse_double(const std::string& s);

}  // namespace vbftrl
