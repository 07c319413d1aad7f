#pragma once

#include <fstream>
#include <iosfwd>
#include <string>

#include "cobandit/events.hpp"
#include "cobandit/linalg.hpp"

namespace cobandit {

/// 17 significant digits, round-trip exact for doubles.
std::string format_double(double v);

/// Matrix CSV: first line `rows,cols`, then one comma-separated line per row.
void write_matrix_csv(std::ostream& os, const Matrix& m);
void write_matrix_csv(const std::string& path, const Matrix& m);
Matrix read_matrix_csv(std::istream& is);
Matrix read_matrix_csv(const std::string& path);

void write_vec_line(std::ostream& os, const Vec& v);
Vec read_vec_line(std::istream& is);

/// One event per line:
/// timestamp \t displayed_arm \t click \t u:f1,f2,... \t a1:f1,..;a2:f1,..
void write_event(std::ostream& os, const EventRecord& e);
EventRecord parse_event_line(const std::string& line);

/// Streaming reader that counts and skips malformed lines instead of aborting.
class EventLogReader {
 public:
  explicit EventLogReader(const std::string& path);

  bool next(EventRecord& out);
  std::size_t skipped() const { return skipped_; }
  std::size_t line_number() const { return line_no_; }

 private:
  std::ifstream in_;
  std::size_t skipped_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace cobandit
