#include "cobandit/io.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "cobandit/errors.hpp"

namespace cobandit {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  os << m.rows() << "," << m.cols() << "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << ",";
      os << format_double(m(i, j));
    }
    os << "\n";
  }
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open for write: " + path);
  write_matrix_csv(os, m);
}

namespace {

std::vector<double> split_doubles(const std::string& s, char sep, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(sep, start);
    if (end == std::string::npos) end = s.size();
    const char* b = s.data() + start;
    const char* e = s.data() + end;
    double v = 0.0;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
      throw ParseError(std::string(what) + ": bad number '" + s.substr(start, end - start) + "'");
    out.push_back(v);
    if (end == s.size()) break;
    start = end + 1;
  }
  return out;
}

}  // namespace

Matrix read_matrix_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError("matrix csv: missing header");
  std::size_t rows = 0, cols = 0;
  if (std::sscanf(header.c_str(), "%zu,%zu", &rows, &cols) != 2 || rows == 0 || cols == 0)
    throw ParseError("matrix csv: bad header '" + header + "'");
  Matrix m(rows, cols);
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) throw ParseError("matrix csv: truncated at row " + std::to_string(i));
    const std::vector<double> vals = split_doubles(line, ',', "matrix csv");
    if (vals.size() != cols) throw ParseError("matrix csv: row " + std::to_string(i) + " has wrong arity");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = vals[j];
  }
  return m;
}

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open: " + path);
  return read_matrix_csv(is);
}

void write_vec_line(std::ostream& os, const Vec& v) {
  os << v.size();
  for (double x : v) os << "," << format_double(x);
  os << "\n";
}

Vec read_vec_line(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("vector line: eof");
  const std::vector<double> vals = split_doubles(line, ',', "vector line");
  if (vals.empty() || vals[0] != static_cast<double>(vals.size() - 1))
    throw ParseError("vector line: length prefix mismatch");
  return Vec(vals.begin() + 1, vals.end());
}

void write_event(std::ostream& os, const EventRecord& e) {
  os << e.timestamp << "\t" << e.displayed_arm << "\t" << e.click << "\tu:";
  for (std::size_t i = 0; i < e.user_features.size(); ++i) {
    if (i) os << ",";
    os << format_double(e.user_features[i]);
  }
  os << "\t";
  for (std::size_t a = 0; a < e.pool.size(); ++a) {
    if (a) os << ";";
    os << e.pool[a].arm_id << ":";
    for (std::size_t i = 0; i < e.pool[a].features.size(); ++i) {
      if (i) os << ",";
      os << format_double(e.pool[a].features[i]);
    }
  }
  os << "\n";
}

EventRecord parse_event_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find('\t', start);
    if (end == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  if (fields.size() != 5) throw ParseError("event: expected 5 tab-separated fields");

  EventRecord e;
  try {
    e.timestamp = std::stoll(fields[0]);
  } catch (const std::exception&) {
    throw ParseError("event: bad timestamp '" + fields[0] + "'");
  }
  e.displayed_arm = fields[1];
  if (e.displayed_arm.empty()) throw ParseError("event: empty displayed arm");
  if (fields[2] == "0")
    e.click = 0;
  else if (fields[2] == "1")
    e.click = 1;
  else
    throw ParseError("event: click must be 0 or 1, got '" + fields[2] + "'");

  if (fields[3].rfind("u:", 0) != 0) throw ParseError("event: user field must start with 'u:'");
  e.user_features = split_doubles(fields[3].substr(2), ',', "event user features");

  std::size_t p = 0;
  const std::string& pools = fields[4];
  while (p < pools.size()) {
    std::size_t end = pools.find(';', p);
    if (end == std::string::npos) end = pools.size();
    const std::string entry = pools.substr(p, end - p);
    const std::size_t colon = entry.find(':');
    if (colon == std::string::npos || colon == 0) throw ParseError("event: bad pool entry '" + entry + "'");
    Candidate c;
    c.arm_id = entry.substr(0, colon);
    c.features = split_doubles(entry.substr(colon + 1), ',', "event arm features");
    e.pool.push_back(std::move(c));
    p = end + 1;
  }
  if (e.pool.empty()) throw ParseError("event: empty pool");

  bool found = false;
  for (const Candidate& c : e.pool)
    if (c.arm_id == e.displayed_arm) found = true;
  if (!found) throw ParseError("event: displayed arm '" + e.displayed_arm + "' not in pool");
  return e;
}

EventLogReader::EventLogReader(const std::string& path) : in_(path) {
  if (!in_) throw ParseError("cannot open event log: " + path);
}

bool EventLogReader::next(EventRecord& out) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (line.empty()) continue;
    try {
      out = parse_event_line(line);
      return true;
    } catch (const ParseError&) {
      ++skipped_;
    }
  }
  return false;
}

}  // namespace cobandit
