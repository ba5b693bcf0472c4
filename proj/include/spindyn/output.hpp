#ifndef SPINDYN_OUTPUT_HPP
#define SPINDYN_OUTPUT_HPP

// CSV and JSON-lines emission. Doubles are written in shortest round-trip
// form so identical values always give identical bytes.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

namespace spindyn {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::invalid_argument("CsvWriter: wrong number of columns");
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
    out_ << '\n';
  }

  /// Row whose second column is a label (t,obs_name,value layout).
  void labeled_row(double t, std::string_view label, double value) {
    if (columns_ != 3) throw std::invalid_argument("CsvWriter: labeled rows need three columns");
    out_ << format_double(t) << ',' << label << ',' << format_double(value) << '\n';
  }

 private:
  std::ostream& out_;
  std::size_t columns_;
};

inline void write_json_line(std::ostream& out, const nlohmann::json& j) { out << j.dump() << '\n'; }

/// Worker count for --threads: 0 means all cores.
inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs body(i) for i in [0, n) on up to `threads` workers with a static
/// block partition. body must only write to its own slot.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace spindyn

#endif  // SPINDYN_OUTPUT_HPP
