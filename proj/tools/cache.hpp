#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace bohr::cli {

/// Append-only text cache of computed radii, one "n,radius,tol" line per
/// entry. An entry is reused only when its tol is no larger than the one
/// requested.
class ResultCache {
 public:
  struct Entry {
    int n;
    double radius;
    double tol;
  };

  explicit ResultCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (auto e = parse_line(line)) entries_.push_back(*e);
    }
  }

  /// Cached radius for n with the smallest stored tol <= tol.
  std::optional<double> lookup(int n, double tol) const {
    const Entry* best = nullptr;
    for (const auto& e : entries_) {
      if (e.n != n || e.tol > tol) continue;
      if (!best || e.tol < best->tol) best = &e;
    }
    if (!best) return std::nullopt;
    return best->radius;
  }

  void append(int n, double radius, double tol) {
    entries_.push_back({n, radius, tol});
    std::ofstream out(path_, std::ios::app);
    out << format_line({n, radius, tol}) << '\n';
    if (!out) {
      throw std::runtime_error("cache: cannot write " + path_);
    }
  }

  const std::vector<Entry>& entries() const { return entries_; }

  static std::string format_line(const Entry& e) {
    return fmt::format("{},{:.17g},{:.17g}", e.n, e.radius, e.tol);
  }

  static std::optional<Entry> parse_line(const std::string& line) {
    std::istringstream ss(line);
    Entry e{};
    char c1 = 0;
    char c2 = 0;
    if (!(ss >> e.n >> c1 >> e.radius >> c2 >> e.tol) || c1 != ',' || c2 != ',') {
      return std::nullopt;
    }
    return e;
  }

 private:
  std::string path_;
  std::vector<Entry> entries_;
};

}  // namespace bohr::cli
