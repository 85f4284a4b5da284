#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kolmo/types.hpp"

namespace kolmo {

enum class Status { kPass, kFail, kInconclusive };

std::string_view to_string(Status status);

/// Where a check is tightest or violated.
struct Witness {
  Point x;
  double value = 0.0;
  double t = 0.0;
  int node = -1;
  std::string detail;
};

/// One verified statement on simulated data.
struct PropertyReport {
  std::string property;
  Status status = Status::kInconclusive;
  double measured = 0.0;
  double bound = 0.0;
  double tolerance = 0.0;
  std::optional<Witness> witness;
  std::map<std::string, std::string> metadata;
  std::vector<std::string> notes;

  bool passed() const { return status == Status::kPass; }
};

/// Builds a report whose status follows `ok`; a witness is attached in either
/// case so failures always carry one.
PropertyReport make_report(std::string property, bool ok, double measured, double bound,
                           double tolerance, Witness witness);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// "x1,x2" style coordinate string.
std::string format_point(const Point& x, char sep = ',');

}  // namespace kolmo
