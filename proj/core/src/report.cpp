#include "kolmo/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

namespace kolmo {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::kPass:
      return "pass";
    case Status::kFail:
      return "fail";
    case Status::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

PropertyReport make_report(std::string property, bool ok, double measured, double bound,
                           double tolerance, Witness witness) {
  PropertyReport rep;
  rep.property = std::move(property);
  rep.status = ok ? Status::kPass : Status::kFail;
  rep.measured = measured;
  rep.bound = bound;
  rep.tolerance = tolerance;
  rep.witness = std::move(witness);
  return rep;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), end);
}

std::string format_point(const Point& x, char sep) {
  std::string out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += sep;
    out += format_double(x(i));
  }
  return out;
}

}  // namespace kolmo
