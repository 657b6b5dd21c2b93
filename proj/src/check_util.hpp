#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "issv/young.hpp"
#include "numeric.hpp"

namespace issv::detail {

// Items are handed out by reference, so capacity is reserved up front.
struct Recorder {
  CheckReport report;
  Recorder() { report.items.reserve(16); }

  CheckItem& add(const std::string& name, double tol, bool equality_for_power) {
    report.items.push_back(CheckItem{name, 0, std::numeric_limits<double>::infinity(), tol, equality_for_power});
    return report.items.back();
  }
  static void record(CheckItem& item, double lhs, double rhs) {
    item.samples++;
    item.worst_slack = std::min(item.worst_slack, detail::rel_slack(lhs, rhs));
  }
  static void record_scaled(CheckItem& item, double lhs, double rhs, double scale) {
    item.samples++;
    item.worst_slack = std::min(item.worst_slack, (rhs - lhs) / scale);
  }
  static void record_equal(CheckItem& item, double a, double b) {
    item.samples++;
    item.worst_slack = std::min(item.worst_slack, -std::abs(detail::rel_slack(a, b)));
  }
};

}  // namespace issv::detail
