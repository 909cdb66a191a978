#pragma once

// Outcome of checking one inequality instance.

#include <map>
#include <string>
#include <string_view>

namespace dilatrix {

enum class CheckStatus { pass, fail, vacuous, not_applicable };

inline std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::vacuous: return "vacuous";
    case CheckStatus::not_applicable: return "not_applicable";
  }
  return "unknown";
}

/// gap = lhs - rhs, oriented so that a nonnegative gap means the inequality
/// holds; pass iff gap >= -tolerance. Vacuous and not-applicable instances
/// carry gap = 0 and pass = true: the inequality imposes nothing on them.
struct CheckReport {
  std::string check_name;
  std::map<std::string, double> parameters;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  bool pass = true;
  double tolerance = 1e-9;
  std::string anchor;  // which inequality of the theory was evaluated
  CheckStatus status = CheckStatus::pass;
  std::string note;

  /// Sets lhs, rhs, gap and the derived pass/status fields.
  void settle(double left, double right) {
    lhs = left;
    rhs = right;
    gap = left - right;
    pass = gap >= -tolerance;
    status = pass ? CheckStatus::pass : CheckStatus::fail;
  }

  void mark(CheckStatus s, std::string why) {
    status = s;
    note = std::move(why);
    gap = 0.0;
    pass = true;
  }
};

}  // namespace dilatrix
