#include "coarsekit/report.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace coarsekit::report {

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::SkippedHypothesis: return "skipped-hypothesis";
  }
  return "unknown";
}

bool RunReport::all_passed() const {
  return std::none_of(records.begin(), records.end(),
                      [](const CheckRecord& r) { return r.status == Status::Fail; });
}

std::size_t RunReport::count(Status s) const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [s](const CheckRecord& r) { return r.status == s; }));
}

nlohmann::ordered_json report_to_json(const RunReport& r) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& rec : r.records) {
    checks.push_back({{"name", rec.name},
                      {"status", status_name(rec.status)},
                      {"details", rec.details}});
  }
  return {{"command", r.command},
          {"seed", r.seed},
          {"passed", r.all_passed()},
          {"checks", checks}};
}

std::string report_to_text(const RunReport& r) {
  std::ostringstream out;
  out << "# " << r.command << " (seed " << r.seed << ")\n";
  for (const auto& rec : r.records) {
    out << "  [" << status_name(rec.status) << "] " << rec.name;
    if (rec.status == Status::Fail && !rec.details.empty()) {
      out << "\n      witness: " << rec.details.dump();
    }
    out << "\n";
  }
  out << (r.all_passed() ? "OK" : "FAILED") << ": " << r.count(Status::Pass) << " passed, "
      << r.count(Status::Fail) << " failed, " << r.count(Status::SkippedHypothesis)
      << " skipped";
  out << std::fixed << std::setprecision(2) << " (" << r.wall_seconds << "s)\n";
  return out.str();
}

}  // namespace coarsekit::report
