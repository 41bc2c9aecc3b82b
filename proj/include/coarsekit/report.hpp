#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace coarsekit::report {

/// skipped-hypothesis marks a check whose hypothesis did not hold on the
/// instance, so the conclusion was never tested; it does not count against
/// the run.
enum class Status { Pass, Fail, SkippedHypothesis };

std::string status_name(Status s);

struct CheckRecord {
  std::string name;
  Status status = Status::Pass;
  /// Witness payload and numeric extremes. Failing records always carry a
  /// witness that replays the violation through the named operation.
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct RunReport {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> records;
  /// Shown in the text rendering only. The JSON rendering omits wall time so
  /// reports from a fixed seed are byte-identical across runs and machines.
  double wall_seconds = 0.0;

  void add(CheckRecord r) { records.push_back(std::move(r)); }
  bool all_passed() const;
  std::size_t count(Status s) const;
};

nlohmann::ordered_json report_to_json(const RunReport& r);
std::string report_to_text(const RunReport& r);

}  // namespace coarsekit::report
