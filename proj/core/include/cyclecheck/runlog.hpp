#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cyclecheck {

/// Line-delimited JSON run log. Events carry a monotonic sequence number
/// instead of wall-clock time so reruns are byte-identical.
class RunLog {
 public:
  struct Entry {
    std::string level;
    std::string event;
    std::string detail;
  };

  void info(std::string event, std::string detail = "");
  void warn(std::string event, std::string detail = "");
  void error(std::string event, std::string detail = "");

  /// Appends another log's entries after this one's.
  void append(const RunLog& other);

  const std::vector<Entry>& entries() const { return entries_; }
  /// Renders all entries; sequence numbers are assigned here.
  std::string to_jsonl() const;
  bool has_warnings() const { return warnings_ > 0; }

 private:
  std::vector<Entry> entries_;
  int warnings_ = 0;
};

}  // namespace cyclecheck
