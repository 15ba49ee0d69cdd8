#include "cyclecheck/runlog.hpp"

#include "cyclecheck/json_writer.hpp"

namespace cyclecheck {

void RunLog::info(std::string event, std::string detail) {
  entries_.push_back({"info", std::move(event), std::move(detail)});
}

void RunLog::warn(std::string event, std::string detail) {
  entries_.push_back({"warn", std::move(event), std::move(detail)});
  ++warnings_;
}

void RunLog::error(std::string event, std::string detail) {
  entries_.push_back({"error", std::move(event), std::move(detail)});
}

void RunLog::append(const RunLog& other) {
  for (const Entry& e : other.entries_) {
    entries_.push_back(e);
    if (e.level == "warn") ++warnings_;
  }
}

std::string RunLog::to_jsonl() const {
  std::string out;
  std::int64_t seq = 0;
  for (const Entry& e : entries_) {
    JsonWriter w;
    w.begin_object();
    w.key("seq").value(++seq);
    w.key("level").value(e.level);
    w.key("event").value(e.event);
    if (!e.detail.empty()) w.key("detail").value(e.detail);
    w.end_object();
    out += w.str();
    out += '\n';
  }
  return out;
}

}  // namespace cyclecheck
