// events.hpp -- structured event log shared by the router, monitor, and
// simulator. One append-only record per admission/denial/credit/violation;
// tests replay it to check conservation, and metrics serialize it verbatim.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sibra/core.hpp"

namespace sibra {

enum class EventKind : std::uint8_t {
  Admit,
  Deny,
  Confirm,
  Sweep,
  Reclaim,
  Expire,
  Renew,
  RenewDeny,
  Forward,
  Drop,
  Debit,
  Credit,
  Violation,
  Blacklist,
  Pushback,
};

const char* event_kind_name(EventKind k);

struct Event {
  double t_ms = 0;
  AsId as = 0;
  EventKind kind = EventKind::Admit;
  FlowId flow{};
  AsId neighbor = 0;
  PathKind partition = PathKind::Steady;
  double kbps = 0;
  std::uint8_t detail = 0;  // drop reason / reservation index, kind-specific

  std::string line() const;  // stable single-line rendering
};

class EventLog {
 public:
  void append(Event e) { events_.push_back(std::move(e)); }
  const std::vector<Event>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  void clear() { events_.clear(); }

  std::string render() const;  // all lines, LF-terminated

 private:
  std::vector<Event> events_;
};

}  // namespace sibra
