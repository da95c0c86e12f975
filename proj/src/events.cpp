#include "sibra/events.hpp"

#include <cstdio>

namespace sibra {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::Admit: return "admit";
    case EventKind::Deny: return "deny";
    case EventKind::Confirm: return "confirm";
    case EventKind::Sweep: return "sweep";
    case EventKind::Reclaim: return "reclaim";
    case EventKind::Expire: return "expire";
    case EventKind::Renew: return "renew";
    case EventKind::RenewDeny: return "renew_deny";
    case EventKind::Forward: return "forward";
    case EventKind::Drop: return "drop";
    case EventKind::Debit: return "debit";
    case EventKind::Credit: return "credit";
    case EventKind::Violation: return "violation";
    case EventKind::Blacklist: return "blacklist";
    case EventKind::Pushback: return "pushback";
  }
  return "unknown";
}

std::string Event::line() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.3f as=%u %s flow=%s nbr=%u part=%s kbps=%.6f d=%u",
                t_ms, as, event_kind_name(kind), flow.hex().c_str(), neighbor,
                partition == PathKind::Steady ? "steady" : "eph", kbps, detail);
  return buf;
}

std::string EventLog::render() const {
  std::string out;
  for (const auto& e : events_) {
    out += e.line();
    out += '\n';
  }
  return out;
}

}  // namespace sibra
