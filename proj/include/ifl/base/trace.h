#ifndef IFL_BASE_TRACE_H_
#define IFL_BASE_TRACE_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ifl {

// One append-only trace record. |decision| holds "allow", "deny:<reason>"
// or a short free-form detail depending on |kind|.
struct Event {
  std::string kind;
  std::string actor;
  std::string url;
  std::string decision;
  // The event stopped the attack chain at this point.
  bool blocking = false;
  // Shown to the device user (alerts, confirmation prompts, dialogs).
  bool user_visible = false;

  bool operator==(const Event&) const = default;
};

class Trace {
 public:
  void Record(Event event) { events_.push_back(std::move(event)); }

  const std::vector<Event>& events() const { return events_; }
  size_t size() const { return events_.size(); }

  // Events recorded at index |from| and later.
  std::vector<Event> Since(size_t from) const;
  std::optional<Event> FirstBlocking() const;
  std::vector<Event> UserVisible() const;
  bool Contains(std::string_view kind) const;
  size_t Count(std::string_view kind) const;

 private:
  std::vector<Event> events_;
};

}  // namespace ifl

#endif  // IFL_BASE_TRACE_H_
