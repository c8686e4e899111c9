#include "ifl/base/trace.h"

#include <algorithm>

namespace ifl {

std::vector<Event> Trace::Since(size_t from) const {
  if (from >= events_.size())
    return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(from), events_.end()};
}

std::optional<Event> Trace::FirstBlocking() const {
  auto it = std::find_if(events_.begin(), events_.end(),
                         [](const Event& e) { return e.blocking; });
  if (it == events_.end())
    return std::nullopt;
  return *it;
}

std::vector<Event> Trace::UserVisible() const {
  std::vector<Event> out;
  std::copy_if(events_.begin(), events_.end(), std::back_inserter(out),
               [](const Event& e) { return e.user_visible; });
  return out;
}

bool Trace::Contains(std::string_view kind) const {
  return Count(kind) > 0;
}

size_t Trace::Count(std::string_view kind) const {
  return static_cast<size_t>(
      std::count_if(events_.begin(), events_.end(),
                    [kind](const Event& e) { return e.kind == kind; }));
}

}  // namespace ifl
