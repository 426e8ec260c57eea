#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>

namespace dronesurvey {

// Non-fatal conditions (flat-plane span exceeded, degenerate or empty grids)
// are reported through a process-wide handler. The default writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;

namespace detail {

struct WarningState {
  std::mutex mutex;
  WarningHandler handler = [](std::string_view msg) {
    std::cerr << "warning: " << msg << '\n';
  };
};

inline WarningState& warning_state() {
  static WarningState state;
  return state;
}

}  // namespace detail

inline WarningHandler set_warning_handler(WarningHandler handler) {
  auto& state = detail::warning_state();
  std::lock_guard lock(state.mutex);
  return std::exchange(state.handler, std::move(handler));
}

inline void warn(std::string_view message) {
  auto& state = detail::warning_state();
  std::lock_guard lock(state.mutex);
  if (state.handler) state.handler(message);
}

/// Installs a handler for the lifetime of the guard and restores the previous one.
class ScopedWarningHandler {
 public:
  explicit ScopedWarningHandler(WarningHandler handler)
      : previous_(set_warning_handler(std::move(handler))) {}
  ~ScopedWarningHandler() { set_warning_handler(std::move(previous_)); }

  ScopedWarningHandler(const ScopedWarningHandler&) = delete;
  ScopedWarningHandler& operator=(const ScopedWarningHandler&) = delete;

 private:
  WarningHandler previous_;
};

}  // namespace dronesurvey
