#include "pmrc/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace pmrc {

namespace {

std::atomic<std::ostream*> g_stream{&std::clog};
std::mutex g_mutex;

}  // namespace

void set_log_stream(std::ostream* out) noexcept { g_stream.store(out); }

void log_info(std::string_view message) {
  std::ostream* out = g_stream.load();
  if (out == nullptr) return;
  std::lock_guard lock(g_mutex);
  *out << "pmrc: " << message << '\n';
}

}  // namespace pmrc
