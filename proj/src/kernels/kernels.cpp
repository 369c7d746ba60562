#include "hencky/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace hencky::kernels {
namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* lookup(std::string_view name) {
  if (name == "scalar") return &scalar_backend();
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2") return avx2_backend();
#endif
  return nullptr;
}

const Backend* pick_default() {
  if (const char* env = std::getenv("HENCKY_KERNELS")) {
    if (const Backend* b = lookup(env)) return b;
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (const Backend* b = avx2_backend()) return b;
#endif
  return &scalar_backend();
}

}  // namespace

const Backend& active() {
  const Backend* b = g_active.load(std::memory_order_acquire);
  if (!b) {
    b = pick_default();
    g_active.store(b, std::memory_order_release);
  }
  return *b;
}

bool select(std::string_view name) {
  const Backend* b = lookup(name);
  if (!b) return false;
  g_active.store(b, std::memory_order_release);
  return true;
}

}  // namespace hencky::kernels
