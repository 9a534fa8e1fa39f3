#include <atomic>
#include <cstdlib>
#include <string>

#include "qcle/simd.hpp"

namespace qcle::simd {
namespace {

Isa detect() {
  if (const char* env = std::getenv("QCLE_SIMD")) {
    if (std::string(env) == "scalar") return Isa::scalar;
  }
  return (avx2_kernels() != nullptr && cpu_has_avx2()) ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) {
  if (isa == Isa::avx2 && (avx2_kernels() == nullptr || !cpu_has_avx2())) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const KernelTable& kernels() {
  return active_isa() == Isa::avx2 ? *avx2_kernels() : scalar_kernels();
}

}  // namespace qcle::simd
