#include <atomic>
#include <cstdlib>
#include <string>

#include "qmem/errors.hpp"
#include "qmem/simd.hpp"

namespace qmem::simd {

namespace {

struct Table {
  Isa isa;
  double (*dot)(const double*, const double*, std::size_t);
  double (*dot3)(const double*, const double*, const double*, std::size_t);
  std::pair<double, double> (*dot_pair)(const double*, const double*, const double*, std::size_t);
};

constexpr Table kScalar{Isa::scalar, &scalar::dot, &scalar::dot3, &scalar::dot_pair};
#if defined(QMEM_HAVE_AVX2)
constexpr Table kAvx2{Isa::avx2, &avx2::dot, &avx2::dot3, &avx2::dot_pair};
#endif
#if defined(QMEM_HAVE_NEON)
constexpr Table kNeon{Isa::neon, &neon::dot, &neon::dot3, &neon::dot_pair};
#endif

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(QMEM_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(QMEM_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

const Table* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &kScalar;
#if defined(QMEM_HAVE_AVX2)
    case Isa::avx2:
      return &kAvx2;
#endif
#if defined(QMEM_HAVE_NEON)
    case Isa::neon:
      return &kNeon;
#endif
    default:
      return nullptr;
  }
}

const Table* initial_table() {
  // QMEM_FORCE_SCALAR=1 pins the reference kernels for reproducibility runs.
  if (const char* env = std::getenv("QMEM_FORCE_SCALAR"); env && std::string(env) == "1") return &kScalar;
  for (Isa isa : {Isa::avx2, Isa::neon})
    if (cpu_supports(isa)) return table_for(isa);
  return &kScalar;
}

std::atomic<const Table*>& current() {
  static std::atomic<const Table*> t{initial_table()};
  return t;
}

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw UsageError("simd: operand lengths differ");
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

Isa active_isa() { return current().load()->isa; }

bool isa_available(Isa isa) { return table_for(isa) != nullptr && cpu_supports(isa); }

bool set_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  current().store(table_for(isa));
  return true;
}

double dot(std::span<const double> a, std::span<const double> b) {
  check_sizes(a.size(), b.size());
  return current().load()->dot(a.data(), b.data(), a.size());
}

double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  check_sizes(a.size(), b.size());
  check_sizes(a.size(), c.size());
  return current().load()->dot3(a.data(), b.data(), c.data(), a.size());
}

std::pair<double, double> dot_pair(std::span<const double> u, std::span<const double> v,
                                   std::span<const double> r) {
  check_sizes(u.size(), r.size());
  check_sizes(v.size(), r.size());
  return current().load()->dot_pair(u.data(), v.data(), r.data(), r.size());
}

}  // namespace qmem::simd
