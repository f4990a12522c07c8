#pragma once

#include <complex>
#include <cstddef>
#include <new>
#include <vector>

namespace sqg {

template <class T, std::size_t Alignment = 64>
struct AlignedAllocator {
  using value_type = T;

  template <class U>
  struct rebind {
    using other = AlignedAllocator<U, Alignment>;
  };

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U, Alignment>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{Alignment}));
  }
  void deallocate(T* p, std::size_t) noexcept { ::operator delete(p, std::align_val_t{Alignment}); }

  template <class U>
  bool operator==(const AlignedAllocator<U, Alignment>&) const noexcept {
    return true;
  }
};

using RealBuffer = std::vector<double, AlignedAllocator<double>>;
using ComplexBuffer = std::vector<std::complex<double>, AlignedAllocator<std::complex<double>>>;

}  // namespace sqg
