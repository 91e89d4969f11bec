#pragma once

// Deterministic sampler for environment data. SplitMix64 keeps runs
// bit-reproducible across platforms; values are small rationals so exact
// coefficient growth through the tower stays manageable.

#include <cstdint>

#include "cmch/scalar.hpp"

namespace cmch {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  long small_int(long lo, long hi) {  // inclusive
    return lo + long(next_below(std::uint64_t(hi - lo + 1)));
  }

  // Small nonzero rational p/q, |p| <= 3, 1 <= q <= 3.
  template <class K>
  K nonzero_rat() {
    long p = 0;
    while (p == 0) p = small_int(-3, 3);
    long q = small_int(1, 3);
    return ScalarOps<K>::frac(p, q);
  }

  // Small Gaussian rational with nonzero real and imaginary parts kept
  // generic (either part may vanish, not both).
  template <class K>
  K gauss() {
    long pr = small_int(-3, 3), pi = small_int(-3, 3);
    if (pr == 0 && pi == 0) pr = 1;
    long q = small_int(1, 3);
    K re = ScalarOps<K>::frac(pr, q);
    K im = ScalarOps<K>::frac(pi, q);
    return re + ScalarOps<K>::i() * im;
  }

  template <class K>
  K nonzero_gauss() {
    K v = gauss<K>();
    while (ScalarOps<K>::is_zero(v)) v = gauss<K>();
    return v;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cmch
