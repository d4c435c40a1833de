// rng.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Counter-based generator: the value at (seed, stream, index) is a pure
// function, so any subsequence can be regenerated without replaying state.
// The mixing function is the SplitMix64 finalizer.

#ifndef MATPROD_RNG_HPP_
#define MATPROD_RNG_HPP_

#include <cmath>
#include <cstdint>

namespace matprod {

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t at(std::uint64_t index) const {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * (index + 1));
  }
  // Uniform in [0, 1) with 53 random bits.
  double uniform_at(std::uint64_t index) const {
    return static_cast<double>(at(index) >> 11) * 0x1.0p-53;
  }

  std::uint64_t next() { return at(counter_++); }
  double uniform() { return uniform_at(counter_++); }
  // Standard normal by Box-Muller; consumes two counters.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace matprod

#endif  // MATPROD_RNG_HPP_
