#ifndef RMT_RANDOM_HPP_
#define RMT_RANDOM_HPP_

#include <array>
#include <cstdint>

namespace rmt {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Output is a
// pure function of (counter, key): no state is carried between draws, so any
// entry of any trial can be regenerated independently.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

// Uniform in [0, 1) with 53 random bits.
inline double to_unit_closed_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

// Uniform in (0, 1) on a 52-bit midpoint grid; never returns 0 or 1, so
// log() and negative powers stay finite.
inline double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 32 | lo) >> 12;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Addressable stream for one (master_seed, trial_index) pair.
///
/// The 128-bit counter is laid out as (draw index lo, draw index hi,
/// trial index, slot), the key is the master seed. Streams for different
/// trials therefore never overlap and share no state.
class CounterStream {
 public:
  CounterStream(std::uint64_t master_seed, std::uint32_t trial_index)
      : key_{static_cast<std::uint32_t>(master_seed),
             static_cast<std::uint32_t>(master_seed >> 32)},
        trial_(trial_index) {}

  PhiloxCounter block(std::uint64_t index, std::uint32_t slot) const {
    return philox4x32({static_cast<std::uint32_t>(index),
                       static_cast<std::uint32_t>(index >> 32), trial_, slot},
                      key_);
  }

  // Two open-interval uniforms from one block.
  std::array<double, 2> uniform_pair(std::uint64_t index,
                                     std::uint32_t slot) const {
    const auto b = block(index, slot);
    return {to_unit_open(b[0], b[1]), to_unit_open(b[2], b[3])};
  }

 private:
  PhiloxKey key_;
  std::uint32_t trial_;
};

}  // namespace rmt

#endif  // RMT_RANDOM_HPP_
