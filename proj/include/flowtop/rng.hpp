#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace flowtop {

// Philox4x32-10 counter-based generator. Any (counter, key) pair maps to four
// independent 32-bit words, so parallel consumers can draw variates keyed by
// (seed, trial, step, coordinate) in any order and still agree bit for bit.
inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = uint64_t{0xD2511F53u} * ctr[0];
    const uint64_t p1 = uint64_t{0xCD9E8D57u} * ctr[2];
    const uint32_t hi0 = uint32_t(p0 >> 32), lo0 = uint32_t(p0);
    const uint32_t hi1 = uint32_t(p1 >> 32), lo1 = uint32_t(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
  }
  return ctr;
}

// Uniform double in (0, 1] built from 64 random bits; never returns 0, so it
// is safe under a logarithm.
inline double uniform_open_closed(uint32_t a, uint32_t b) {
  const uint64_t bits = (uint64_t(a) << 32) | uint64_t(b);
  return double((bits >> 11) + 1) * 0x1.0p-53;
}

// One standard normal per (seed, trial, step, coordinate). Box-Muller on two
// uniforms taken from a single Philox block.
inline double standard_normal(uint64_t seed, uint64_t trial, uint64_t step,
                              uint64_t coordinate) {
  const std::array<uint32_t, 4> ctr = {
      uint32_t(trial), uint32_t(trial >> 32),
      uint32_t(step), uint32_t(coordinate)};
  const std::array<uint32_t, 2> key = {uint32_t(seed), uint32_t(seed >> 32)};
  const auto w = philox4x32(ctr, key);
  const double u1 = uniform_open_closed(w[0], w[1]);
  const double u2 = uniform_open_closed(w[2], w[3]);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

// Derives an independent sub-seed for a named stream (measure estimation,
// shrink probing, the fresh certification ensemble, ...) so that different
// phases of an experiment never share noise.
inline uint64_t derive_seed(uint64_t master, uint64_t stream) {
  const std::array<uint32_t, 4> ctr = {
      uint32_t(stream), uint32_t(stream >> 32), 0x5eedba5eu, 0x0f10f10fu};
  const std::array<uint32_t, 2> key = {uint32_t(master), uint32_t(master >> 32)};
  const auto w = philox4x32(ctr, key);
  return (uint64_t(w[0]) << 32) | uint64_t(w[1]);
}

}  // namespace flowtop
