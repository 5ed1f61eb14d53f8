#pragma once

#include <charconv>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <system_error>

namespace loglim {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Shortest text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

inline std::string format_fixed(double x, int digits) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::fixed, digits);
  if (ec != std::errc()) throw std::runtime_error("format_fixed failed");
  return std::string(buf, end);
}

// splitmix64: used to derive independent, reproducible RNG streams per chunk.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Maps 64 random bits to [0, 1) without relying on implementation-defined
// distributions, so results are identical across standard libraries.
inline double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

inline constexpr double kPi = std::numbers::pi;

}  // namespace loglim
