#pragma once

// Little-endian primitives shared by the dataset cache and checkpoint formats.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <type_traits>

#include "kbc/types.hpp"

namespace kbc::detail {

template <typename U>
  requires std::is_unsigned_v<U>
void write_le(std::ostream& out, U value) {
  std::array<char, sizeof(U)> bytes{};
  for (std::size_t b = 0; b < sizeof(U); ++b) bytes[b] = static_cast<char>((value >> (8 * b)) & 0xFFu);
  out.write(bytes.data(), bytes.size());
}

template <typename U>
  requires std::is_unsigned_v<U>
U read_le(std::istream& in) {
  std::array<unsigned char, sizeof(U)> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) throw ParseError("unexpected end of binary file");
  U value = 0;
  for (std::size_t b = 0; b < sizeof(U); ++b) value |= static_cast<U>(bytes[b]) << (8 * b);
  return value;
}

inline void write_le(std::ostream& out, double value) { write_le(out, std::bit_cast<std::uint64_t>(value)); }
inline void write_le(std::ostream& out, float value) { write_le(out, std::bit_cast<std::uint32_t>(value)); }

template <typename F>
  requires std::is_floating_point_v<F>
F read_float_le(std::istream& in) {
  if constexpr (sizeof(F) == 8) {
    return std::bit_cast<double>(read_le<std::uint64_t>(in));
  } else {
    return std::bit_cast<float>(read_le<std::uint32_t>(in));
  }
}

}  // namespace kbc::detail
