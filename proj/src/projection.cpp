#include "dcqrng/projection.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <string>

namespace dcqrng {

std::uint64_t project(std::uint64_t n, std::uint64_t modulus) {
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  return n % modulus;
}

unsigned residue_bits(std::uint32_t modulus) {
  if (modulus < 2 || modulus > 256 || !std::has_single_bit(modulus)) {
    throw std::invalid_argument("packing needs a power-of-two modulus in [2, 256], got " +
                                std::to_string(modulus));
  }
  return static_cast<unsigned>(std::countr_zero(modulus));
}

BitPacker::BitPacker(std::uint32_t modulus) : modulus_(modulus), bits_(residue_bits(modulus)) {}

void BitPacker::push(std::uint32_t residue, std::vector<std::uint8_t>& out) {
  if (residue >= modulus_) {
    throw std::out_of_range("residue " + std::to_string(residue) + " >= modulus " +
                            std::to_string(modulus_));
  }
  acc_ = (acc_ << bits_) | residue;
  fill_ += bits_;
  if (fill_ >= 8) {
    fill_ -= 8;
    out.push_back(static_cast<std::uint8_t>(acc_ >> fill_));
    acc_ &= (1u << fill_) - 1u;
  }
}

std::vector<std::uint8_t> ResidueStream::pack() const { return pack_bytes(residues_, modulus_); }

std::vector<std::uint8_t> pack_bytes_serial(std::span<const std::uint32_t> residues,
                                            std::uint32_t modulus) {
  BitPacker packer(modulus);
  std::vector<std::uint8_t> out;
  out.reserve(residues.size() * packer.bits() / 8);
  for (auto r : residues) packer.push(r, out);
  return out;
}

std::vector<std::uint8_t> pack_bytes(std::span<const std::uint32_t> residues,
                                     std::uint32_t modulus) {
  const unsigned bits = residue_bits(modulus);
  const std::size_t out_len = residues.size() * bits / 8;
  std::vector<std::uint8_t> out(out_len);

  // 8 residues of b bits fill exactly b bytes, so groups are independent.
  const auto groups = static_cast<std::ptrdiff_t>(residues.size() / 8);
  bool bad = false;
#pragma omp parallel for schedule(static) reduction(|| : bad)
  for (std::ptrdiff_t g = 0; g < groups; ++g) {
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      const std::uint32_t r = residues[static_cast<std::size_t>(g) * 8 + i];
      bad = bad || r >= modulus;
      acc = (acc << bits) | (r & (modulus - 1));
    }
    std::uint8_t* dst = out.data() + static_cast<std::size_t>(g) * bits;
    for (unsigned b = 0; b < bits; ++b) {
      dst[b] = static_cast<std::uint8_t>(acc >> (8 * (bits - 1 - b)));
    }
  }
  if (bad) throw std::out_of_range("residue >= modulus " + std::to_string(modulus));

  // Tail: fewer than 8 residues left.
  const std::size_t done = static_cast<std::size_t>(groups) * 8;
  if (done < residues.size()) {
    BitPacker packer(modulus);
    std::vector<std::uint8_t> tail;
    for (std::size_t i = done; i < residues.size(); ++i) packer.push(residues[i], tail);
    std::copy(tail.begin(), tail.end(), out.begin() + static_cast<std::ptrdiff_t>(done / 8 * bits));
  }
  return out;
}

std::vector<std::uint32_t> unpack_bytes(std::span<const std::uint8_t> bytes,
                                        std::uint32_t modulus) {
  const unsigned bits = residue_bits(modulus);
  std::vector<std::uint32_t> out;
  out.reserve(bytes.size() * 8 / bits);
  std::uint32_t acc = 0;
  unsigned fill = 0;
  for (auto byte : bytes) {
    acc = (acc << 8) | byte;
    fill += 8;
    while (fill >= bits) {
      fill -= bits;
      out.push_back((acc >> fill) & (modulus - 1));
    }
    acc &= (1u << fill) - 1u;
  }
  return out;
}

}  // namespace dcqrng
