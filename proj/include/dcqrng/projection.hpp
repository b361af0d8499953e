#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace dcqrng {

// n mod M. Any M >= 2 is accepted here; only powers of two can be packed.
std::uint64_t project(std::uint64_t n, std::uint64_t modulus);

// log2(M) for M in {2, 4, ..., 256}; throws std::invalid_argument otherwise.
unsigned residue_bits(std::uint32_t modulus);

/// Streaming MSB-first bit packer: the first residue lands in the most
/// significant bits of the first byte. A trailing partial byte is never
/// emitted.
class BitPacker {
 public:
  explicit BitPacker(std::uint32_t modulus);

  // Throws std::out_of_range for residue >= modulus.
  void push(std::uint32_t residue, std::vector<std::uint8_t>& out);

  std::uint32_t modulus() const noexcept { return modulus_; }
  unsigned bits() const noexcept { return bits_; }
  unsigned pending_bits() const noexcept { return fill_; }

 private:
  std::uint32_t modulus_;
  unsigned bits_;
  std::uint32_t acc_ = 0;
  unsigned fill_ = 0;
};

/// Residues of one modulus, produced by projecting raw counts.
class ResidueStream {
 public:
  explicit ResidueStream(std::uint32_t modulus) : modulus_(modulus) {
    if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  }

  void push_count(std::uint64_t n) {
    residues_.push_back(static_cast<std::uint32_t>(project(n, modulus_)));
  }

  std::uint32_t modulus() const noexcept { return modulus_; }
  std::span<const std::uint32_t> residues() const noexcept { return residues_; }
  std::size_t size() const noexcept { return residues_.size(); }

  std::vector<std::uint8_t> pack() const;

 private:
  std::uint32_t modulus_;
  std::vector<std::uint32_t> residues_;
};

// floor(count * b / 8) bytes. Serial reference.
std::vector<std::uint8_t> pack_bytes_serial(std::span<const std::uint32_t> residues,
                                            std::uint32_t modulus);

// Same output as pack_bytes_serial; groups of 8 residues (exactly b bytes)
// are packed in parallel.
std::vector<std::uint8_t> pack_bytes(std::span<const std::uint32_t> residues,
                                     std::uint32_t modulus);

std::vector<std::uint32_t> unpack_bytes(std::span<const std::uint8_t> bytes,
                                        std::uint32_t modulus);

}  // namespace dcqrng
