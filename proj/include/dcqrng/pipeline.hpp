#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "dcqrng/rpss.hpp"

namespace dcqrng {

// Which engine observable feeds the projection: Poisson counts n_p or
// elapsed ticks n_t.
enum class StreamSource { counts, elapsed };

std::string_view to_string(StreamSource source) noexcept;
StreamSource parse_stream_source(std::string_view text);

inline constexpr std::size_t kDefaultChunkBytes = std::size_t{1} << 20;

/// Runs `engine` (engine -> mod M -> MSB-first packing) until exactly
/// `n_bytes` bytes have been handed to `sink`, in chunks of at most
/// `chunk_bytes`. Throws std::invalid_argument for a non-packable modulus.
void stream_bytes(RpssEngine& engine, StreamSource source, std::uint32_t modulus,
                  std::size_t n_bytes,
                  const std::function<void(std::span<const std::uint8_t>)>& sink,
                  std::size_t chunk_bytes = kDefaultChunkBytes);

std::vector<std::uint8_t> generate_bytes(RpssEngine& engine, StreamSource source,
                                         std::uint32_t modulus, std::size_t n_bytes);

}  // namespace dcqrng
