#include "dcqrng/pipeline.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "dcqrng/projection.hpp"

namespace dcqrng {

std::string_view to_string(StreamSource source) noexcept {
  return source == StreamSource::elapsed ? "elapsed" : "counts";
}

StreamSource parse_stream_source(std::string_view text) {
  if (text == "counts") return StreamSource::counts;
  if (text == "elapsed") return StreamSource::elapsed;
  throw std::invalid_argument("unknown stream source '" + std::string(text) + "'");
}

void stream_bytes(RpssEngine& engine, StreamSource source, std::uint32_t modulus,
                  std::size_t n_bytes,
                  const std::function<void(std::span<const std::uint8_t>)>& sink,
                  std::size_t chunk_bytes) {
  BitPacker packer(modulus);
  if (chunk_bytes == 0) chunk_bytes = kDefaultChunkBytes;
  std::vector<std::uint8_t> chunk;
  chunk.reserve(chunk_bytes + 1);
  std::size_t produced = 0;
  while (produced < n_bytes) {
    const std::size_t want = std::min(chunk_bytes, n_bytes - produced);
    chunk.clear();
    while (chunk.size() < want) {
      const RpssCycleRecord rec = engine.next_output();
      const std::uint64_t value = source == StreamSource::counts ? rec.n_p : rec.n_t;
      packer.push(static_cast<std::uint32_t>(project(value, modulus)), chunk);
    }
    sink(chunk);
    produced += chunk.size();
  }
}

std::vector<std::uint8_t> generate_bytes(RpssEngine& engine, StreamSource source,
                                         std::uint32_t modulus, std::size_t n_bytes) {
  std::vector<std::uint8_t> out;
  out.reserve(n_bytes);
  stream_bytes(engine, source, modulus, n_bytes,
               [&](std::span<const std::uint8_t> c) { out.insert(out.end(), c.begin(), c.end()); });
  return out;
}

}  // namespace dcqrng
