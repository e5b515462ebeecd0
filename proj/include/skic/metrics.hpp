#pragma once

#include <zlib.h>

#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "skic/errors.hpp"
#include "skic/lexer.hpp"

namespace skic {

// Token-count reduction 1 - s/p, computed as the single rounded quotient
// (p - s) / p. Negative when the encoding expands.
inline double compression_rate(std::size_t s_tokens, std::size_t p_tokens) {
  if (p_tokens == 0) throw Error("compression rate: original token count is zero");
  const auto diff = static_cast<std::int64_t>(p_tokens) - static_cast<std::int64_t>(s_tokens);
  return static_cast<double>(diff) / static_cast<double>(p_tokens);
}

// Raw DEFLATE (RFC 1951, no zlib/gzip container) at maximum effort.
inline std::vector<unsigned char> deflate_raw(std::span<const unsigned char> data) {
  z_stream zs{};
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 9, Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error("deflateInit2 failed");
  }
  std::vector<unsigned char> out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error("deflate did not finish");
  return out;
}

// Compressed length in bytes: the computable stand-in for Kolmogorov complexity.
inline std::size_t approx_kolmogorov(std::span<const unsigned char> data) {
  if (data.empty()) throw Error("approx_kolmogorov: empty input");
  return deflate_raw(data).size();
}

inline std::size_t approx_kolmogorov(std::string_view text) {
  return approx_kolmogorov(std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

inline constexpr double kDefaultBoundConstant = 16.0;

struct DensityReport {
  std::size_t byte_length = 0;
  std::size_t k_approx = 0;  // compressed bytes
  double rho = 0.0;          // k_approx / byte_length; may exceed 1 (container-free header overhead)
  double bound_slack = 0.0;  // k_approx - (byte_length - c * log2(byte_length))
  double c_constant = kDefaultBoundConstant;
};

inline DensityReport symbolic_density(std::span<const unsigned char> data, double c = kDefaultBoundConstant) {
  if (data.empty()) throw Error("symbolic_density: empty input");
  if (!(c >= 0.0)) throw Error("symbolic_density: c must be nonnegative");
  DensityReport r;
  r.byte_length = data.size();
  r.k_approx = approx_kolmogorov(data);
  r.rho = static_cast<double>(r.k_approx) / static_cast<double>(r.byte_length);
  const double n = static_cast<double>(r.byte_length);
  r.bound_slack = static_cast<double>(r.k_approx) - (n - c * std::log2(n));
  r.c_constant = c;
  return r;
}

inline DensityReport symbolic_density(std::string_view text, double c = kDefaultBoundConstant) {
  return symbolic_density(std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()), c);
}

}  // namespace skic
