#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bsecg/dictionary.hpp"
#include "bsecg/types.hpp"

namespace bsecg {

enum class PayloadType : std::uint8_t { F64 = 0, F32 = 1 };
enum class SensingKind : std::uint8_t { Gaussian = 0, Identity = 1 };

inline constexpr char kBundleMagic[4] = {'B', 'S', 'E', 'C'};
inline constexpr std::uint16_t kBundleVersion = 1;

/// One compressed beat: the projected data Y plus everything the decoder
/// needs to regenerate the sensing matrix and the dictionary.
///
/// Record layout (little-endian):
///   "BSEC" | version u16 | N, m, M, S u32 | fs f64 | kernel u8 |
///   n_shifts, n_scales u32 | shift_lo, shift_hi, scale_lo, scale_hi f64 |
///   seed u64 | groups u32 | lambda1, lambda2 f64 | payload u8 |
///   sensing u8 | normalize u8 | S x (name length u16, name bytes) |
///   Y column-major, m*S values of the payload type
/// A bundle file is one or more records back to back.
struct CompressedBundle {
  DictionaryParams dictionary;
  std::uint32_t m = 0;
  std::uint64_t seed = 0;
  std::uint32_t groups = 1;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  PayloadType payload = PayloadType::F64;
  SensingKind sensing = SensingKind::Gaussian;
  std::vector<std::string> lead_names;
  Matrix y;  // m x S

  Index n() const { return dictionary.n_samples; }
  Index atoms() const { return dictionary.atom_count(); }
  Index leads() const { return y.cols(); }

  /// Header consistency: dimensions, names, finite values.
  void validate() const;
};

std::string encode_bundles(std::span<const CompressedBundle> bundles);
std::vector<CompressedBundle> decode_bundles(std::string_view bytes);

void write_bundles(const std::string& path,
                   std::span<const CompressedBundle> bundles);
std::vector<CompressedBundle> read_bundles(const std::string& path);

}  // namespace bsecg
