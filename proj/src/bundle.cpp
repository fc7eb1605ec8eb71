#include "bsecg/bundle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bsecg/error.hpp"

namespace bsecg {

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

namespace {

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(raw, raw + sizeof(T));
    }
    out_.append(reinterpret_cast<const char*>(raw), sizeof(T));
  }
  void bytes(std::string_view s) { out_.append(s); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(raw, raw + sizeof(T));
    }
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }
  std::string_view bytes(std::size_t n) {
    need(n);
    auto s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      fail(ErrorCode::Format, "bundle truncated: header/payload size mismatch at byte " +
                                  std::to_string(pos_));
    }
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::uint32_t checked_u32(Index v, const char* what) {
  if (v < 0 || v > static_cast<Index>(UINT32_MAX)) {
    fail(ErrorCode::InvalidArgument, std::string(what) + " does not fit in u32");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void CompressedBundle::validate() const {
  if (dictionary.n_samples < 1 || m < 1 ||
      static_cast<Index>(m) > dictionary.n_samples) {
    fail(ErrorCode::Format, "bundle header: need 1 <= m <= N");
  }
  if (y.rows() != static_cast<Index>(m) || y.cols() < 1) {
    fail(ErrorCode::Format, "bundle payload is not m x S");
  }
  if (static_cast<Index>(lead_names.size()) != y.cols()) {
    fail(ErrorCode::Format, "bundle lead names do not match S");
  }
  if (dictionary.n_shifts == 0 || dictionary.n_scales == 0 || groups == 0 ||
      static_cast<Index>(groups) > dictionary.atom_count()) {
    fail(ErrorCode::Format, "bundle header: invalid grid or group count");
  }
  if (sensing == SensingKind::Identity && static_cast<Index>(m) != dictionary.n_samples) {
    fail(ErrorCode::Format, "identity sensing requires m == N");
  }
  if (!(dictionary.fs > 0.0) || !std::isfinite(lambda1) || !std::isfinite(lambda2) ||
      lambda1 < 0.0 || lambda2 < 0.0) {
    fail(ErrorCode::Format, "bundle header: invalid fs or lambda values");
  }
  for (const auto& name : lead_names) {
    if (name.size() > UINT16_MAX) fail(ErrorCode::Format, "lead name too long");
  }
}

std::string encode_bundles(std::span<const CompressedBundle> bundles) {
  Writer w;
  for (const auto& b : bundles) {
    b.validate();
    const auto& d = b.dictionary;
    w.bytes(std::string_view(kBundleMagic, 4));
    w.put<std::uint16_t>(kBundleVersion);
    w.put<std::uint32_t>(checked_u32(d.n_samples, "N"));
    w.put<std::uint32_t>(b.m);
    w.put<std::uint32_t>(checked_u32(d.atom_count(), "M"));
    w.put<std::uint32_t>(checked_u32(b.y.cols(), "S"));
    w.put<double>(d.fs);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(d.kernel));
    w.put<std::uint32_t>(d.n_shifts);
    w.put<std::uint32_t>(d.n_scales);
    w.put<double>(d.shift_lo);
    w.put<double>(d.shift_hi);
    w.put<double>(d.scale_lo);
    w.put<double>(d.scale_hi);
    w.put<std::uint64_t>(b.seed);
    w.put<std::uint32_t>(b.groups);
    w.put<double>(b.lambda1);
    w.put<double>(b.lambda2);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(b.payload));
    w.put<std::uint8_t>(static_cast<std::uint8_t>(b.sensing));
    w.put<std::uint8_t>(d.normalize ? 1 : 0);
    for (const auto& name : b.lead_names) {
      w.put<std::uint16_t>(static_cast<std::uint16_t>(name.size()));
      w.bytes(name);
    }
    for (Index j = 0; j < b.y.cols(); ++j) {
      for (Index i = 0; i < b.y.rows(); ++i) {
        if (b.payload == PayloadType::F32) {
          w.put<float>(static_cast<float>(b.y(i, j)));
        } else {
          w.put<double>(b.y(i, j));
        }
      }
    }
  }
  return w.take();
}

std::vector<CompressedBundle> decode_bundles(std::string_view bytes) {
  Reader r(bytes);
  std::vector<CompressedBundle> out;
  if (r.done()) fail(ErrorCode::Format, "empty bundle file");
  while (!r.done()) {
    if (r.remaining() < 4 || r.bytes(4) != std::string_view(kBundleMagic, 4)) {
      fail(ErrorCode::Format, "bad magic: not a BSEC bundle");
    }
    const auto version = r.get<std::uint16_t>();
    if (version != kBundleVersion) {
      fail(ErrorCode::Format, "unsupported bundle version " + std::to_string(version));
    }
    CompressedBundle b;
    auto& d = b.dictionary;
    d.n_samples = r.get<std::uint32_t>();
    b.m = r.get<std::uint32_t>();
    const auto atoms = r.get<std::uint32_t>();
    const auto leads = r.get<std::uint32_t>();
    d.fs = r.get<double>();
    const auto kernel = r.get<std::uint8_t>();
    if (kernel > static_cast<std::uint8_t>(KernelKind::TruncatedGaussian)) {
      fail(ErrorCode::Format, "unknown kernel id " + std::to_string(kernel));
    }
    d.kernel = static_cast<KernelKind>(kernel);
    d.n_shifts = r.get<std::uint32_t>();
    d.n_scales = r.get<std::uint32_t>();
    d.shift_lo = r.get<double>();
    d.shift_hi = r.get<double>();
    d.scale_lo = r.get<double>();
    d.scale_hi = r.get<double>();
    b.seed = r.get<std::uint64_t>();
    b.groups = r.get<std::uint32_t>();
    b.lambda1 = r.get<double>();
    b.lambda2 = r.get<double>();
    const auto payload = r.get<std::uint8_t>();
    const auto sensing = r.get<std::uint8_t>();
    const auto normalize = r.get<std::uint8_t>();
    if (payload > 1 || sensing > 1 || normalize > 1) {
      fail(ErrorCode::Format, "bundle header: invalid payload/sensing/normalize flag");
    }
    b.payload = static_cast<PayloadType>(payload);
    b.sensing = static_cast<SensingKind>(sensing);
    d.normalize = normalize == 1;
    if (static_cast<Index>(atoms) != d.atom_count()) {
      fail(ErrorCode::Format, "bundle header: M does not equal n_shifts * n_scales");
    }
    if (leads == 0 || b.m == 0) fail(ErrorCode::Format, "bundle header: empty payload");
    for (std::uint32_t s = 0; s < leads; ++s) {
      const auto len = r.get<std::uint16_t>();
      b.lead_names.emplace_back(r.bytes(len));
    }
    const std::size_t width = b.payload == PayloadType::F32 ? 4 : 8;
    const std::size_t count = static_cast<std::size_t>(b.m) * leads;
    if (r.remaining() < count * width) {
      fail(ErrorCode::Format, "bundle truncated: header/payload size mismatch (need " +
                                  std::to_string(count * width) + " payload bytes, have " +
                                  std::to_string(r.remaining()) + ")");
    }
    b.y.resize(b.m, leads);
    for (Index j = 0; j < static_cast<Index>(leads); ++j) {
      for (Index i = 0; i < static_cast<Index>(b.m); ++i) {
        b.y(i, j) = b.payload == PayloadType::F32 ? static_cast<double>(r.get<float>())
                                                  : r.get<double>();
      }
    }
    b.validate();
    out.push_back(std::move(b));
  }
  return out;
}

void write_bundles(const std::string& path,
                   std::span<const CompressedBundle> bundles) {
  const std::string bytes = encode_bundles(bundles);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

std::vector<CompressedBundle> read_bundles(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_bundles(buf.str());
}

}  // namespace bsecg
