#include <cstdio>
#include <filesystem>
#include <string>

#include "bsecg/bundle.hpp"
#include "bsecg/error.hpp"
#include "bsecg/rng.hpp"
#include "doctest.h"

using namespace bsecg;

namespace {

CompressedBundle sample_bundle(std::uint64_t seed, PayloadType payload = PayloadType::F64) {
  CompressedBundle b;
  b.dictionary = DictionaryParams::around_peak(KernelKind::HyperbolicSecant, 10, 4, 100,
                                               250.0, 40);
  b.m = 20;
  b.seed = seed;
  b.groups = 5;
  b.lambda1 = 0.125;
  b.lambda2 = 0.5;
  b.payload = payload;
  b.lead_names = {"I", "aVR", "V6"};
  b.y = Matrix(20, 3);
  Rng rng(seed);
  for (Index i = 0; i < b.y.size(); ++i) {
    b.y(i) = rng.normal();
    if (payload == PayloadType::F32) b.y(i) = static_cast<float>(b.y(i));
  }
  return b;
}

Error expect_error(const std::string& bytes) {
  try {
    decode_bundles(bytes);
  } catch (const Error& e) {
    return e;
  }
  FAIL("decode accepted malformed input");
  return Error(ErrorCode::Format, "");
}

}  // namespace

TEST_CASE("bundle size follows the record layout") {
  const auto b = sample_bundle(1);
  // Fixed header, then (u16 length + bytes) per name, then m*S doubles.
  const std::size_t fixed = 4 + 2 + 4 * 4 + 8 + 1 + 4 * 2 + 8 * 4 + 8 + 4 + 8 * 2 + 3;
  const std::size_t names = (2 + 1) + (2 + 3) + (2 + 2);
  const std::vector<CompressedBundle> one{b};
  CHECK(encode_bundles(one).size() == fixed + names + 20 * 3 * 8);
  const std::vector<CompressedBundle> f32{sample_bundle(1, PayloadType::F32)};
  CHECK(encode_bundles(f32).size() == fixed + names + 20 * 3 * 4);
}

TEST_CASE("bundle round trip is byte-identical") {
  for (auto payload : {PayloadType::F64, PayloadType::F32}) {
    const std::vector<CompressedBundle> in{sample_bundle(3, payload), sample_bundle(4, payload)};
    const std::string bytes = encode_bundles(in);
    const auto out = decode_bundles(bytes);
    REQUIRE(out.size() == 2);
    CHECK(encode_bundles(out) == bytes);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(out[i].y == in[i].y);
      CHECK(out[i].lead_names == in[i].lead_names);
      CHECK(out[i].seed == in[i].seed);
      CHECK(out[i].lambda1 == in[i].lambda1);
      CHECK(out[i].dictionary.kernel == KernelKind::HyperbolicSecant);
      CHECK(out[i].dictionary.shift_lo == in[i].dictionary.shift_lo);
      CHECK(out[i].atoms() == 40);
    }
  }
}

TEST_CASE("bundle file round trip") {
  const auto path = std::filesystem::temp_directory_path() / "bsecg_test_bundle.bin";
  const std::vector<CompressedBundle> in{sample_bundle(9)};
  write_bundles(path.string(), in);
  const auto out = read_bundles(path.string());
  CHECK(encode_bundles(out) == encode_bundles(in));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_bundles(path.string()), Error);
}

TEST_CASE("malformed bundles are rejected") {
  const std::vector<CompressedBundle> in{sample_bundle(5)};
  const std::string bytes = encode_bundles(in);

  const Error truncated = expect_error(bytes.substr(0, bytes.size() - 8));
  CHECK(truncated.code() == ErrorCode::Format);
  CHECK(std::string(truncated.what()).find("size mismatch") != std::string::npos);
  CHECK(expect_error(bytes.substr(0, 30)).code() == ErrorCode::Format);

  std::string magic = bytes;
  magic[0] = 'X';
  CHECK(std::string(expect_error(magic).what()).find("magic") != std::string::npos);

  std::string version = bytes;
  version[4] = 9;
  CHECK(std::string(expect_error(version).what()).find("version") != std::string::npos);

  CHECK(expect_error("").code() == ErrorCode::Format);
  CHECK(expect_error(bytes + "BS").code() == ErrorCode::Format);
}

TEST_CASE("bundle validation") {
  auto b = sample_bundle(2);
  CHECK_NOTHROW(b.validate());
  b.lead_names.pop_back();
  CHECK_THROWS_AS(b.validate(), Error);
  b = sample_bundle(2);
  b.m = 200;
  CHECK_THROWS_AS(b.validate(), Error);
  b = sample_bundle(2);
  b.sensing = SensingKind::Identity;
  CHECK_THROWS_AS(b.validate(), Error);
  b = sample_bundle(2);
  b.lambda1 = -1.0;
  CHECK_THROWS_AS(b.validate(), Error);
  const std::vector<CompressedBundle> bad{b};
  CHECK_THROWS_AS(encode_bundles(bad), Error);
}
