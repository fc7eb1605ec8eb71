#include <cmath>
#include <limits>

#include "bsecg/error.hpp"
#include "bsecg/signal.hpp"
#include "doctest.h"

using namespace bsecg;

namespace {

SyntheticBeatSpec single_wave(double amplitude, double center, double width) {
  SyntheticBeatSpec spec;
  spec.waves = {{amplitude, center, width, KernelKind::RaisedCosine}};
  spec.duration = 0.8;
  spec.fs = 1000.0;
  return spec;
}

}  // namespace

TEST_CASE("detect_r_peak finds the unique extremum of either sign") {
  Vector x = Vector::Zero(800);
  x(100) = 1.0;
  CHECK(detect_r_peak(x, 1000.0) == 100);
  x.setZero();
  x(250) = -1.0;
  CHECK(detect_r_peak(x, 1000.0) == 250);
}

TEST_CASE("detect_r_peak ignores offset and global sign") {
  auto spec = single_wave(1.0, 0.3, 0.03);
  spec.waves.push_back({0.3, 0.55, 0.12, KernelKind::RaisedCosine});
  const Vector lead = generate_synthetic_beat(spec).samples.col(0);
  const Index r = detect_r_peak(lead, 1000.0);
  CHECK(detect_r_peak(Vector(lead.array() + 5.0), 1000.0) == r);
  CHECK(detect_r_peak(Vector(-lead), 1000.0) == r);
}

TEST_CASE("detect_r_peak rejects constant and empty signals") {
  CHECK_THROWS_AS(detect_r_peak(Vector::Constant(50, 2.0), 1000.0), Error);
  CHECK_THROWS_AS(detect_r_peak(Vector(), 1000.0), Error);
}

TEST_CASE("generated R wave is detected at its planted center") {
  // Oracle: the planted center in samples; the generator's largest wave.
  auto spec = single_wave(1.2, 0.3, 0.025);
  spec.waves.push_back({0.15, 0.12, 0.09, KernelKind::RaisedCosine});
  spec.waves.push_back({0.3, 0.55, 0.15, KernelKind::RaisedCosine});
  const auto beat = generate_synthetic_beat(spec);
  const Index r = detect_r_peak(beat.samples.col(0), 1000.0);
  CHECK(std::abs(r - 300) <= 2);
}

TEST_CASE("detect_r_peaks finds every beat of a periodic record") {
  SyntheticBeatSpec spec;
  spec.duration = 3.0;
  for (double c : {0.5, 1.3, 2.1}) {
    spec.waves.push_back({1.0, c, 0.03, KernelKind::RaisedCosine});
    spec.waves.push_back({0.25, c + 0.25, 0.14, KernelKind::RaisedCosine});
  }
  const auto sig = generate_synthetic_beat(spec);
  const auto peaks = detect_r_peaks(sig.samples.col(0), sig.fs);
  REQUIRE(peaks.size() == 3);
  std::vector<Index> sorted = peaks;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted[0] == 500);
  CHECK(sorted[1] == 1300);
  CHECK(sorted[2] == 2100);
}

TEST_CASE("extract_beat windows and boundary errors") {
  const auto sig = MultiLeadSignal::make(Matrix::Random(1000, 3), 1000.0);
  const auto beat = extract_beat(sig, 400, 200, 450);
  CHECK(beat.samples.rows() == 650);
  CHECK(beat.r_index == 200);
  CHECK(beat.source_r_index == 400);
  CHECK(beat.samples(0, 1) == sig.samples(200, 1));

  try {
    extract_beat(sig, 100, 200, 450);
    FAIL("expected a boundary error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfRange);
    CHECK(std::string(e.what()).find("-100") != std::string::npos);
  }
  CHECK_THROWS_AS(extract_beat(sig, 800, 200, 450), Error);
}

TEST_CASE("pad_beat mirrors evenly and shifts the R index") {
  BeatWindow w;
  w.samples = Matrix(4, 1);
  w.samples << 1, 2, 3, 4;
  w.r_index = 1;
  const auto padded = pad_beat(w, 8);
  REQUIRE(padded.samples.rows() == 8);
  CHECK(padded.r_index == 3);
  Vector expected(8);
  expected << 2, 1, 1, 2, 3, 4, 4, 3;
  CHECK(padded.samples.col(0).isApprox(expected));
  CHECK_THROWS_AS(pad_beat(w, 3), Error);
}

TEST_CASE("synthetic beat values follow the kernel") {
  SyntheticBeatSpec empty;
  CHECK(generate_synthetic_beat(empty).samples.isZero(0.0));

  const auto beat = generate_synthetic_beat(single_wave(1.0, 0.4, 0.05));
  CHECK(beat.samples(400, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(beat.samples(450, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(beat.samples(425, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("synthetic noise is seeded") {
  auto spec = single_wave(1.0, 0.4, 0.05);
  spec.noise_std = 0.1;
  spec.seed = 17;
  const auto a = generate_synthetic_beat(spec);
  const auto b = generate_synthetic_beat(spec);
  CHECK(a.samples == b.samples);
  spec.seed = 18;
  CHECK(a.samples != generate_synthetic_beat(spec).samples);
}

TEST_CASE("synthetic spec validation") {
  auto spec = single_wave(1.0, 0.4, -0.05);
  CHECK_THROWS_AS(generate_synthetic_beat(spec), Error);
  spec = single_wave(1.0, 0.4, 0.05);
  spec.lead_scalings = {1.0, 2.0};
  spec.wave_gains = Matrix::Ones(3, 1);
  CHECK_THROWS_AS(generate_synthetic_beat(spec), Error);
}

TEST_CASE("add_white_noise hits the requested SNR") {
  // Oracle: direct power ratio of signal to added noise.
  Matrix x(4000, 2);
  for (Index i = 0; i < x.rows(); ++i) {
    x(i, 0) = std::sin(0.01 * static_cast<double>(i));
    x(i, 1) = 3.0 * std::cos(0.003 * static_cast<double>(i));
  }
  const auto sig = MultiLeadSignal::make(x, 1000.0);
  const auto noisy = add_white_noise(sig, 10.0, 5);
  for (Index s = 0; s < 2; ++s) {
    const double ps = x.col(s).squaredNorm();
    const double pn = (noisy.samples.col(s) - x.col(s)).squaredNorm();
    CHECK(10.0 * std::log10(ps / pn) == doctest::Approx(10.0).epsilon(0.02));
  }
  CHECK(add_white_noise(sig, 10.0, 5).samples == noisy.samples);
  CHECK_THROWS_AS(add_white_noise(MultiLeadSignal::make(Matrix::Zero(10, 1), 1000.0), 10, 1),
                  Error);
}

TEST_CASE("add_white_noise variance for a unit-power signal") {
  const auto sig = MultiLeadSignal::make(Matrix::Ones(200000, 1), 1000.0);
  const auto noisy = add_white_noise(sig, 60.0, 3);
  const double var = (noisy.samples - sig.samples).squaredNorm() / 200000.0;
  CHECK(var == doctest::Approx(1e-6).epsilon(0.02));
}

TEST_CASE("snr_db conventions") {
  Matrix x = Matrix::Random(100, 2);
  CHECK(snr_db(x, x) == std::numeric_limits<double>::infinity());
  Matrix n = Matrix::Random(100, 2);
  n *= x.norm() / n.norm();
  CHECK(snr_db(x, Matrix(x + n)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(snr_db(x, Matrix(Matrix::Zero(99, 2))), Error);
}

TEST_CASE("CSV round trip preserves values and names") {
  Matrix x(3, 2);
  x << 0.1, -2.5, 1e-7, 3.0, 123.456, 0.0;
  const auto sig = MultiLeadSignal::make(x, 500.0, {"V1", "aVR"});
  const auto back = parse_csv(format_csv(sig), 500.0);
  CHECK(back.samples == x);
  CHECK(back.lead_names == sig.lead_names);
  CHECK(back.fs == 500.0);
}

TEST_CASE("CSV errors") {
  CHECK_THROWS_AS(parse_csv("a,b\n1,2\n3\n", 1000.0), Error);
  CHECK_THROWS_AS(parse_csv("a,b\n1,x\n", 1000.0), Error);
  CHECK_THROWS_AS(parse_csv("", 1000.0), Error);
  CHECK_THROWS_AS(read_csv("/nonexistent/file.csv", 1000.0), Error);
}
