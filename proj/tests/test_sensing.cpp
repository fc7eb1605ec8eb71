#include <cmath>

#include "bsecg/error.hpp"
#include "bsecg/sensing.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bsecg;

TEST_CASE("gaussian sensing matrix shape and determinism") {
  const auto a = gaussian_sensing_matrix(130, 800, 42);
  CHECK(a.m() == 130);
  CHECK(a.n() == 800);
  CHECK(a.entries == gaussian_sensing_matrix(130, 800, 42).entries);
  CHECK(a.entries != gaussian_sensing_matrix(130, 800, 43).entries);
}

TEST_CASE("gaussian sensing matrix moments") {
  // Oracle: direct sample mean and variance.
  const auto a = gaussian_sensing_matrix(130, 800, 7);
  const double n = static_cast<double>(a.entries.size());
  const double mean = a.entries.sum() / n;
  const double var = (a.entries.array() - mean).square().sum() / (n - 1.0);
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("smaller m is a prefix of larger m") {
  const auto big = gaussian_sensing_matrix(200, 300, 9);
  const auto small = gaussian_sensing_matrix(80, 300, 9);
  CHECK(big.entries.topRows(80) == small.entries);
}

TEST_CASE("sensing matrix argument errors") {
  CHECK_THROWS_AS(gaussian_sensing_matrix(0, 800, 1), Error);
  CHECK_THROWS_AS(gaussian_sensing_matrix(801, 800, 1), Error);
}

TEST_CASE("measurement constant") {
  const double u = 1.0 / (2.0 * std::log(std::sqrt(24.0) + 1.0));
  CHECK(u == doctest::Approx(0.28).epsilon(0.005 / 0.28));
  CHECK(kMeasurementConstant == 0.28);
}

TEST_CASE("min_measurements") {
  // Oracle: the bound evaluated directly with a natural log.
  CHECK(min_measurements(48, 800) == static_cast<Index>(std::ceil(0.28 * 48 * std::log(800.0 / 48))));
  CHECK(min_measurements(48, 800) == 38);
  CHECK(min_measurements(800, 800) == 0);
  for (Index k : {1, 5, 20, 100, 400}) {
    CHECK(min_measurements(k, 800) ==
          static_cast<Index>(std::ceil(0.28 * static_cast<double>(k) *
                                       std::log(800.0 / static_cast<double>(k)))));
  }
  CHECK_THROWS_AS(min_measurements(0, 800), Error);
  CHECK_THROWS_AS(min_measurements(801, 800), Error);
}

TEST_CASE("compress matches a naive product") {
  const auto a = gaussian_sensing_matrix(4, 8, 3);
  const Matrix x = Matrix::Random(8, 2);
  CHECK((compress(x, a) - oracle::naive_multiply(a.entries, x)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(compress(Matrix(Matrix::Zero(8, 2)), a).isZero(0.0));
  CHECK(compress(x, identity_sensing_matrix(8)) == x);
  CHECK_THROWS_AS(compress(Matrix(Matrix::Zero(7, 2)), a), Error);
}
