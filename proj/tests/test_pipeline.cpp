#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "bsecg/error.hpp"
#include "bsecg/metrics.hpp"
#include "bsecg/pipeline.hpp"
#include "doctest.h"

using namespace bsecg;

namespace {

constexpr Index kR = 70;

// fs 250 Hz, N = 200. The shift window [r - 50, r + 110] has 17 shifts 10
// samples apart, so shift 5 sits on R; 6 scales from 0.02 s.
PipelineConfig small_config() {
  PipelineConfig c;
  c.fs = 250.0;
  c.beat_length = 200;
  c.before_r = 0.2;
  c.after_r = 0.44;
  c.n_shifts = 17;
  c.n_scales = 6;
  c.scale_hi = 0.2;
  c.groups = 17;
  c.cr = 2.0;
  c.coding_report = false;
  return c;
}

// Three leads sharing five atoms of the dictionary built at kR; the
// narrowest atom on R dominates so R detection lands on kR.
MultiLeadSignal planted_beat(const PipelineConfig& c, double lead_mix = 0.0) {
  const Dictionary d = build_dictionary(c.dictionary_for(kR));
  const std::vector<Index> atoms{5 * 6 + 0, 2 * 6 + 3, 9 * 6 + 2, 12 * 6 + 4, 15 * 6 + 1};
  const double weights[3][5] = {{10, 1.0, -0.8, 2.0, 0.6},
                                {8, -0.5, 1.2, 1.5, 0.9},
                                {12, 0.7, 0.4, -1.8, 1.1}};
  Matrix x = Matrix::Zero(c.beat_length, 3);
  for (Index s = 0; s < 3; ++s) {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      x.col(s) += (weights[s][k] + lead_mix) * d.atoms.col(atoms[k]);
    }
  }
  return MultiLeadSignal::make(x, c.fs, {"I", "II", "V1"});
}

MultiLeadSignal tiled(const MultiLeadSignal& beat, int copies) {
  Matrix x(beat.length() * copies, beat.leads());
  for (int k = 0; k < copies; ++k) x.middleRows(k * beat.length(), beat.length()) = beat.samples;
  return MultiLeadSignal::make(x, beat.fs, beat.lead_names);
}

}  // namespace

TEST_CASE("pipeline config validation") {
  PipelineConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.measurements() == 80);
  c.m = 100;
  CHECK_THROWS_AS(c.validate(), Error);
  c.cr.reset();
  CHECK(c.measurements() == 100);
  c.m = 801;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.cr = 0.5;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.groups = 3001;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.lambda1 = -1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.workers = 0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("dictionary window follows the R peak and is clamped") {
  PipelineConfig c;
  auto p = c.dictionary_for(275);
  CHECK(p.shift_lo == 75.0);
  CHECK(p.shift_hi == 725.0);
  p = c.dictionary_for(100);
  CHECK(p.shift_lo == 0.0);
  CHECK(p.shift_hi == 550.0);
  p = c.dictionary_for(600);
  CHECK(p.shift_hi == 799.0);
}

TEST_CASE("method names") {
  const auto m = parse_method("lasso-HS");
  REQUIRE(m);
  CHECK(m->recovery == Recovery::Lasso);
  CHECK(m->kernel == KernelKind::HyperbolicSecant);
  CHECK(m->name() == "lasso-HS");
  CHECK(parse_method("somp-g")->name() == "somp-G");
  CHECK_FALSE(parse_method("ista-RC"));
  CHECK_FALSE(parse_method("omp"));
  CHECK(default_methods().size() >= 5);
}

TEST_CASE("segmentation of single beats and records") {
  const auto c = small_config();
  const auto beat = planted_beat(c);
  auto beats = segment_beats(beat, c);
  REQUIRE(beats.size() == 1);
  CHECK(beats[0].r_index == kR);
  CHECK(beats[0].samples == beat.samples);

  beats = segment_beats(tiled(beat, 3), c);
  REQUIRE(beats.size() == 3);
  for (const auto& b : beats) CHECK(b.samples.rows() == 200);
  CHECK(beats[0].source_r_index == kR);
  CHECK(beats[2].source_r_index == kR + 400);

  // A short record is cut around R and padded to N.
  const auto shorter = MultiLeadSignal::make(Matrix(beat.samples.topRows(190)), c.fs);
  beats = segment_beats(shorter, c);
  REQUIRE(beats.size() == 1);
  CHECK(beats[0].samples.rows() == 200);
}

TEST_CASE("lead normalization round trip") {
  Matrix y(3, 2);
  y << 3, 0, 4, 0, 0, 0;
  Vector scales;
  const Matrix n = normalize_leads(y, scales);
  CHECK(scales(0) == 5.0);
  CHECK(scales(1) == 1.0);
  CHECK(n.col(0).norm() == doctest::Approx(1.0));
  CHECK(n.col(1).isZero(0.0));
}

TEST_CASE("compress and decompress a planted beat") {
  auto c = small_config();
  c.lambda_factor = 1e-4;
  c.coding_report = true;
  const auto beat = planted_beat(c);
  const auto out = compress_signal(beat, c);
  REQUIRE(out.size() == 1);
  const auto& b = out[0].bundle;
  CHECK(b.m == 100);
  CHECK(b.leads() == 3);
  CHECK(b.lead_names == beat.lead_names);
  CHECK(b.lambda1 > 0.0);
  REQUIRE(out[0].coding);
  CHECK(out[0].coding->sparsity_percent.size() == 3);

  const auto rec = decompress_bundle(b);
  CHECK(rec.lead_names == beat.lead_names);
  CHECK(prd(beat.samples, rec.samples) < 1.0);
}

TEST_CASE("identity sensing keeps every sample") {
  auto c = small_config();
  c.identity_sensing = true;
  c.cr = 1.0;
  c.lambda_factor = 1e-4;
  const auto beat = planted_beat(c);
  const auto out = compress_signal(beat, c);
  CHECK(out[0].bundle.m == 200);
  CHECK(out[0].bundle.y == beat.samples);
  CHECK(prd(beat.samples, decompress_bundle(out[0].bundle).samples) < 1.0);

  c.cr = 2.0;
  CHECK_THROWS_AS(compress_signal(beat, c), Error);
}

TEST_CASE("results do not depend on the worker count") {
  auto c = small_config();
  const auto record = tiled(planted_beat(c), 3);
  const auto one = compress_signal(record, c);
  c.workers = 3;
  const auto many = compress_signal(record, c);
  std::vector<CompressedBundle> a, b;
  for (const auto& x : one) a.push_back(x.bundle);
  for (const auto& x : many) b.push_back(x.bundle);
  CHECK(encode_bundles(a) == encode_bundles(b));
  // Beats get distinct sensing seeds.
  CHECK(a[0].seed != a[1].seed);

  const auto r1 = decompress_bundles(a, c.solver, 1);
  const auto r3 = decompress_bundles(a, c.solver, 3);
  CHECK(r1.samples.rows() == 600);
  CHECK(r1.samples == r3.samples);
}

TEST_CASE("float payload stays close to the double payload") {
  auto c = small_config();
  c.payload = PayloadType::F32;
  const auto beat = planted_beat(c);
  const auto f32 = compress_signal(beat, c)[0].bundle;
  c.payload = PayloadType::F64;
  const auto f64 = compress_signal(beat, c)[0].bundle;
  CHECK((f32.y - f64.y).cwiseAbs().maxCoeff() <= 1e-6 * f64.y.cwiseAbs().maxCoeff());
}

TEST_CASE("bench rows and compression trend") {
  auto c = small_config();
  BenchOptions opt;
  opt.pipeline = c;
  opt.crs = {2, 5};
  opt.methods = {*parse_method("chilasso-RC"), *parse_method("omp-RC")};
  const std::vector<std::pair<std::string, MultiLeadSignal>> subjects{
      {"a", planted_beat(c)}, {"b", planted_beat(c, 0.3)}};
  const auto rows = run_bench(subjects, opt);
  REQUIRE(rows.size() == 8);
  CHECK(rows.front().subject == "a");
  CHECK(rows.back().subject == "b");

  std::map<std::pair<std::string, double>, double> prd_sum;
  for (const auto& r : rows) {
    CHECK(r.m == static_cast<Index>(std::lround(200.0 / r.cr)));
    CHECK(std::isfinite(r.prd));
    prd_sum[{r.method, r.cr}] += r.prd;
  }
  CHECK(prd_sum[{"chilasso-RC", 2.0}] <= prd_sum[{"chilasso-RC", 5.0}]);

  const std::string report = format_report(rows);
  CHECK(std::count(report.begin(), report.end(), '\n') == 9);
  CHECK(report.rfind("subject,cr,m,method,reconstruction_error,prd,wdd\n", 0) == 0);
  CHECK(format_report(run_bench(subjects, opt)) == report);
}

TEST_CASE("synthetic beat spec") {
  const auto def = default_synth_spec();
  CHECK(def.lead_scalings.size() == 12);
  CHECK(def.lead_names.front() == "I");
  CHECK(def.waves.size() == 5);
  const auto beat = generate_synthetic_beat(def);
  CHECK(beat.length() == 800);
  CHECK(detect_r_peak(detection_trace(beat), beat.fs) == doctest::Approx(275).epsilon(0.01));

  const auto spec = parse_synth_spec(R"({"leads": 2, "fs": 500, "duration": 0.5,
      "waves": [{"amplitude": 1.0, "center": 0.2, "width": 0.02, "kernel": "g"}],
      "lead_scalings": [1.0, -2.0]})");
  CHECK(spec.fs == 500.0);
  CHECK(spec.lead_names.size() == 2);
  const auto s = generate_synthetic_beat(spec);
  CHECK(s.length() == 250);
  CHECK(s.samples(100, 0) == doctest::Approx(1.0));
  CHECK(s.samples(100, 1) == doctest::Approx(-2.0));

  CHECK_THROWS_AS(parse_synth_spec("[1, 2]"), Error);
  CHECK_THROWS_AS(parse_synth_spec("{not json"), Error);
  CHECK_THROWS_AS(parse_synth_spec(R"({"waves": [{"amplitude": 1}]})"), Error);
  CHECK_THROWS_AS(
      parse_synth_spec(R"({"waves": [{"amplitude": 1, "center": 0.1, "width": 0.01, "kernel": "x"}]})"),
      Error);
}
