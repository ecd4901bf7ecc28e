#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "squeezeamp/report.hpp"

using namespace squeezeamp;
namespace fs = std::filesystem;

namespace {

std::vector<ResultRecord> sample_records() {
  const double inf = std::numeric_limits<double>::infinity();
  return {
      {0.0, 1.0, 0.49871234567891234, 0.0123, 100, 1.5e-7, 0.1},
      {2.0, 1.0, 0.3, 0.01, 100, 0.0, 0.1},
      {0.0, 10.0, 0.1 + 1e-17, 0.0, 1, 3e-9, 0.2},
      {2.0, 10.0, 0.0, 0.0, 1, 0.0, 0.2},
      {0.0, inf, 1.0 / 3.0, 0.0, 1, 0.0, 0.3},
      {2.0, inf, 0.05, 0.0, 1, 0.0, 0.3},
  };
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("squeezeamp_test_" + name);
  fs::remove_all(dir);
  return dir;
}

// Minimal well-formedness check: every element closes in order, attributes are quoted.
bool balanced_xml(const std::string& text, int& polylines) {
  std::vector<std::string> stack;
  polylines = 0;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag[0] == '!') continue;
    if (std::count(tag.begin(), tag.end(), '"') % 2 != 0) return false;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" /"));
    if (name == "polyline") ++polylines;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty();
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("CSV format") {
  const std::string csv = format_csv(sample_records());
  CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.back() == '\n');
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.find(",inf,") != std::string::npos);
}

TEST_CASE("CSV round-trips exactly") {
  const std::vector<ResultRecord> recs = sample_records();
  const std::vector<ResultRecord> back = parse_csv(format_csv(recs));
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].sweep_x == recs[i].sweep_x);
    CHECK(back[i].n_or_lambda == recs[i].n_or_lambda);
    CHECK(back[i].mean_infidelity == recs[i].mean_infidelity);
    CHECK(back[i].stderr_infidelity == recs[i].stderr_infidelity);
    CHECK(back[i].samples == recs[i].samples);
    CHECK(back[i].leakage_max == recs[i].leakage_max);
  }
  CHECK_THROWS_AS(parse_csv("x,y\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\n1,2,3\n"), Error);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\n1,2,abc,4,5,6\n"), Error);
}

TEST_CASE("emitting files") {
  const fs::path dir = scratch_dir("emit");
  fs::create_directories(dir);
  const fs::path csv = dir / "out.csv";
  emit_csv(sample_records(), csv);
  CHECK(slurp(csv) == format_csv(sample_records()));

  const fs::path empty = dir / "empty.csv";
  CHECK_THROWS_AS(emit_csv({}, empty), Error);
  CHECK_FALSE(fs::exists(empty));
  CHECK_THROWS_AS(emit_plot({}, dir / "empty.svg", PlotLabels{}), Error);
  CHECK_FALSE(fs::exists(dir / "empty.svg"));

  CHECK_THROWS_AS(emit_csv(sample_records(), dir / "missing" / "sub" / "x.csv"), Error);
  fs::remove_all(dir);
}

TEST_CASE("SVG structure") {
  PlotLabels labels{"test <plot> & more", "squeezing (dB)", "N", false};
  const std::string svg = render_svg(sample_records(), labels);
  int polylines = 0;
  CHECK(balanced_xml(svg, polylines));
  CHECK(polylines == 3);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("&lt;plot&gt; &amp;") != std::string::npos);
  CHECK(svg.find("stroke-dasharray") != std::string::npos);

  labels.log_x = true;
  std::vector<ResultRecord> r = sample_records();
  for (ResultRecord& x : r) x.sweep_x += 0.001;
  const std::string svg2 = render_svg(r, labels);
  CHECK(balanced_xml(svg2, polylines));
  CHECK(polylines == 3);
}

TEST_CASE("FNV-1a test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  const ExperimentConfig c = default_config(Figure::fig2a);
  ExperimentConfig d = c;
  d.seed = 2;
  CHECK(config_hash(c) == config_hash(c));
  CHECK(config_hash(c) != config_hash(d));
  CHECK(config_hash(c).rfind("fnv1a64:", 0) == 0);
  CHECK(config_hash(c).size() == 8 + 16);
}

TEST_CASE("outputs and manifest") {
  RunResult run;
  run.config = default_config(Figure::fig3b);
  run.config.seed = 77;
  run.records = sample_records();
  run.calibrations.push_back({0, CalibrationResult{0.12, 0.501, 0.0, 0.01, 9}});
  run.wall_seconds = 1.5;

  const fs::path dir = scratch_dir("outputs") / "nested";
  const OutputPaths p = write_outputs(run, dir);
  CHECK(p.csv.filename() == "fig3b.csv");
  CHECK(fs::exists(p.csv));
  CHECK(fs::exists(p.svg));
  CHECK(fs::exists(p.manifest));

  const nlohmann::json m = nlohmann::json::parse(slurp(p.manifest));
  CHECK(m["seed"].get<std::uint64_t>() == 77);
  CHECK(m["config_hash"].get<std::string>() == config_hash(run.config));
  CHECK(m["config"]["figure"] == "fig3b");
  CHECK(m["versions"].contains("squeezeamp"));
  CHECK(m["versions"].contains("eigen"));
  CHECK(m["versions"].contains("compiler"));
  CHECK(m["backend"] == "fock");
  CHECK(m["calibrations"].size() == 1);
  CHECK(m["calibrations"][0]["rate"].get<double>() == 0.12);
  CHECK(m["records"].get<int>() == 6);
  CHECK(m["leakage_max"].get<double>() == 1.5e-7);
  CHECK(m["files"].size() == 2);

  RunResult empty = run;
  empty.records.clear();
  const fs::path dir2 = scratch_dir("outputs_empty");
  CHECK_THROWS_AS(write_outputs(empty, dir2), Error);
  CHECK_FALSE(fs::exists(dir2));
  fs::remove_all(dir.parent_path());
}

}  // TEST_SUITE
