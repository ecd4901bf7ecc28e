#include "squeezeamp/report.hpp"

#include <omp.h>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

namespace squeezeamp {

using nlohmann::json;

namespace {

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_short(double x, const char* spec = "%.4g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

double parse_double(std::string_view field, int line) {
  const std::string s(field);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    throw Error("parse_csv: bad number '" + s + "' on line " + std::to_string(line));
  }
  return v;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* kPalette[] = {"#1b6ca8", "#d1495b", "#66a182", "#edae49", "#8d6a9f", "#2e4057", "#00798c", "#000000"};

std::string series_name(double v, const std::string& label) {
  if (std::isinf(v)) return label + " = inf";
  return label + " = " + fmt_short(v, "%g");
}

}  // namespace

std::string format_csv(const std::vector<ResultRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResultRecord& r : records) {
    out += fmt(r.sweep_x) + ',' + fmt(r.n_or_lambda) + ',' + fmt(r.mean_infidelity) + ',' + fmt(r.stderr_infidelity) +
           ',' + std::to_string(r.samples) + ',' + fmt(r.leakage_max) + '\n';
  }
  return out;
}

std::vector<ResultRecord> parse_csv(std::string_view text) {
  std::vector<ResultRecord> out;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line_no == 1) {
      if (line != kCsvHeader) throw Error("parse_csv: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      f.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (f.size() != 6) throw Error("parse_csv: expected 6 fields on line " + std::to_string(line_no));
    ResultRecord r{};
    r.sweep_x = parse_double(f[0], line_no);
    r.n_or_lambda = parse_double(f[1], line_no);
    r.mean_infidelity = parse_double(f[2], line_no);
    r.stderr_infidelity = parse_double(f[3], line_no);
    r.samples = static_cast<int>(parse_double(f[4], line_no));
    r.leakage_max = parse_double(f[5], line_no);
    out.push_back(r);
  }
  if (line_no == 0) throw Error("parse_csv: empty input");
  return out;
}

void emit_csv(const std::vector<ResultRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw Error("emit_csv: no records");
  write_file(path, format_csv(records));
}

PlotLabels plot_labels(const ExperimentConfig& cfg) {
  PlotLabels l;
  const std::string gate = cfg.coupling == CouplingKind::beamsplitter ? "beamsplitter" : "cross-Kerr";
  l.title = std::string(to_string(cfg.figure)) + ": " + gate + ", " + std::string(to_string(cfg.noise)) + " noise";
  if (cfg.sweep == SweepKind::sigma_dt) {
    l.x_label = "sigma * dt";
    l.series_label = "lambda2";
    l.log_x = true;
  } else {
    l.x_label = "squeezing (dB)";
    l.series_label = "N";
    l.log_x = false;
  }
  return l;
}

std::string render_svg(const std::vector<ResultRecord>& records, const PlotLabels& labels) {
  if (records.empty()) throw Error("render_svg: no records");
  constexpr double kW = 720, kH = 480, kL = 80, kR = 170, kT = 40, kB = 60;
  const double pw = kW - kL - kR;
  const double ph = kH - kT - kB;

  double ymin = std::numeric_limits<double>::infinity();
  double ymax = 0.0;
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -std::numeric_limits<double>::infinity();
  for (const ResultRecord& r : records) {
    if (r.mean_infidelity > 0.0) {
      ymin = std::min(ymin, r.mean_infidelity);
      ymax = std::max(ymax, r.mean_infidelity);
    }
    xmin = std::min(xmin, r.sweep_x);
    xmax = std::max(xmax, r.sweep_x);
  }
  if (!std::isfinite(ymin)) {
    ymin = 1e-3;
    ymax = 1.0;
  }
  const double dlo = std::floor(std::log10(ymin));
  const double dhi = std::max(dlo + 1.0, std::ceil(std::log10(ymax)));
  auto tx = [&](double x) {
    if (labels.log_x) {
      const double a = std::log10(xmin), b = std::log10(xmax);
      return kL + (b > a ? (std::log10(x) - a) / (b - a) : 0.5) * pw;
    }
    return kL + (xmax > xmin ? (x - xmin) / (xmax - xmin) : 0.5) * pw;
  };
  auto ty = [&](double y) {
    const double ly = y > 0.0 ? std::clamp(std::log10(y), dlo, dhi) : dlo;
    return kT + (dhi - ly) / (dhi - dlo) * ph;
  };

  std::vector<double> series;
  for (const ResultRecord& r : records) {
    const bool seen = std::any_of(series.begin(), series.end(), [&](double s) {
      return s == r.n_or_lambda || (std::isinf(s) && std::isinf(r.n_or_lambda));
    });
    if (!seen) series.push_back(r.n_or_lambda);
  }

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW
      << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kL + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << xml_escape(labels.title)
      << "</text>\n";
  svg << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(dlo); d <= static_cast<int>(dhi); ++d) {
    const double y = ty(std::pow(10.0, d));
    svg << "<line x1=\"" << kL << "\" y1=\"" << y << "\" x2=\"" << kL + pw << "\" y2=\"" << y
        << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << kL - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  for (int k = 0; k <= 4; ++k) {
    double xv;
    if (labels.log_x) {
      xv = std::pow(10.0, std::log10(xmin) + k * (std::log10(xmax) - std::log10(xmin)) / 4.0);
    } else {
      xv = xmin + k * (xmax - xmin) / 4.0;
    }
    const double x = tx(xv);
    svg << "<text x=\"" << x << "\" y=\"" << kT + ph + 18 << "\" text-anchor=\"middle\">" << fmt_short(xv, "%.3g")
        << "</text>\n";
  }
  svg << "<text x=\"" << kL + pw / 2 << "\" y=\"" << kH - 16 << "\" text-anchor=\"middle\">" << xml_escape(labels.x_label)
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kT + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << kT + ph / 2
      << ")\">1 - F</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % (sizeof kPalette / sizeof kPalette[0])];
    const bool limit = std::isinf(series[s]);
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (limit ? " stroke-dasharray=\"6 3\"" : "") << " points=\"";
    bool first = true;
    for (const ResultRecord& r : records) {
      const bool match = r.n_or_lambda == series[s] || (limit && std::isinf(r.n_or_lambda));
      if (!match) continue;
      svg << (first ? "" : " ") << fmt_short(tx(r.sweep_x), "%.2f") << ',' << fmt_short(ty(r.mean_infidelity), "%.2f");
      first = false;
    }
    svg << "\"/>\n";
    const double ly = kT + 16 + 18 * s;
    svg << "<line x1=\"" << kL + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kL + pw + 36 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << kL + pw + 42 << "\" y=\"" << ly + 4 << "\">"
        << xml_escape(series_name(series[s], labels.series_label)) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void emit_plot(const std::vector<ResultRecord>& records, const std::filesystem::path& path, const PlotLabels& labels) {
  if (records.empty()) throw Error("emit_plot: no records");
  write_file(path, render_svg(records, labels));
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const ExperimentConfig& cfg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a64(config_to_json(cfg))));
  return buf;
}

std::string make_manifest(const RunResult& run, const std::vector<std::string>& files) {
  json j;
  j["config"] = json::parse(config_to_json(run.config));
  j["config_hash"] = config_hash(run.config);
  j["seed"] = run.config.seed;
  j["versions"] = {{"squeezeamp", SQUEEZEAMP_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                   {"openmp", _OPENMP},
                   {"compiler", __VERSION__}};
  j["threads"] = worker_threads();
  j["backend"] = to_string(resolve_backend(run.config.backend, run.config.coupling, run.config.noise));
  json cals = json::array();
  for (const CalibrationEntry& c : run.calibrations) {
    cals.push_back({{"trotter_steps", c.trotter_steps},
                    {"rate", c.result.rate},
                    {"infidelity", c.result.infidelity},
                    {"stderr", c.result.stderr_infidelity},
                    {"tolerance", c.result.tolerance},
                    {"evaluations", c.result.evaluations}});
  }
  j["calibrations"] = cals;
  double leak = 0.0;
  for (const ResultRecord& r : run.records) leak = std::max(leak, r.leakage_max);
  j["records"] = run.records.size();
  j["leakage_max"] = leak;
  j["wall_seconds"] = run.wall_seconds;
  j["files"] = files;
  return j.dump(2) + "\n";
}

OutputPaths write_outputs(const RunResult& run, const std::filesystem::path& dir) {
  if (run.records.empty()) throw Error("write_outputs: no records");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory '" + dir.string() + "': " + ec.message());
  const std::string stem(to_string(run.config.figure));
  OutputPaths p{dir / (stem + ".csv"), dir / (stem + ".svg"), dir / (stem + ".manifest.json")};
  emit_csv(run.records, p.csv);
  emit_plot(run.records, p.svg, plot_labels(run.config));
  write_file(p.manifest,
             make_manifest(run, {p.csv.filename().string(), p.svg.filename().string()}));
  return p;
}

}  // namespace squeezeamp
