#include "hsmap/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "hsmap/error.hpp"

namespace hsmap {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                          "#8c564b", "#e377c2", "#17becf", "#7f7f7f", "#bcbd22"};

std::string comment_header(const Json& config) {
  std::ostringstream out;
  out << "# hsmap " << kVersion << "\n";
  out << "# config: " << config.dump() << "\n";
  return out.str();
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Round step for about n ticks over span.
double nice_step(double span, int n) {
  const double raw = span / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r < 1.5 ? 1.0 : (r < 3.0 ? 2.0 : (r < 7.0 ? 5.0 : 10.0));
  return nice * mag;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const ProblemSpec& spec) {
  Json j;
  j["family"] = to_string(spec.family);
  j["g"] = spec.g;
  j["m0"] = spec.m0;
  j["m1"] = spec.m1;
  j["k"] = spec.k;
  j["label"] = spec.label();
  j["length"] = spec.length();
  j["target"] = spec.target();
  return j;
}

ProblemSpec problem_from_json(const Json& j) {
  try {
    return make_problem(family_from_string(j.at("family").get<std::string>()), j.at("g").get<int>(),
                        j.at("m0").get<int>(), j.at("m1").get<int>(), j.at("k").get<int>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed problem: ") + e.what());
  }
}

Json to_json(const SolutionProfile& p, bool with_samples) {
  Json j;
  j["spec"] = to_json(p.spec);
  j["shooting_parameter"] = p.shooting_parameter;
  j["parameter_uncertainty"] = p.parameter_uncertainty;
  j["right_parameter"] = p.right_parameter;
  j["nodal_number"] = p.nodal_number;
  j["boundary_defect"] = p.boundary_defect;
  j["residual_norm"] = p.residual_norm;
  j["target"] = p.target;
  j["kappa_left"] = p.kappa_left;
  j["kappa_right"] = p.kappa_right;
  j["is_linear"] = p.is_linear;
  j["flags"] = p.flags;
  j["sample_count"] = p.samples.size();
  if (with_samples) {
    Json xs = Json::array(), rs = Json::array(), ps = Json::array();
    for (const auto& s : p.samples) {
      xs.push_back(s.x);
      rs.push_back(s.r);
      ps.push_back(s.rprime);
    }
    j["samples"] = {{"x", xs}, {"r", rs}, {"rprime", ps}};
  }
  return j;
}

SolutionProfile profile_from_json(const Json& root) {
  const Json& j = root.contains("profile") ? root.at("profile") : root;
  try {
    SolutionProfile p;
    p.spec = problem_from_json(j.at("spec"));
    p.shooting_parameter = j.at("shooting_parameter").get<double>();
    p.parameter_uncertainty = j.value("parameter_uncertainty", 0.0);
    p.right_parameter = j.value("right_parameter", 0.0);
    p.nodal_number = j.at("nodal_number").get<int>();
    p.boundary_defect = j.at("boundary_defect").get<double>();
    p.residual_norm = j.at("residual_norm").get<double>();
    p.target = j.at("target").get<double>();
    p.kappa_left = j.at("kappa_left").get<double>();
    p.kappa_right = j.at("kappa_right").get<double>();
    p.is_linear = j.value("is_linear", false);
    p.flags = j.value("flags", std::vector<std::string>{});
    const auto& s = j.at("samples");
    const auto xs = s.at("x").get<std::vector<double>>();
    const auto rs = s.at("r").get<std::vector<double>>();
    const auto ps = s.at("rprime").get<std::vector<double>>();
    if (xs.size() != rs.size() || xs.size() != ps.size())
      throw Error(ErrorCode::Config, "profile sample columns differ in length");
    for (std::size_t i = 0; i < xs.size(); ++i) p.samples.push_back({xs[i], rs[i], ps[i]});
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Config, std::string("malformed profile: ") + e.what());
  }
}

Json to_json(const SpectrumReport& r, bool with_eigenfunctions) {
  Json j;
  j["label"] = r.label;
  if (r.spec) j["spec"] = to_json(*r.spec);
  j["solution"] = r.solution;
  j["eigen_scale"] = r.chart.eigen_scale();
  j["weyl_slope"] = r.weyl_slope ? Json(*r.weyl_slope) : Json(nullptr);
  j["weyl_target"] = r.weyl_target;
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json e;
    e["j"] = p.j;
    e["lambda_x"] = p.lambda_x;
    e["lambda_t"] = p.lambda_t;
    e["zero_count"] = p.zero_count;
    e["uncertainty"] = p.uncertainty;
    e["truncation"] = p.truncation;
    if (with_eigenfunctions) {
      Json xs = Json::array(), vs = Json::array();
      for (const auto& s : p.eigenfunction) {
        xs.push_back(s.x);
        vs.push_back(s.xi);
      }
      e["eigenfunction"] = {{"x", xs}, {"xi", vs}};
    }
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Json to_json(const ComparisonReport& r) {
  Json j;
  j["label"] = r.label;
  j["tol"] = r.tol;
  j["eigenfunction_tol"] = r.eigenfunction_tol;
  j["window"] = r.window;
  j["all_pass"] = r.all_pass;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back({{"j", e.j},
                       {"lambda_numeric", e.lambda_numeric},
                       {"lambda_analytic", e.lambda_analytic},
                       {"abs_diff", e.abs_diff},
                       {"rel_diff", e.rel_diff},
                       {"eigenfunction_diff", std::isfinite(e.eigenfunction_diff)
                                                  ? Json(e.eigenfunction_diff)
                                                  : Json(nullptr)},
                       {"pass", e.pass}});
  }
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const StabilityVerdict& v) {
  return {{"lambda_1", v.lambda_1},
          {"classification", to_string(v.classification)},
          {"index", v.index},
          {"tol", v.tol}};
}

Json to_json(const ReproductionRow& r) {
  return {{"section", r.section},
          {"spec", to_json(r.spec)},
          {"solution", to_string(r.kind)},
          {"j_max", r.j_max},
          {"lambda1_analytic", r.lambda1_analytic},
          {"lambda1_numeric",
           std::isfinite(r.lambda1_numeric) ? Json(r.lambda1_numeric) : Json(nullptr)},
          {"max_abs_diff", r.max_abs_diff},
          {"verdict", to_string(r.verdict)},
          {"expected", r.expected},
          {"agrees", r.agrees},
          {"note", r.note}};
}

Json envelope(const Json& config, const std::string& key, Json payload) {
  Json j;
  j["version"] = kVersion;
  j["config"] = config;
  j[key] = std::move(payload);
  return j;
}

std::string profile_csv(const SolutionProfile& p, const Json& config) {
  std::ostringstream out;
  out << comment_header(config);
  out << "# " << p.spec.label() << " nodal_number=" << p.nodal_number
      << " shooting_parameter=" << format_number(p.shooting_parameter) << "\n";
  out << "x,r,rprime\n";
  for (const auto& s : p.samples)
    out << format_number(s.x) << ',' << format_number(s.r) << ',' << format_number(s.rprime)
        << '\n';
  return out.str();
}

std::string spectrum_csv(const SpectrumReport& r, const Json& config,
                         const AnalyticSpectrum* analytic) {
  std::ostringstream out;
  out << comment_header(config);
  out << "# " << r.label << "\n";
  out << "j,lambda_x,lambda_t,zero_count,uncertainty" << (analytic ? ",lambda_analytic" : "")
      << "\n";
  for (const auto& p : r.pairs) {
    out << p.j << ',' << format_number(p.lambda_x) << ',' << format_number(p.lambda_t) << ','
        << p.zero_count << ',' << format_number(p.uncertainty);
    if (analytic) out << ',' << format_number(analytic->lambda(p.j));
    out << '\n';
  }
  return out.str();
}

std::string family_csv(const std::vector<SolutionProfile>& profiles, const Json& config) {
  std::ostringstream out;
  out << comment_header(config);
  out << "nodal_number,shooting_parameter,parameter_uncertainty,boundary_defect,residual_norm,"
         "is_linear\n";
  for (const auto& p : profiles)
    out << p.nodal_number << ',' << format_number(p.shooting_parameter) << ','
        << format_number(p.parameter_uncertainty) << ',' << format_number(p.boundary_defect)
        << ',' << format_number(p.residual_norm) << ',' << (p.is_linear ? "true" : "false")
        << '\n';
  return out.str();
}

std::string reproduction_csv(const std::vector<ReproductionRow>& rows, const Json& config) {
  std::ostringstream out;
  out << comment_header(config);
  out << "section,family,solution,g,m0,m1,k,j_max,lambda1_analytic,lambda1_numeric,max_abs_diff,"
         "verdict,expected,agrees,note\n";
  for (const auto& r : rows)
    out << csv_field(r.section) << ',' << to_string(r.spec.family) << ',' << to_string(r.kind)
        << ',' << r.spec.g << ',' << r.spec.m0 << ',' << r.spec.m1 << ',' << r.spec.k << ','
        << r.j_max << ',' << format_number(r.lambda1_analytic) << ','
        << format_number(r.lambda1_numeric) << ',' << format_number(r.max_abs_diff) << ','
        << to_string(r.verdict) << ',' << r.expected << ',' << (r.agrees ? "true" : "false")
        << ',' << csv_field(r.note) << '\n';
  return out.str();
}

std::string reproduction_text(const std::vector<ReproductionRow>& rows) {
  std::ostringstream out;
  std::string section;
  char buf[256];
  for (const auto& r : rows) {
    if (r.section != section) {
      section = r.section;
      out << "\n" << section << "\n";
      std::snprintf(buf, sizeof buf, "  %-22s %14s %14s %10s %-14s %-9s %s\n", "problem",
                    "lambda1", "lambda1 num", "max|dl|", "verdict", "expected", "ok");
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "  %-22s %14.8f %14.8f %10.2e %-14s %-9s %s%s%s\n",
                  r.spec.label().c_str(), r.lambda1_analytic, r.lambda1_numeric, r.max_abs_diff,
                  to_string(r.verdict), r.expected.c_str(), r.agrees ? "yes" : "NO",
                  r.note.empty() ? "" : "  ", r.note.c_str());
    out << buf;
  }
  return out.str();
}

std::string svg_plot(const std::vector<PlotSeries>& series, const PlotLabels& labels,
                     const Json& config) {
  const double width = 720, height = 480;
  const double left = 70, right = 20, top = 40, bottom = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;
  const auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (width - left - right); };
  const auto py = [&](double y) {
    return top + (ymax - y) / (ymax - ymin) * (height - top - bottom);
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<metadata>hsmap " << kVersion << " " << escape_xml(config.dump()) << "</metadata>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << escape_xml(labels.title) << "</text>\n";

  // Axes and ticks.
  out << "<g stroke=\"#444\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
      << "\" height=\"" << height - top - bottom << "\"/>\n</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">\n";
  const double xs = nice_step(xmax - xmin, 8);
  for (double t = std::ceil(xmin / xs) * xs; t <= xmax + 1e-9 * xs; t += xs) {
    out << "<line x1=\"" << px(t) << "\" y1=\"" << height - bottom << "\" x2=\"" << px(t)
        << "\" y2=\"" << height - bottom + 5 << "\" stroke=\"#444\"/>";
    out << "<text x=\"" << px(t) << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\">" << short_number(std::abs(t) < 1e-12 * xs ? 0.0 : t)
        << "</text>\n";
  }
  const double ys = nice_step(ymax - ymin, 6);
  for (double t = std::ceil(ymin / ys) * ys; t <= ymax + 1e-9 * ys; t += ys) {
    out << "<line x1=\"" << left - 5 << "\" y1=\"" << py(t) << "\" x2=\"" << left << "\" y2=\""
        << py(t) << "\" stroke=\"#444\"/>";
    out << "<text x=\"" << left - 8 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">"
        << short_number(std::abs(t) < 1e-12 * ys ? 0.0 : t) << "</text>\n";
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">" << escape_xml(labels.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << (top + height - bottom) / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << (top + height - bottom) / 2
      << ")\">" << escape_xml(labels.y_label) << "</text>\n</g>\n";

  // Curves, thinned to at most ~2000 points each.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::size_t stride = std::max<std::size_t>(1, s.points.size() / 2000);
    out << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\""
        << kPalette[i % (sizeof kPalette / sizeof *kPalette)] << "\" points=\"";
    for (std::size_t k = 0; k < s.points.size(); k += stride) {
      const auto& [x, y] = s.points[k];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      out << short_number(px(x)) << ',' << short_number(py(y)) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - right - 8 << "\" y=\"" << top + 16 + 14 * static_cast<double>(i)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
        << kPalette[i % (sizeof kPalette / sizeof *kPalette)] << "\">" << escape_xml(s.name)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string dat_file(const std::vector<PlotSeries>& series, const std::vector<std::string>& columns,
                     const Json& config) {
  std::ostringstream out;
  out << comment_header(config);
  out << "#";
  for (const auto& c : columns) out << ' ' << c;
  out << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (i > 0) out << "\n\n";
    out << "# " << series[i].name << '\n';
    for (const auto& [x, y] : series[i].points)
      out << format_number(x) << ' ' << format_number(y) << '\n';
  }
  return out.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + path.parent_path().string());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot rename onto " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hsmap
