#include "hsmap/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "hsmap/error.hpp"
#include "hsmap/profile.hpp"
#include "hsmap/shooting.hpp"
#include "hsmap/spectra.hpp"
#include "hsmap/sturm.hpp"

namespace hsmap {

namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kCommands{"solve", "spectrum", "verify", "scan", "reproduce"};

// Config keys by section; each key is also a --flag.
const std::vector<std::pair<std::string, std::vector<std::string>>> kSections{
    {"problem", {"family", "g", "m0", "m1", "k", "solution"}},
    {"numeric", {"tol", "xmax", "jmax", "amp_min", "amp_max", "grid", "scan"}},
    {"output", {"out", "formats"}},
};

const char* key_help(const std::string& key) {
  static const std::map<std::string, std::string> help{
      {"family", "sphere, so or su3"},
      {"g", "number of distinct principal curvatures (1, 2, 3, 4, 6)"},
      {"m0", "first multiplicity"},
      {"m1", "second multiplicity"},
      {"k", "target datum (l for su3)"},
      {"solution", "identity, linear, a closed-form name, or a profile JSON path"},
      {"tol", "tolerance of the command"},
      {"xmax", "truncation of the compactified chart"},
      {"jmax", "number of eigenvalues"},
      {"amp_min", "lower end of the amplitude scan"},
      {"amp_max", "upper end of the amplitude scan"},
      {"grid", "number of log-spaced scan amplitudes"},
      {"scan", "solve: write the whole family"},
      {"out", "output directory"},
      {"formats", "comma-separated subset of json,csv,svg"},
  };
  return help.at(key).c_str();
}

[[noreturn]] void config_error(const std::string& what) { throw Error(ErrorCode::Config, what); }

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    config_error(key + ": not a number: '" + text + "'");
  return v;
}

int to_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) config_error(key + ": not an integer: '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  config_error(key + ": not a boolean: '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text + ",") {
    if (c == ',' || c == ' ' || c == '\t' || c == '[' || c == ']' || c == '"') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot read config file " + path.string());
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    config_error(path.string() + ": " + e.what());
  }
  std::map<std::string, std::string> values;
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    const std::string section = item.parents.empty() ? "" : item.parents.front();
    const auto it = std::find_if(kSections.begin(), kSections.end(),
                                 [&](const auto& s) { return s.first == section; });
    if (it == kSections.end() || item.parents.size() != 1)
      config_error(path.string() + ": key '" + item.name + "' outside [problem], [numeric], [output]");
    if (std::find(it->second.begin(), it->second.end(), item.name) == it->second.end())
      config_error(path.string() + ": unknown key '" + item.name + "' in [" + section + "]");
    std::string joined;
    for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
    values[item.name] = joined;
  }
  return values;
}

bool is_profile_path(const std::string& solution) {
  return solution.size() > 5 && solution.substr(solution.size() - 5) == ".json";
}

ClosedForm resolve_closed_form(Family family, const std::string& solution) {
  if (solution.empty() || solution == "identity")
    return family == Family::SU3 ? ClosedForm::SU3Identity : ClosedForm::Identity;
  if (solution == "linear") {
    if (family == Family::Sphere) return ClosedForm::LinearOneMinusG;
    if (family == Family::SpecialOrthogonal) return ClosedForm::LinearOneMinusTwoG;
    throw Error(ErrorCode::KindMismatch, "su3 has no linear solution");
  }
  return closed_form_from_string(solution);
}

struct StageError {
  std::string stage;
  Error error;
};

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError{name, e};
  }
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParameterDomain:
    case ErrorCode::Inadmissible:
    case ErrorCode::TangentialUnknown:
    case ErrorCode::KindMismatch:
    case ErrorCode::NoClosedForm:
    case ErrorCode::Precondition:
    case ErrorCode::Config:
    case ErrorCode::Io:
      return kExitConfig;
    default:
      return kExitNumeric;
  }
}

// ---------------------------------------------------------------- writers

class Artifacts {
public:
  Artifacts(const JobConfig& config, std::ostream& out)
      : config_(config), json_config_(to_json(config)), out_(out) {}

  const Json& config() const { return json_config_; }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = config_.output_dir / name;
    write_atomic(path, content);
    out_ << "wrote " << path.string() << '\n';
  }

  void json(const std::string& name, const std::string& key, Json payload) {
    if (config_.wants("json")) write(name, envelope(json_config_, key, std::move(payload)).dump(2) + "\n");
  }

  void plot(const std::string& stem, const std::vector<PlotSeries>& series,
            const PlotLabels& labels, const std::vector<std::string>& columns) {
    if (!config_.wants("svg")) return;
    write(stem + ".svg", svg_plot(series, labels, json_config_));
    write(stem + ".dat", dat_file(series, columns, json_config_));
  }

private:
  const JobConfig& config_;
  Json json_config_;
  std::ostream& out_;
};

PlotSeries profile_series(const SolutionProfile& p, const std::string& name) {
  PlotSeries s{name, {}};
  s.points.reserve(p.samples.size());
  for (const auto& q : p.samples) s.points.emplace_back(q.x, q.r);
  return s;
}

std::string profile_name(const SolutionProfile& p) {
  std::ostringstream s;
  s << "n=" << p.nodal_number << " A=" << std::setprecision(6) << p.shooting_parameter
    << (p.is_linear ? " (linear)" : "");
  return s.str();
}

ShootingOptions shooting_options(const JobConfig& c) {
  ShootingOptions o;
  o.x_start = -c.x_max;
  o.x_end = c.x_max;
  return o;
}

SturmOptions sturm_options(const JobConfig& c) {
  SturmOptions o;
  o.x_max = c.x_max;
  o.x_max_limit = std::max(o.x_max_limit, c.x_max);
  return o;
}

SolutionKind solution_kind(const JobConfig& c) {
  if (is_profile_path(c.solution)) {
    auto profile = std::make_shared<SolutionProfile>(profile_from_json(Json::parse(
        read_file(c.solution), nullptr, true, false)));
    return std::shared_ptr<const SolutionProfile>(std::move(profile));
  }
  return resolve_closed_form(c.problem.family, c.solution);
}

std::vector<SolutionProfile> run_family(const JobConfig& c) {
  return stage("shooting", [&] {
    auto family = find_family(c.problem, {c.amp_min, c.amp_max}, c.grid, c.tol,
                              shooting_options(c));
    if (family.empty())
      throw Error(ErrorCode::NotFound, "no solution found in the amplitude range");
    return family;
  });
}

void print_family(const std::vector<SolutionProfile>& family, std::ostream& out) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%7s %22s %12s %12s %8s\n", "nodal", "amplitude A",
                "bdry defect", "residual", "linear");
  out << buf;
  for (const auto& p : family) {
    std::snprintf(buf, sizeof buf, "%7d %22.15g %12.3e %12.3e %8s\n", p.nodal_number,
                  p.shooting_parameter, p.boundary_defect, p.residual_norm,
                  p.is_linear ? "yes" : "no");
    out << buf;
  }
}

int cmd_solve(const JobConfig& c, std::ostream& out) {
  Artifacts art(c, out);
  auto family = run_family(c);
  if (!c.scan) family.resize(1);
  print_family(family, out);

  Json profiles = Json::array();
  std::vector<PlotSeries> series;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& p = family[i];
    const std::string stem = c.scan ? "profile_" + std::to_string(i) : "profile";
    if (c.wants("csv")) art.write(stem + ".csv", profile_csv(p, art.config()));
    profiles.push_back(to_json(p));
    series.push_back(profile_series(p, profile_name(p)));
  }
  if (c.scan)
    art.json("family.json", "profiles", std::move(profiles));
  else
    art.json("profile.json", "profile", std::move(profiles.front()));
  art.plot(c.scan ? "profiles" : "profile", series,
           {c.problem.label() + " profiles", "x", "r"}, {"x", "r"});
  return kExitOk;
}

int cmd_scan(const JobConfig& c, std::ostream& out) {
  Artifacts art(c, out);
  const auto family = run_family(c);
  print_family(family, out);
  Json listing = Json::array();
  for (const auto& p : family) listing.push_back(to_json(p, false));
  art.json("family.json", "family", std::move(listing));
  if (c.wants("csv")) art.write("family.csv", family_csv(family, art.config()));
  return kExitOk;
}

struct SpectrumJob {
  SolutionKind kind;
  std::optional<AnalyticSpectrum> analytic;
  SpectrumReport report;
};

SpectrumJob compute_spectrum(const JobConfig& c) {
  SpectrumJob job{stage("configuration", [&] { return solution_kind(c); }), std::nullopt, {}};
  if (const auto* cf = std::get_if<ClosedForm>(&job.kind))
    job.analytic = stage("closed form", [&] { return analytic_spectrum(c.problem, *cf); });
  job.report = stage("sturm", [&] {
    return solve_spectrum(c.problem, job.kind, c.j_max, c.tol, sturm_options(c));
  });
  return job;
}

void print_spectrum(const SpectrumJob& job, std::ostream& out) {
  char buf[160];
  out << job.report.label << '\n';
  std::snprintf(buf, sizeof buf, "%4s %22s %22s %6s %10s%s\n", "j", "lambda_x", "lambda_t",
                "zeros", "uncert", job.analytic ? "        lambda_analytic" : "");
  out << buf;
  for (const auto& p : job.report.pairs) {
    std::snprintf(buf, sizeof buf, "%4d %22.15g %22.15g %6d %10.2e", p.j, p.lambda_x, p.lambda_t,
                  p.zero_count, p.uncertainty);
    out << buf;
    if (job.analytic) {
      std::snprintf(buf, sizeof buf, " %22.15g", job.analytic->lambda(p.j));
      out << buf;
    }
    out << '\n';
  }
}

int cmd_spectrum(const JobConfig& c, std::ostream& out) {
  Artifacts art(c, out);
  const SpectrumJob job = compute_spectrum(c);
  print_spectrum(job, out);
  const StabilityVerdict verdict = stability_verdict(job.report);
  out << "verdict: " << to_string(verdict.classification) << " (lambda_1 = "
      << format_number(verdict.lambda_1) << ")\n";

  Json payload = to_json(job.report);
  payload["verdict"] = to_json(verdict);
  if (job.analytic) {
    Json lambdas = Json::array();
    for (const auto& p : job.report.pairs) lambdas.push_back(job.analytic->lambda(p.j));
    payload["analytic"] = {{"solution", to_string(job.analytic->kind)},
                           {"validity", job.analytic->validity},
                           {"lambda", lambdas}};
  }
  art.json("spectrum.json", "spectrum", std::move(payload));
  if (c.wants("csv"))
    art.write("spectrum.csv",
              spectrum_csv(job.report, art.config(), job.analytic ? &*job.analytic : nullptr));

  std::vector<PlotSeries> values{{"numeric", {}}};
  for (const auto& p : job.report.pairs) values[0].points.emplace_back(p.j, p.lambda_x);
  if (job.analytic) {
    values.push_back({"closed form", {}});
    for (const auto& p : job.report.pairs)
      values[1].points.emplace_back(p.j, job.analytic->lambda(p.j));
  }
  art.plot("eigenvalues", values, {job.report.label + " eigenvalues", "j", "lambda_x"},
           {"j", "lambda_x"});

  std::vector<PlotSeries> functions;
  for (const auto& p : job.report.pairs) {
    if (p.j > 5) break;
    PlotSeries s{"xi_" + std::to_string(p.j), {}};
    for (const auto& e : p.eigenfunction) s.points.emplace_back(e.x, e.xi);
    functions.push_back(std::move(s));
  }
  art.plot("eigenfunctions", functions, {job.report.label + " eigenfunctions", "x", "xi"},
           {"x", "xi"});
  return kExitOk;
}

// Oscillation and interlacing checks for spectra without a closed form.
Json property_checks(const SpectrumReport& report, bool* ok) {
  Json checks = Json::array();
  *ok = true;
  std::vector<double> previous;
  for (std::size_t i = 0; i < report.pairs.size(); ++i) {
    const auto& p = report.pairs[i];
    const auto zeros = zeros_of(p.eigenfunction);
    const bool zeros_ok = p.zero_count == p.j - 1;
    const bool order_ok = i == 0 || p.lambda_x > report.pairs[i - 1].lambda_x;
    const bool interlace_ok = i == 0 || interlaces(previous, zeros);
    *ok = *ok && zeros_ok && order_ok && interlace_ok;
    checks.push_back({{"j", p.j},
                      {"zero_count", p.zero_count},
                      {"zero_count_ok", zeros_ok},
                      {"simple_and_ordered", order_ok},
                      {"interlaces_previous", interlace_ok}});
    previous = zeros;
  }
  return checks;
}

int cmd_verify(const JobConfig& c, std::ostream& out) {
  Artifacts art(c, out);
  const SpectrumJob job = compute_spectrum(c);
  if (!job.analytic) {
    bool ok = false;
    Json checks = property_checks(job.report, &ok);
    out << job.report.label << ": no closed form; property checks "
        << (ok ? "passed" : "FAILED") << '\n';
    art.json("verify.json", "verification",
             {{"label", job.report.label}, {"properties", checks}, {"all_pass", ok}});
    return ok ? kExitOk : kExitVerification;
  }
  // The eigenvalues are solved to a hundredth of the comparison tolerance
  // above; the comparison itself uses the configured tol.
  const ComparisonReport cmp =
      stage("verification", [&] { return verify_spectrum(job.report, *job.analytic, c.tol); });
  char buf[160];
  out << cmp.label << '\n';
  std::snprintf(buf, sizeof buf, "%4s %22s %22s %10s %10s %5s\n", "j", "lambda numeric",
                "lambda closed form", "|diff|", "xi diff", "pass");
  out << buf;
  for (const auto& e : cmp.entries) {
    std::snprintf(buf, sizeof buf, "%4d %22.15g %22.15g %10.2e %10.2e %5s\n", e.j,
                  e.lambda_numeric, e.lambda_analytic, e.abs_diff, e.eigenfunction_diff,
                  e.pass ? "yes" : "NO");
    out << buf;
  }
  Json payload = to_json(cmp);
  payload["verdict_analytic"] = to_json(stability_verdict(*job.analytic));
  payload["verdict_numeric"] = to_json(stability_verdict(job.report));
  art.json("verify.json", "verification", std::move(payload));
  out << (cmp.all_pass ? "verification passed" : "verification FAILED") << '\n';
  return cmp.all_pass ? kExitOk : kExitVerification;
}

int cmd_reproduce(const JobConfig& c, std::ostream& out) {
  Artifacts art(c, out);
  ReproductionOptions options;
  options.tol = c.tol;
  options.formula_j_max = c.j_max;
  options.sturm = sturm_options(c);
  const auto rows = stage("reproduction", [&] { return reproduction_table(options); });
  out << reproduction_text(rows);
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.agrees; });
  out << "\n" << rows.size() - failed << " of " << rows.size() << " rows agree\n";
  if (c.wants("csv")) {
    art.write("reproduction.csv", reproduction_csv(rows, art.config()));
    art.write("reproduction.txt", reproduction_text(rows));
  }
  Json list = Json::array();
  for (const auto& r : rows) list.push_back(to_json(r));
  art.json("reproduction.json", "rows", std::move(list));
  return failed == 0 ? kExitOk : kExitVerification;
}

void validate(const JobConfig& c) {
  if (!(c.tol > 0.0 && c.tol < 1.0)) config_error("tol must lie in (0, 1)");
  if (!(c.x_max >= 4.0 && c.x_max <= 40.0)) config_error("xmax must lie in [4, 40]");
  if (c.j_max < 1 || c.j_max > 200) config_error("jmax must lie in [1, 200]");
  if (!(c.amp_min > 0.0 && c.amp_max > c.amp_min)) config_error("need 0 < amp_min < amp_max");
  if (c.grid < 2 || c.grid > 100000) config_error("grid must lie in [2, 100000]");
  if (c.formats.empty()) config_error("formats must not be empty");
  for (const auto& f : c.formats)
    if (f != "json" && f != "csv" && f != "svg")
      config_error("unknown format '" + f + "' (json, csv, svg)");
  if (c.output_dir.empty()) config_error("empty output directory");
}

struct Parsed {
  JobConfig config;
  bool early_exit = false;
  int exit_code = 0;
};

Parsed parse(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivariant harmonic self-maps and their Jacobi spectra"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  std::map<std::string, std::string> flags;
  std::string config_file;
  bool scan_flag = false;
  const std::map<std::string, std::string> descriptions{
      {"solve", "shoot the boundary value problem (--scan: the whole family)"},
      {"spectrum", "Jacobi spectrum of a closed-form or stored solution"},
      {"verify", "compare the numeric spectrum with the closed form"},
      {"scan", "list the solutions found in the amplitude range"},
      {"reproduce", "consolidated reproduction table of the closed forms and stability lists"}};
  for (const auto& name : kCommands) {
    auto* sub = app.add_subcommand(name, descriptions.at(name));
    sub->add_option("--config", config_file, "INI file with [problem], [numeric], [output]");
    for (const auto& [section, keys] : kSections) {
      for (const auto& key : keys) {
        if (key == "scan")
          sub->add_flag("--scan", scan_flag, key_help(key));
        else
          sub->add_option("--" + key, flags[key], key_help(key));
      }
    }
  }

  Parsed result;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    result.early_exit = true;
    result.exit_code = app.exit(e, out, err);
    return result;
  } catch (const CLI::CallForAllHelp& e) {
    result.early_exit = true;
    result.exit_code = app.exit(e, out, err);
    return result;
  } catch (const CLI::CallForVersion& e) {
    result.early_exit = true;
    result.exit_code = app.exit(e, out, err);
    return result;
  } catch (const CLI::ParseError& e) {
    config_error(e.what());
  }

  JobConfig& c = result.config;
  for (const auto* sub : app.get_subcommands()) c.command = sub->get_name();
  const CLI::App* sub = app.get_subcommand(c.command);

  std::map<std::string, std::string> values;
  if (!config_file.empty()) values = read_config_file(config_file);
  for (const auto& [key, value] : flags)
    if (sub->get_option("--" + key)->count() > 0) values[key] = value;
  if (sub->get_option("--scan")->count() > 0) values["scan"] = scan_flag ? "true" : "false";

  const auto has = [&](const char* key) { return values.count(key) > 0; };
  const auto get = [&](const char* key) { return values.at(key); };

  c.solution = has("solution") ? get("solution") : "";
  c.tol = has("tol") ? to_double("tol", get("tol")) : default_tol(c.command);
  if (has("xmax")) c.x_max = to_double("xmax", get("xmax"));
  if (has("jmax")) c.j_max = to_int("jmax", get("jmax"));
  if (has("amp_min")) c.amp_min = to_double("amp_min", get("amp_min"));
  if (has("amp_max")) c.amp_max = to_double("amp_max", get("amp_max"));
  if (has("grid")) c.grid = to_int("grid", get("grid"));
  if (has("scan")) c.scan = to_bool("scan", get("scan"));
  if (has("formats")) c.formats = split_list(get("formats"));
  if (has("out")) {
    c.output_dir = get("out");
  } else if (const char* env = std::getenv(kOutputDirEnv); env && *env) {
    c.output_dir = env;
  } else {
    c.output_dir = kDefaultOutputDir;
  }
  validate(c);

  if (c.command == "reproduce") return result;

  if ((c.command == "spectrum" || c.command == "verify") && is_profile_path(c.solution)) {
    const Json stored = Json::parse(read_file(c.solution), nullptr, false);
    if (stored.is_discarded()) config_error(c.solution + ": not valid JSON");
    c.problem = profile_from_json(stored).spec;
    return result;
  }

  const Family family = family_from_string(has("family") ? get("family") : "sphere");
  const int g = has("g") ? to_int("g", get("g")) : 1;
  const int m0 = has("m0") ? to_int("m0", get("m0")) : 1;
  const int m1 = has("m1") ? to_int("m1", get("m1")) : 1;
  if (c.command == "spectrum" || c.command == "verify") {
    const ClosedForm kind = resolve_closed_form(family, c.solution);
    c.problem = has("k") ? make_problem(family, g, m0, m1, to_int("k", get("k")))
                         : closed_form_problem(family, kind, g, m0, m1);
  } else {
    const int k = has("k") ? to_int("k", get("k")) : (family == Family::SU3 ? 0 : 1);
    c.problem = make_problem(family, g, m0, m1, k);
  }
  return result;
}

}  // namespace

bool JobConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

double default_tol(const std::string& command) {
  if (command == "spectrum") return 1e-9;
  if (command == "verify" || command == "reproduce") return 1e-6;
  return 1e-8;
}

JobConfig parse_job(int argc, const char* const* argv) {
  std::ostringstream out, err;
  Parsed p = parse(argc, argv, out, err);
  if (p.early_exit) config_error("no job: " + out.str() + err.str());
  return p.config;
}

Json to_json(const JobConfig& c) {
  Json j;
  j["command"] = c.command;
  if (c.command != "reproduce") {
    j["problem"] = to_json(c.problem);
    j["problem"]["solution"] = c.solution;
  }
  j["numeric"] = {{"tol", c.tol},         {"xmax", c.x_max},       {"jmax", c.j_max},
                  {"amp_min", c.amp_min}, {"amp_max", c.amp_max}, {"grid", c.grid},
                  {"scan", c.scan}};
  j["output"] = {{"out", c.output_dir.generic_string()}, {"formats", c.formats}};
  j["version"] = kVersion;
  return j;
}

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec || !fs::is_directory(config.output_dir))
      throw Error(ErrorCode::Io, "output directory not writable: " + config.output_dir.string());
    if (config.command == "solve") return cmd_solve(config, out);
    if (config.command == "scan") return cmd_scan(config, out);
    if (config.command == "spectrum") return cmd_spectrum(config, out);
    if (config.command == "verify") return cmd_verify(config, out);
    if (config.command == "reproduce") return cmd_reproduce(config, out);
    throw Error(ErrorCode::Config, "unknown command '" + config.command + "'");
  } catch (const StageError& e) {
    err << "hsmap: " << e.stage << " failed (" << to_string(e.error.code())
        << "): " << e.error.what() << '\n';
    return exit_code_for(e.error.code());
  } catch (const Error& e) {
    err << "hsmap: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Parsed parsed;
  try {
    parsed = parse(argc, argv, out, err);
  } catch (const Error& e) {
    err << "hsmap: configuration error: " << e.what() << '\n';
    return exit_code_for(e.code()) == kExitNumeric ? kExitNumeric : kExitConfig;
  }
  if (parsed.early_exit) return parsed.exit_code;
  return run(parsed.config, out, err);
}

}  // namespace hsmap
