#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <sstream>

#include "hsmap/io.hpp"
#include "hsmap/spectra.hpp"

using namespace hsmap;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

SolutionProfile toy_profile() {
  SolutionProfile p;
  p.spec = make_problem(Family::Sphere, 2, 3, 5, 1);
  for (int i = 0; i <= 20; ++i) {
    const double x = -5.0 + 0.5 * i;
    p.samples.push_back({x, std::atan(std::exp(x)), 0.5 / std::cosh(x)});
  }
  p.shooting_parameter = 1.0 / 3.0;
  p.parameter_uncertainty = 1e-12;
  p.nodal_number = 1;
  p.target = 1.5707963267948966;
  p.kappa_left = 1.5;
  p.kappa_right = -2.5;
  p.is_linear = true;
  p.flags = {"demo"};
  return p;
}

}  // namespace

TEST_CASE("io: numbers round-trip") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_number(v)) == v);
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("io: profile JSON round trip") {
  const auto p = toy_profile();
  const auto j = to_json(p);
  const auto q = profile_from_json(Json::parse(j.dump()));
  CHECK(q.spec == p.spec);
  REQUIRE(q.samples.size() == p.samples.size());
  for (std::size_t i = 0; i < p.samples.size(); ++i) {
    CHECK(q.samples[i].x == p.samples[i].x);
    CHECK(q.samples[i].r == p.samples[i].r);
    CHECK(q.samples[i].rprime == p.samples[i].rprime);
  }
  CHECK(q.shooting_parameter == p.shooting_parameter);
  CHECK(q.nodal_number == 1);
  CHECK(q.is_linear);
  // Accepted inside an artifact envelope too.
  const auto wrapped = envelope(Json::object(), "profile", j);
  CHECK(profile_from_json(wrapped).samples.size() == p.samples.size());
  CHECK(wrapped["version"] == kVersion);

  CHECK_THROWS_AS(profile_from_json(Json::parse(R"({"spec": 3})")), Error);
}

TEST_CASE("io: problem JSON round trip") {
  const auto s = make_problem(Family::SpecialOrthogonal, 2, 1, 1, 1);
  CHECK(problem_from_json(to_json(s)) == s);
  CHECK_THROWS_AS(problem_from_json(Json::parse(R"({"family": "torus"})")), Error);
}

TEST_CASE("io: spectrum CSV") {
  const auto spec = closed_form_problem(Family::Sphere, ClosedForm::Identity, 2, 2, 2);
  const auto rep = solve_spectrum(spec, ClosedForm::Identity, 4, 1e-9);
  const auto analytic = analytic_spectrum(spec, ClosedForm::Identity);
  const Json config = {{"command", "spectrum"}};
  const auto csv = spectrum_csv(rep, config, &analytic);
  const auto lines = lines_of(csv);
  REQUIRE(lines.size() == 4 + 4);
  CHECK(lines[0].rfind("# hsmap ", 0) == 0);
  CHECK(lines[1].rfind("# config: ", 0) == 0);
  CHECK(lines[2].rfind("# ", 0) == 0);
  CHECK(lines[3] == "j,lambda_x,lambda_t,zero_count,uncertainty,lambda_analytic");
  CHECK(lines[4].rfind("1,", 0) == 0);
  // Deterministic.
  CHECK(spectrum_csv(solve_spectrum(spec, ClosedForm::Identity, 4, 1e-9), config, &analytic) == csv);
  CHECK(lines_of(spectrum_csv(rep, config))[3] == "j,lambda_x,lambda_t,zero_count,uncertainty");
}

TEST_CASE("io: plots") {
  PlotSeries s{"sech", {}};
  for (int i = 0; i <= 10000; ++i) s.points.push_back({-5.0 + 1e-3 * i, 1.0 / std::cosh(-5.0 + 1e-3 * i)});
  const auto svg = svg_plot({s}, {"t", "x", "y"}, Json{{"k", 1}});
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<metadata>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);

  const auto dat = dat_file({s, s}, {"x", "y"}, Json::object());
  CHECK(dat.find("\n\n\n") != std::string::npos);
}

TEST_CASE("io: atomic write") {
  const fs::path dir = fs::temp_directory_path() / "hsmap_io_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto path = dir / "a.txt";
  write_atomic(path, "first");
  write_atomic(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  CHECK_THROWS_AS(read_file(dir / "missing"), Error);
  write_atomic(dir / "new" / "b.txt", "x");  // parents are created
  CHECK(read_file(dir / "new" / "b.txt") == "x");
  CHECK_THROWS_AS(write_atomic(path / "c.txt", "x"), Error);  // parent is a file
  fs::remove_all(dir);
}
