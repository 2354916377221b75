#include "teps/experiments.hpp"
#include "teps/registry.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace teps;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_ini(text, "t.ini");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

const char* kSmall = R"(
[potential]
type = gaussian
V0 = 1
sigma = 2
[basis]
a = 0.05
points = 800
[initial]
k = 1.73
r0 = 12
gamma = 1.5
[detector]
n_i = 2
n_f = 5
[time]
start = 0
stop = 12
step = 1
plateau_window = 3
[scan]
points = 20
shots = 500
seed = 4
)";

}  // namespace

TEST_CASE("strict config parsing with line numbers") {
  CHECK(error_of("[basis]\na = 0.02\nbogus = 1\n") == "t.ini:3: unknown key 'bogus' in [basis]");
  CHECK(error_of("[nowhere]\n").rfind("t.ini:1:", 0) == 0);
  CHECK(error_of("k = 1\n").rfind("t.ini:1:", 0) == 0);
  CHECK(error_of("[time]\nstep = 1\n\nstep = 2\n").rfind("t.ini:4:", 0) == 0);
  CHECK(error_of("[time]\nstep =\n").rfind("t.ini:2:", 0) == 0);
  CHECK(error_of("# comment\n[time] \n; other\nstep = 1 # trailing\n").empty());
}

TEST_CASE("values are type checked where they appear") {
  auto raw = parse_ini("[basis]\npoints = many\n", "t.ini");
  try {
    resolve(raw);
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.source() == "t.ini");
  }
  CHECK_THROWS_AS(resolve(parse_ini("[initial]\nfilter = gaussian\n")), ConfigError);
  CHECK_THROWS_AS(resolve(parse_ini("[detector]\nn_i = 3\n")), ConfigError);
}

TEST_CASE("overrides win over the file and are validated") {
  auto raw = parse_ini("[initial]\nk = 1.0\n", "t.ini");
  apply_override(raw, "initial.k=2.5");
  CHECK(resolve(raw).k == doctest::Approx(2.5));
  CHECK_THROWS_AS(apply_override(raw, "initial.kk=1"), ConfigError);
  CHECK_THROWS_AS(apply_override(raw, "no_dot=1"), ConfigError);
  const auto cfg = load_config("", {"basis.type=bessel", "basis.nk=4"});
  CHECK(cfg.basis.kind == BasisChoice::Kind::Bessel);
  CHECK(cfg.basis.bessel.nk == 4);
}

TEST_CASE("defaults and describe cover the whole schema") {
  const auto cfg = load_config("");
  CHECK(cfg.basis.lattice.points == 6000);
  CHECK(cfg.basis.lattice.a == doctest::Approx(0.02));
  CHECK(cfg.detector.r1 == doctest::Approx(16.44));
  CHECK(cfg.detector.width == doctest::Approx(23.02));
  const auto d = describe(cfg);
  std::size_t keys = 0;
  for (const auto& [section, names] : config_schema()) keys += names.size();
  CHECK(d.size() >= 20);
  CHECK(d.size() <= keys + 2);
}

TEST_CASE("csv carries a metadata header") {
  const auto text = format_csv({{"software", "teps"}, {"a", "1"}}, CsvTable{{"x", "y"}, {{1.0, 0.5}}});
  CHECK(text == "# software = teps\n# a = 1\nx,y\n1,0.5\n");
  CHECK_THROWS(format_csv({}, CsvTable{{"x", "y"}, {{1.0}}}));
}

TEST_CASE("sweep values map onto run parameters") {
  const auto cfg = load_config("");
  const auto fv = with_sweep_value(cfg, "fixed_volume_a", 0.04);
  CHECK(fv.basis.lattice.a * fv.basis.lattice.points == doctest::Approx(120.0));
  CHECK(with_sweep_value(cfg, "r0", 30.0).filter.index() == 0);
  CHECK(std::get<FermiFilter>(with_sweep_value(cfg, "r0", 30.0).filter).r0 == doctest::Approx(30.0));
  CHECK_FALSE(with_sweep_value(cfg, "r1", 0.0).detector.n_i.has_value());
  CHECK_THROWS_AS(with_sweep_value(cfg, "nope", 1.0), std::invalid_argument);
}

TEST_CASE("small runs write CSVs and reruns are bit-identical") {
  const auto cfg = resolve(parse_ini(kSmall, "small"));
  const auto a = run_vteps(cfg);
  const auto b = run_vteps(cfg);
  REQUIRE(a.scans.size() == 13);
  for (std::size_t i = 0; i < a.scans.size(); ++i) CHECK(a.scans[i].P == b.scans[i].P);
  const auto t = run_teps(cfg);
  CHECK(t.series.P.size() == 13);
  auto out = cfg;
  out.out_dir = (std::filesystem::temp_directory_path() / "teps_harness_test").string();
  const auto paths = write_vteps(out, a);
  REQUIRE(paths.size() == 2);
  std::ifstream in(paths[0]);
  std::string first;
  std::getline(in, first);
  CHECK(first == "# software = teps " + software_version());
  std::stringstream all;
  all << in.rdbuf();
  CHECK(all.str().find("# basis.points = 800") != std::string::npos);
  CHECK(all.str().find("\nt,delta_V,P\n") != std::string::npos);
  std::filesystem::remove_all(out.out_dir);
}

TEST_CASE("oracle run and registry bounds") {
  auto cfg = load_config("", {"initial.k=1.73"});
  CHECK(run_oracle(cfg).delta == doctest::Approx(-0.5456).epsilon(2e-4));
  CHECK_THROWS_AS(run_criterion(0), std::out_of_range);
  CHECK_THROWS_AS(run_criterion(kCriterionCount + 1), std::out_of_range);
}

TEST_CASE("emulation emits a parseable circuit") {
  const auto cfg = load_config("", {"basis.type=bessel", "initial.k=0.351", "initial.r0=110", "initial.gamma=20",
                                     "detector.n_i=2", "detector.n_f=6", "time.start=0", "time.stop=100",
                                     "time.step=10", "time.t=600", "scan.points=10"});
  const auto o = run_emulate(cfg);
  CHECK(o.max_abs_diff < 1e-10);
  const auto c = qemu::parse_circuit(o.circuit);
  CHECK(c.n == 4);
  CHECK(c.count(qemu::Gate::Kind::DiagonalPhase) == 1);
}
