#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "hmh/harness.hpp"
#include "hmh/oracles.hpp"
#include "hmh/rng.hpp"

using namespace hmh;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hmh_unit_" + name)).string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

bool mentions(const ConfigError& e, const std::string& field) {
  for (const auto& p : e.problems())
    if (p.rfind(field, 0) == 0) return true;
  return false;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("splitmix64 reference outputs") {
    SplitMix64 rng(1234567);
    CHECK(rng.next() == 6457827717110365317ULL);
    CHECK(rng.next() == 3203168211198807973ULL);
    CHECK(rng.next() == 9817491932198370423ULL);
  }

  TEST_CASE("rng ranges") {
    SplitMix64 rng(1);
    double mean = 0.0;
    for (int i = 0; i < 20000; ++i) {
      const double u = rng.uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      const int k = rng.integer(-2, 3);
      CHECK(k >= -2);
      CHECK(k <= 3);
      mean += rng.normal();
    }
    CHECK(std::abs(mean / 20000) < 0.05);
  }

  TEST_CASE("config json round trip") {
    RunConfig c;
    c.n = 2;
    c.d = 2;
    c.H = {0.1, -0.2};
    c.seed = 99;
    c.tol.poisson = 3e-4;
    c.quad.heat = 44;
    const auto back = RunConfig::from_json(json::parse(c.to_json().dump()));
    CHECK(back.to_json() == c.to_json());
    CHECK_NOTHROW(back.validate());
  }

  TEST_CASE("missing keys keep defaults") {
    const auto c = RunConfig::from_json(json::parse(R"({"seed": 7})"));
    CHECK(c.seed == 7);
    CHECK(c.M_trunc == RunConfig{}.M_trunc);
  }

  TEST_CASE("validation names each bad field") {
    RunConfig c;
    c.n = 0;
    c.t = -1.0;
    c.H = {};
    c.tol.heat = 0.0;
    try {
      c.validate();
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(mentions(e, "n:"));
      CHECK(mentions(e, "t:"));
      CHECK(mentions(e, "H:"));
      CHECK(mentions(e, "tolerances.heat"));
    }
  }

  TEST_CASE("unknown and mistyped keys are rejected") {
    try {
      RunConfig::from_json(json::parse(R"({"lamda_nodes": 3, "quad": {"gramm": 4}, "t": "x"})"));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(mentions(e, "lamda_nodes"));
      CHECK(mentions(e, "quad.gramm"));
      CHECK(mentions(e, "t:"));
    }
    CHECK_THROWS_AS(RunConfig::from_json(json::array()), ConfigError);
  }

  TEST_CASE("config file loading") {
    const auto path = temp_path("config.json");
    write_text(path, R"({"seed": 5, "t": 0.25})");
    const auto c = load_config_file(path);
    CHECK(c.seed == 5);
    CHECK(c.t == 0.25);
    write_text(path, "{ not json");
    CHECK_THROWS_AS(load_config_file(path), ConfigError);
    CHECK_THROWS_AS(load_config_file(temp_path("does_not_exist.json")), ConfigError);
    std::filesystem::remove(path);
  }

  TEST_CASE("shipped example config equals the defaults") {
    const auto dir = std::filesystem::path(RunConfig{}.resolved_golden_path()).parent_path();
    const auto c = load_config_file((dir / "default_config.json").string());
    CHECK(c.to_json() == RunConfig{}.to_json());
  }

  TEST_CASE("HMH_CONFIG selects the default config") {
    const auto path = temp_path("env_config.json");
    write_text(path, R"({"random_slices": 2})");
    setenv("HMH_CONFIG", path.c_str(), 1);
    CHECK(load_default_config().random_slices == 2);
    unsetenv("HMH_CONFIG");
    CHECK(load_default_config().random_slices == RunConfig{}.random_slices);
    std::filesystem::remove(path);
  }

  TEST_CASE("suite names") {
    for (auto s : {Suite::Orthonormality, Suite::Heat, Suite::Bergman, Suite::Gutzmer, Suite::Poisson,
                   Suite::Plancherel, Suite::PaleyWiener, Suite::All})
      CHECK(parse_suite(to_string(s)) == s);
    CHECK_THROWS_AS(parse_suite("nope"), std::invalid_argument);
  }

  TEST_CASE("test functions are deterministic and normalized") {
    RunConfig c;
    for (auto kind : {TestFunctionKind::SingleCoeff, TestFunctionKind::RandomBand,
                      TestFunctionKind::LemmaBlock}) {
      const auto f = make_test_function(c, kind, 3);
      const auto g = make_test_function(c, kind, 3);
      CHECK(f.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
      REQUIRE(f.slices.size() == g.slices.size());
      for (std::size_t i = 0; i < f.slices.size(); ++i)
        CHECK(f.slices[i].coefficients() == g.slices[i].coefficients());
    }
    const auto a = make_test_function(c, TestFunctionKind::RandomBand, 3);
    const auto b = make_test_function(c, TestFunctionKind::RandomBand, 4);
    CHECK(a.slices[0].coefficients() != b.slices[0].coefficients());
    RunConfig c2 = c;
    c2.seed = 43;
    const auto d = make_test_function(c2, TestFunctionKind::RandomBand, 3);
    CHECK(a.slices[0].coefficients() != d.slices[0].coefficients());
  }

  TEST_CASE("test functions respect the band") {
    RunConfig c;
    const auto f = make_test_function(c, TestFunctionKind::RandomBand, 1);
    for (const auto& s : f.slices) {
      CHECK(s.max_total_degree() <= c.M_trunc);
      CHECK(s.max_weight() <= c.mK_band);
      CHECK(std::abs(s.lambda().value()) >= c.lambda_interval[0]);
      CHECK(std::abs(s.lambda().value()) <= c.lambda_interval[1]);
    }
  }

  TEST_CASE("block test functions have one block per slice") {
    RunConfig c;
    const auto f = make_test_function(c, TestFunctionKind::LemmaBlock, 2);
    for (const auto& s : f.slices) {
      if (s.empty()) continue;
      const auto& first = s.coefficients().begin()->first;
      const int sg = s.lambda().sign();
      for (const auto& [k, v] : s.coefficients()) {
        CHECK(k.mK == first.mK);
        CHECK(sg * (k.beta[0] - k.alpha[0]) == sg * (first.beta[0] - first.alpha[0]));
      }
    }
  }

  TEST_CASE("profile bump") {
    CHECK(profile_bump(1.0, 0.5, 1.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(profile_bump(-1.0, 0.5, 1.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(profile_bump(0.5, 0.5, 1.5) == 0.0);
    CHECK(profile_bump(2.0, 0.5, 1.5) == 0.0);
  }

  TEST_CASE("orthonormality suite report schema") {
    RunConfig c;
    const auto res = run_suite(c, Suite::Orthonormality);
    CHECK(res.passed);
    const auto j = res.to_json();
    REQUIRE(j["reports"].size() == res.checks.size());
    const std::vector<std::string> fields{"identity", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                                          "abs_err",  "rel_err", "params", "passed", "wall_ms"};
    for (const auto& r : j["reports"]) {
      std::vector<std::string> keys;
      for (const auto& [k, v] : r.items()) keys.push_back(k);
      CHECK(keys == fields);
      CHECK(r["wall_ms"].is_null());
    }
    CHECK(res.to_json(true)["reports"][0]["wall_ms"].is_number());
    CHECK(res.to_json().dump() == run_suite(c, Suite::Orthonormality).to_json().dump());
  }

  TEST_CASE("gutzmer suite with zero truncation") {
    RunConfig c;
    c.M_trunc = 0;
    const auto res = run_suite(c, Suite::Gutzmer);
    CHECK(res.passed);
    std::set<std::string> names;
    for (const auto& ch : res.checks) names.insert(ch.report.identity_name);
    CHECK(names.count("gutzmer_trivial") == 1);
  }

  TEST_CASE("oracle constants agree with the golden file") {
    const auto golden = load_golden(RunConfig{}.resolved_golden_path());
    const auto measured = oracle::measure_constants();
    const auto lib = library_constants();
    CHECK(golden.size() == measured.size());
    for (const auto& [k, v] : measured) {
      REQUIRE(golden.count(k) == 1);
      CHECK_MESSAGE(std::abs(golden.at(k) - v) <= 1e-9 * std::max(1.0, std::abs(v)), k);
      CHECK_MESSAGE(std::abs(lib.at(k) - v) <= 1e-9 * std::max(1.0, std::abs(v)), k);
    }
  }

  TEST_CASE("golden drift fails loudly") {
    const auto path = temp_path("golden.json");
    auto constants = library_constants();
    write_golden(path, constants);
    RunConfig c;
    c.golden_path = path;
    for (const auto& r : golden_drift_reports(c)) CHECK(r.passed);

    constants["plancherel_constant_n1"] *= 1.0 + 1e-6;
    write_golden(path, constants);
    int failed = 0;
    for (const auto& r : golden_drift_reports(c)) failed += r.passed ? 0 : 1;
    CHECK(failed == 1);
    CHECK_FALSE(run_suite(c, Suite::Orthonormality).passed);

    constants.erase("metaplectic_sign");
    write_golden(path, constants);
    failed = 0;
    for (const auto& r : golden_drift_reports(c)) failed += r.passed ? 0 : 1;
    CHECK(failed == 2);

    c.golden_path = temp_path("missing_golden.json");
    const auto missing = golden_drift_reports(c);
    REQUIRE(missing.size() == 1);
    CHECK_FALSE(missing[0].passed);
    std::filesystem::remove(path);
  }

  TEST_CASE("csv dump") {
    RunConfig c;
    DumpOptions o;
    o.grid = 3;
    for (const char* obj : {"special_hermite", "heat_kernel", "test_function"}) {
      o.object = obj;
      std::ostringstream out;
      dump_csv(c, o, out);
      std::istringstream in(out.str());
      std::string line;
      int rows = 0;
      std::getline(in, line);
      CHECK(line == "x,u,re,im,abs");
      while (std::getline(in, line)) ++rows;
      CHECK(rows == 9);
    }
    o.object = "bogus";
    std::ostringstream out;
    CHECK_THROWS_AS(dump_csv(c, o, out), std::invalid_argument);
  }
}
