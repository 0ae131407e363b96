#include "hmh/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "hmh/oracles.hpp"
#include "hmh/parallel.hpp"
#include "hmh/rng.hpp"

#ifndef HMH_DATA_DIR
#define HMH_DATA_DIR "data"
#endif

namespace hmh {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& parts) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "; " : "") + parts[i];
  return s;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : std::invalid_argument("invalid config: " + join(problems)), problems_(problems) {}

// ---------------------------------------------------------------------------
// configuration

namespace {

struct ToleranceField {
  const char* name;
  double Tolerances::*member;
};

constexpr ToleranceField kToleranceFields[] = {
    {"orthonormality", &Tolerances::orthonormality},
    {"laguerre", &Tolerances::laguerre},
    {"parseval", &Tolerances::parseval},
    {"heat", &Tolerances::heat},
    {"isometry", &Tolerances::isometry},
    {"direct_integral", &Tolerances::direct_integral},
    {"gutzmer", &Tolerances::gutzmer},
    {"poisson", &Tolerances::poisson},
    {"plancherel", &Tolerances::plancherel},
    {"paley_wiener", &Tolerances::paley_wiener},
    {"cross_term", &Tolerances::cross_term},
    {"metaplectic", &Tolerances::metaplectic},
    {"unitarity", &Tolerances::unitarity},
    {"block_closed_form", &Tolerances::block_closed_form},
    {"golden_drift", &Tolerances::golden_drift},
};

struct QuadField {
  const char* name;
  int QuadratureSizes::*member;
};

constexpr QuadField kQuadFields[] = {
    {"gram", &QuadratureSizes::gram},
    {"parseval", &QuadratureSizes::parseval},
    {"heat", &QuadratureSizes::heat},
    {"bergman_2n", &QuadratureSizes::bergman_2n},
    {"bergman_G", &QuadratureSizes::bergman_G},
    {"direct_2n", &QuadratureSizes::direct_2n},
    {"direct_G", &QuadratureSizes::direct_G},
    {"gutzmer_2n", &QuadratureSizes::gutzmer_2n},
    {"poisson_2n", &QuadratureSizes::poisson_2n},
    {"paley_wiener_2n", &QuadratureSizes::paley_wiener_2n},
};

const std::set<std::string> kTopLevelKeys = {
    "n",     "d", "M_trunc",  "mK_band",    "lambda_interval",  "lambda_nodes",  "quad",
    "t",     "q", "r",        "H",          "s",                "im_bound",      "band_terms",
    "random_functions",       "random_slices", "seed",          "tolerances",    "golden_path"};

template <class T>
void read_field(const json& j, const char* key, T& out, std::vector<std::string>& problems,
                const std::string& prefix = "") {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    problems.push_back(prefix + key + ": wrong type (" + e.what() + ")");
  }
}

}  // namespace

void RunConfig::validate() const {
  std::vector<std::string> p;
  if (n < 1 || n > 4) p.push_back("n: must be in [1, 4]");
  if (d < 0 || d > n) p.push_back("d: must satisfy 0 <= d <= n");
  if (M_trunc < 0 || M_trunc > 32) p.push_back("M_trunc: must be in [0, 32]");
  if (mK_band < 0 || mK_band > 32) p.push_back("mK_band: must be in [0, 32]");
  if (!(lambda_interval[0] > 0.0)) p.push_back("lambda_interval: lower end must be > 0");
  if (!(lambda_interval[1] > lambda_interval[0]))
    p.push_back("lambda_interval: upper end must exceed the lower end");
  if (lambda_nodes < 1) p.push_back("lambda_nodes: must be >= 1");
  for (const auto& f : kQuadFields)
    if (quad.*f.member < 2) p.push_back(std::string("quad.") + f.name + ": must be >= 2");
  if (!(t > 0.0)) p.push_back("t: must be > 0");
  if (!(q > 0.0)) p.push_back("q: must be > 0");
  if (!(r >= 0.0)) p.push_back("r: must be >= 0");
  if (static_cast<int>(H.size()) != d) p.push_back("H: length must equal d");
  for (double h : H)
    if (!std::isfinite(h)) p.push_back("H: entries must be finite");
  if (!std::isfinite(s)) p.push_back("s: must be finite");
  if (!(im_bound >= 0.0)) p.push_back("im_bound: must be >= 0");
  if (band_terms < 1) p.push_back("band_terms: must be >= 1");
  if (random_functions < 1) p.push_back("random_functions: must be >= 1");
  if (random_slices < 1) p.push_back("random_slices: must be >= 1");
  for (const auto& f : kToleranceFields)
    if (!(tol.*f.member > 0.0)) p.push_back(std::string("tolerances.") + f.name + ": must be > 0");
  if (!p.empty()) throw ConfigError(p);
}

ordered_json RunConfig::to_json() const {
  ordered_json j;
  j["n"] = n;
  j["d"] = d;
  j["M_trunc"] = M_trunc;
  j["mK_band"] = mK_band;
  j["lambda_interval"] = {lambda_interval[0], lambda_interval[1]};
  j["lambda_nodes"] = lambda_nodes;
  ordered_json qj;
  for (const auto& f : kQuadFields) qj[f.name] = quad.*f.member;
  j["quad"] = qj;
  j["t"] = t;
  j["q"] = q;
  j["r"] = r;
  j["H"] = H;
  j["s"] = s;
  j["im_bound"] = im_bound;
  j["band_terms"] = band_terms;
  j["random_functions"] = random_functions;
  j["random_slices"] = random_slices;
  j["seed"] = seed;
  ordered_json tj;
  for (const auto& f : kToleranceFields) tj[f.name] = tol.*f.member;
  j["tolerances"] = tj;
  j["golden_path"] = golden_path;
  return j;
}

RunConfig RunConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError({"<root>: config must be a JSON object"});
  std::vector<std::string> p;
  for (const auto& [key, value] : j.items())
    if (!kTopLevelKeys.count(key)) p.push_back(key + ": unknown field");
  RunConfig c;
  read_field(j, "n", c.n, p);
  read_field(j, "d", c.d, p);
  read_field(j, "M_trunc", c.M_trunc, p);
  read_field(j, "mK_band", c.mK_band, p);
  if (j.contains("lambda_interval")) {
    const auto& li = j["lambda_interval"];
    if (!li.is_array() || li.size() != 2 || !li[0].is_number() || !li[1].is_number())
      p.push_back("lambda_interval: must be an array [a, b]");
    else
      c.lambda_interval = {li[0].get<double>(), li[1].get<double>()};
  }
  read_field(j, "lambda_nodes", c.lambda_nodes, p);
  if (j.contains("quad")) {
    const auto& qj = j["quad"];
    if (!qj.is_object()) {
      p.push_back("quad: must be an object");
    } else {
      for (const auto& [key, value] : qj.items()) {
        bool known = false;
        for (const auto& f : kQuadFields) known |= key == f.name;
        if (!known) p.push_back("quad." + key + ": unknown field");
      }
      for (const auto& f : kQuadFields) read_field(qj, f.name, c.quad.*f.member, p, "quad.");
    }
  }
  read_field(j, "t", c.t, p);
  read_field(j, "q", c.q, p);
  read_field(j, "r", c.r, p);
  read_field(j, "H", c.H, p);
  read_field(j, "s", c.s, p);
  read_field(j, "im_bound", c.im_bound, p);
  read_field(j, "band_terms", c.band_terms, p);
  read_field(j, "random_functions", c.random_functions, p);
  read_field(j, "random_slices", c.random_slices, p);
  read_field(j, "seed", c.seed, p);
  if (j.contains("tolerances")) {
    const auto& tj = j["tolerances"];
    if (!tj.is_object()) {
      p.push_back("tolerances: must be an object");
    } else {
      for (const auto& [key, value] : tj.items()) {
        bool known = false;
        for (const auto& f : kToleranceFields) known |= key == f.name;
        if (!known) p.push_back("tolerances." + key + ": unknown field");
      }
      for (const auto& f : kToleranceFields)
        read_field(tj, f.name, c.tol.*f.member, p, "tolerances.");
    }
  }
  read_field(j, "golden_path", c.golden_path, p);
  if (!p.empty()) throw ConfigError(p);
  return c;
}

std::string RunConfig::resolved_golden_path() const {
  if (!golden_path.empty()) return golden_path;
  if (const char* env = std::getenv("HMH_DATA_DIR"); env && *env)
    return std::string(env) + "/golden_constants.json";
  return std::string(HMH_DATA_DIR) + "/golden_constants.json";
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({"config: parse error in '" + path + "': " + e.what()});
  }
  return RunConfig::from_json(j);
}

RunConfig load_default_config() {
  if (const char* env = std::getenv("HMH_CONFIG"); env && *env) return load_config_file(env);
  return RunConfig{};
}

Suite parse_suite(const std::string& name) {
  static const std::map<std::string, Suite> names = {
      {"orthonormality", Suite::Orthonormality}, {"heat", Suite::Heat},
      {"bergman", Suite::Bergman},               {"gutzmer", Suite::Gutzmer},
      {"poisson", Suite::Poisson},               {"plancherel", Suite::Plancherel},
      {"paley_wiener", Suite::PaleyWiener},      {"all", Suite::All}};
  auto it = names.find(name);
  if (it == names.end()) throw std::invalid_argument("unknown suite '" + name + "'");
  return it->second;
}

std::string to_string(Suite suite) {
  switch (suite) {
    case Suite::Orthonormality: return "orthonormality";
    case Suite::Heat: return "heat";
    case Suite::Bergman: return "bergman";
    case Suite::Gutzmer: return "gutzmer";
    case Suite::Poisson: return "poisson";
    case Suite::Plancherel: return "plancherel";
    case Suite::PaleyWiener: return "paley_wiener";
    case Suite::All: return "all";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// test functions

double profile_bump(double lambda, double a, double b) {
  const double x = (2.0 * std::abs(lambda) - a - b) / (b - a);
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x));
}

namespace {

SplitMix64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 mix(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
  return SplitMix64(mix.next());
}

MultiIndex random_index(SplitMix64& rng, int n, int max_total) {
  const auto all = enumerate_indices(n, max_total);
  return all[rng.integer(0, static_cast<int>(all.size()) - 1)];
}

std::vector<int> random_weight(SplitMix64& rng, int d, int band) {
  std::vector<int> m(d);
  for (auto& v : m) v = rng.integer(-band, band);
  return m;
}

BandLimitedFunction empty_band(const RunConfig& c) {
  BandLimitedFunction f;
  f.n = c.n;
  f.d = c.d;
  f.grid = LambdaGrid::gauss_legendre(c.lambda_interval[0], c.lambda_interval[1], c.lambda_nodes,
                                      true);
  for (double l : f.grid.nodes) f.profile.push_back(profile_bump(l, c.lambda_interval[0],
                                                                 c.lambda_interval[1]));
  return f;
}

BandLimitedFunction normalized(BandLimitedFunction f) {
  const double nrm = f.norm_squared();
  if (!(nrm > 0.0)) throw std::domain_error("test function has zero norm");
  return f.scaled(1.0 / std::sqrt(nrm));
}

struct BlockTerm {
  MultiIndex alpha, beta;  // as seen at lambda > 0
  cplx c;
  double phase;
};

// Coefficients with K-weight pi and sgn(lambda)(beta_j - alpha_j) = nu_j for j < d.
BandLimitedFunction lemma_block(const RunConfig& c, std::uint64_t stream, const std::vector<int>& pi,
                                const std::vector<int>& nu) {
  auto rng = stream_rng(c.seed, stream);
  std::vector<BlockTerm> terms;
  std::set<std::pair<MultiIndex, MultiIndex>> seen;
  for (int attempt = 0; attempt < 64 * c.band_terms && int(terms.size()) < c.band_terms;
       ++attempt) {
    std::vector<int> a(c.n), b(c.n);
    for (int j = 0; j < c.n; ++j) {
      if (j < c.d) {
        const int lo = std::max(0, -nu[j]), hi = c.M_trunc - std::max(0, nu[j]);
        if (hi < lo) break;
        a[j] = rng.integer(lo, hi);
        b[j] = a[j] + nu[j];
      } else {
        a[j] = rng.integer(0, c.M_trunc);
        b[j] = rng.integer(0, c.M_trunc);
      }
    }
    MultiIndex A(a), B(b);
    if (A.degree() > c.M_trunc || B.degree() > c.M_trunc || *std::min_element(b.begin(), b.end()) < 0)
      continue;
    if (!seen.insert({A, B}).second) continue;
    terms.push_back({A, B, rng.complex_normal(), rng.uniform(0.0, 2.0 * kPi)});
  }
  if (terms.empty()) throw std::domain_error("lemma_block: no admissible coefficients");
  auto f = empty_band(c);
  for (std::size_t i = 0; i < f.grid.nodes.size(); ++i) {
    const double l = f.grid.nodes[i];
    CoefficientMap cm;
    for (const auto& t : terms) {
      std::vector<int> a = t.alpha.entries(), b = t.beta.entries();
      if (l < 0)
        for (int j = 0; j < c.d; ++j) std::swap(a[j], b[j]);
      cm[{MultiIndex(a), MultiIndex(b), pi}] = t.c * f.profile[i] * std::polar(1.0, l * t.phase);
    }
    f.slices.emplace_back(TwistedParameter(l), c.n, c.d, std::move(cm));
  }
  return normalized(std::move(f));
}

}  // namespace

BandLimitedFunction make_test_function(const RunConfig& c, TestFunctionKind kind,
                                       std::uint64_t stream) {
  c.validate();
  auto rng = stream_rng(c.seed, stream);
  if (kind == TestFunctionKind::LemmaBlock) {
    auto pi = random_weight(rng, c.d, c.mK_band);
    std::vector<int> nu(c.d);
    for (auto& v : nu) v = c.M_trunc > 0 ? rng.integer(-1, 1) : 0;
    return lemma_block(c, stream + 0x10000, pi, nu);
  }
  const int terms = kind == TestFunctionKind::SingleCoeff ? 1 : c.band_terms;
  std::map<SliceKey, std::pair<cplx, double>> chosen;
  for (int attempt = 0; attempt < 64 * terms && int(chosen.size()) < terms; ++attempt) {
    SliceKey k{random_index(rng, c.n, c.M_trunc), random_index(rng, c.n, c.M_trunc),
               random_weight(rng, c.d, c.mK_band)};
    const cplx v = rng.complex_normal();
    const double ph = rng.uniform(0.0, 2.0 * kPi);
    chosen.emplace(std::move(k), std::make_pair(v, ph));
  }
  auto f = empty_band(c);
  for (std::size_t i = 0; i < f.grid.nodes.size(); ++i) {
    const double l = f.grid.nodes[i];
    CoefficientMap cm;
    for (const auto& [k, v] : chosen) {
      const cplx val = kind == TestFunctionKind::SingleCoeff ? v.first : v.first * std::polar(1.0, l * v.second);
      cm[k] = val * f.profile[i];
    }
    f.slices.emplace_back(TwistedParameter(l), c.n, c.d, std::move(cm));
  }
  return normalized(std::move(f));
}

TwistedSlice make_test_slice(const RunConfig& c, double lambda, std::uint64_t stream) {
  auto rng = stream_rng(c.seed, stream);
  CoefficientMap cm;
  for (int attempt = 0; attempt < 64 * c.band_terms && int(cm.size()) < c.band_terms; ++attempt) {
    SliceKey k{random_index(rng, c.n, c.M_trunc), random_index(rng, c.n, c.M_trunc), {}};
    cm.emplace(std::move(k), rng.complex_normal());
  }
  TwistedSlice s(TwistedParameter(lambda), c.n, 0, std::move(cm));
  return s.scaled(1.0 / std::sqrt(s.norm_squared()));
}

// ---------------------------------------------------------------------------
// golden constants

std::map<std::string, double> library_constants() {
  BandLimitedFunction f;
  f.n = 1;
  f.d = 0;
  f.grid = LambdaGrid::single(1.0);
  f.slices.emplace_back(TwistedParameter(1.0), 1, 0,
                        CoefficientMap{{{MultiIndex({1}), MultiIndex({2}), {}}, 1.0}});
  const auto F = fourier_transform_band(f, 0);
  const double entry = std::abs(F.at(0).entries.begin()->second);
  const double theta = 0.5;
  const double sign =
      std::arg(metaplectic_phase(TorusElement{{theta}}, MultiIndex({1}), TwistedParameter(1.0))) /
      theta;
  const double heat = kHeatActsOnSecondIndex ? 1.0 : 0.0;
  return {
      {"twisted_convolution_constant_n1_lambda1", twisted_convolution_constant(1.0, 1)},
      {"twisted_convolution_constant_n2_lambda2", twisted_convolution_constant(2.0, 2)},
      {"heat_index_second", heat},
      {"heat_index_second_negative_lambda", heat},
      {"fourier_entry_modulus_lambda1", entry},
      {"fourier_time_constant", kFourierTimeConstant},
      {"plancherel_constant_n1", plancherel_constant(1)},
      {"metaplectic_sign", sign},
  };
}

std::map<std::string, double> load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("golden constants file not found: " + path);
  const json j = json::parse(in);
  return j.at("constants").get<std::map<std::string, double>>();
}

void write_golden(const std::string& path, const std::map<std::string, double>& constants) {
  ordered_json j;
  j["version"] = 1;
  j["description"] = "Constants measured by independent oracles; regenerate with hmh pin-constants.";
  j["constants"] = constants;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write golden constants to " + path);
  out << j.dump(2) << "\n";
}

std::vector<VerificationReport> golden_drift_reports(const RunConfig& config) {
  const std::string path = config.resolved_golden_path();
  std::map<std::string, double> golden;
  std::vector<VerificationReport> out;
  try {
    golden = load_golden(path);
  } catch (const std::exception& e) {
    VerificationReport r{"golden_constants", kNaN, kNaN, kNaN, kNaN, {{"error", std::string(e.what())}}, false};
    out.push_back(r);
    return out;
  }
  for (const auto& [name, value] : library_constants()) {
    auto it = golden.find(name);
    if (it == golden.end()) {
      out.push_back({"golden:" + name, value, kNaN, kNaN, kNaN,
                     {{"error", std::string("missing from ") + path}}, false});
      continue;
    }
    out.push_back(make_report("golden:" + name, value, it->second, config.tol.golden_drift,
                              {{"file", path}}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// suites

namespace {

using Clock = std::chrono::steady_clock;

struct Task {
  std::string name;  // used when the task throws
  std::function<std::vector<VerificationReport>()> run;
};

VerificationReport failed_report(const std::string& name, const std::string& error) {
  return {name, kNaN, kNaN, kNaN, kNaN, {{"error", error}}, false};
}

// Gram matrix of scaled Hermite functions of total degree <= degree on R^n.
VerificationReport gram_report(int n, double lambda, int degree, int nodes, double tol) {
  const TwistedParameter lam(lambda);
  const auto& rule = cached_gauss_hermite(nodes);
  const auto idx = enumerate_indices(n, degree);
  const std::size_t N = idx.size();
  std::vector<double> G(N * N, 0.0);
  const double s = std::sqrt(lam.abs());
  std::vector<int> node(n, 0);
  std::vector<cplx> x(n), vals(N);
  bool more = true;
  while (more) {
    double w = std::pow(s, -n);  // dx = |lambda|^{-n/2} d xi
    for (int j = 0; j < n; ++j) {
      x[j] = rule.nodes[node[j]] / s;
      w *= rule.scaled_weights[node[j]];
    }
    // scaled_weights carry e^{xi^2}; the product of two Hermite functions carries e^{-xi^2}
    for (std::size_t a = 0; a < N; ++a) vals[a] = scaled_hermite(idx[a], lam, x);
    for (std::size_t a = 0; a < N; ++a)
      for (std::size_t b = 0; b < N; ++b) G[a * N + b] += w * (vals[a] * vals[b]).real();
    more = false;
    for (int j = n - 1; j >= 0; --j) {
      if (++node[j] < nodes) {
        more = true;
        break;
      }
      node[j] = 0;
    }
  }
  double worst = 0.0, frob = 0.0;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      worst = std::max(worst, std::abs(G[a * N + b] - (a == b ? 1.0 : 0.0)));
      frob += G[a * N + b] * G[a * N + b];
    }
  auto r = make_report("gram_matrix", frob, double(N), tol,
                       {{"n", std::int64_t(n)},
                        {"lambda", lambda},
                        {"max_degree", std::int64_t(degree)},
                        {"nodes", std::int64_t(nodes)},
                        {"max_entry_deviation", worst}});
  r.passed = r.passed && worst <= tol;
  return r;
}

VerificationReport laguerre_report(int a, double x, int max_m, double tol) {
  double worst = -1.0;
  cplx lib = 0.0, ref = 0.0;
  int worst_m = 0;
  for (int m = 0; m <= max_m; ++m) {
    const cplx l = laguerre(m, a, x);
    const double o = oracle::laguerre_series(m, a, x);
    const double err = std::abs(l - o) / std::max(1.0, std::abs(o));
    if (err > worst) {
      worst = err;
      lib = l;
      ref = o;
      worst_m = m;
    }
  }
  auto r = make_report("laguerre_series", lib, ref, tol,
                       {{"alpha_type", std::int64_t(a)},
                        {"x", x},
                        {"worst_m", std::int64_t(worst_m)},
                        {"max_m", std::int64_t(max_m)},
                        {"scaled_error", worst}});
  r.passed = worst <= tol;
  return r;
}

// f *_lambda p_t at one point against the heat multiplier applied to f's coefficient.
VerificationReport heat_report(double lambda, double t, int a, int b, int nodes, double tol) {
  const TwistedParameter lam(lambda);
  const MultiIndex A({a}), B({b});
  PlaneFunction F = [&](std::span<const double> x, std::span<const double> u) {
    const cplx z[1] = {x[0]}, w[1] = {u[0]};
    return SpecialHermiteTable(lam, z, w, std::max(a, b)).value(A, B);
  };
  PlaneFunction P = [&](std::span<const double> x, std::span<const double> u) {
    const cplx xc[1] = {x[0]}, uc[1] = {u[0]};
    return heat_kernel_twisted(t, lam, xc, uc);
  };
  const std::vector<double> x{0.37}, u{-0.52};
  const double al = lam.abs();
  const double kappa = 0.25 * al / std::tanh(al * t), rate = 0.25 * al + kappa;
  GaussianFrame frame{{kappa * x[0] / rate, kappa * u[0] / rate}, 1.0 / std::sqrt(rate)};
  const cplx conv = twisted_convolution(F, P, lam, x, u, cached_gauss_hermite(nodes), frame);
  TwistedSlice slice(lam, 1, 0, {{{A, B, {}}, 1.0}});
  const cplx z[1] = {x[0]}, w[1] = {u[0]};
  const cplx mult = heat_multiplier_apply(slice, t).evaluate(z, w);
  return make_report("heat_identity", conv, mult, tol,
                     {{"lambda", lambda},
                      {"t", t},
                      {"alpha", std::int64_t(a)},
                      {"beta", std::int64_t(b)},
                      {"nodes", std::int64_t(nodes)}});
}

ComplexGroupPoint random_complex_point(SplitMix64& rng, int n, int d, std::span<const double> H,
                                       double s, double im) {
  ComplexGroupPoint p = ComplexGroupPoint::identity(n, d);
  for (int j = 0; j < n; ++j) {
    p.z[j] = cplx(rng.uniform(-0.6, 0.6), rng.uniform(-im, im));
    p.w[j] = cplx(rng.uniform(-0.6, 0.6), rng.uniform(-im, im));
  }
  p.tau = cplx(rng.uniform(-1.0, 1.0), s);
  for (int j = 0; j < d; ++j) {
    p.k.theta[j] = rng.uniform(0.0, 2.0 * kPi);
    p.H[j] = H[j];
  }
  return p;
}

// Cross term Re<f1, f2> in the Paley-Wiener norm, averaged over the torus part of g.
VerificationReport cross_term_report(const std::string& label, const BandLimitedFunction& f1,
                                     const BandLimitedFunction& f2, const ComplexGroupPoint& p,
                                     const PaleyWienerOptions& opts, int theta_nodes, double tol) {
  const auto sum = add(f1, f2);
  const auto trap = periodic_trapezoid_rule(theta_nodes);
  double cross = 0.0, diag = 0.0;
  for (std::size_t i = 0; i < trap.size(); ++i) {
    ComplexGroupPoint q = p;
    for (auto& th : q.k.theta) th = p.k.theta.empty() ? 0.0 : trap.nodes[i];
    const double w = trap.weights[i] / (2.0 * kPi);
    const double a = paley_wiener_lhs(f1, q, opts), b = paley_wiener_lhs(f2, q, opts);
    const double ab = paley_wiener_lhs(sum, q, opts);
    cross += w * 0.5 * (ab - a - b);
    diag += w * (a + b);
  }
  VerificationReport r;
  r.identity_name = "paley_wiener_cross_term";
  r.lhs = cross;
  r.rhs = 0.0;
  r.abs_err = std::abs(cross);
  r.rel_err = std::abs(cross) / std::max(diag, kRelErrFloor);
  r.params = {{"pair", label},
              {"diagonal", diag},
              {"theta_nodes", std::int64_t(theta_nodes)},
              {"tolerance", tol}};
  r.passed = r.rel_err <= tol;
  return r;
}

void add_orthonormality(const RunConfig& c, std::vector<Task>& tasks) {
  for (int n : {1, 2})
    for (double lambda : {0.5, 1.0, 3.0, -2.0})
      tasks.push_back({"gram_matrix", [=] {
                         return std::vector{gram_report(n, lambda, 6, c.quad.gram,
                                                        c.tol.orthonormality)};
                       }});
  for (int a : {0, 1, 2})
    tasks.push_back({"laguerre_series", [=] {
                       std::vector<VerificationReport> out;
                       for (double x : {-2.5, 0.3, 1.7, 5.0})
                         out.push_back(laguerre_report(a, x, 12, c.tol.laguerre));
                       return out;
                     }});
  for (int i = 0; i < 3; ++i)
    tasks.push_back({"parseval_bridge", [=] {
                       RunConfig c1 = c;
                       c1.n = 1;
                       c1.M_trunc = std::min(c.M_trunc, 4);
                       const double lambda = (i % 2 ? -1.0 : 1.0) * (0.5 + 0.5 * i);
                       const auto slice = make_test_slice(c1, lambda, 500 + i);
                       const double quad = slice_l2_quadrature(slice, c.quad.parseval);
                       return std::vector{make_report("parseval_bridge", quad, slice.norm_squared(),
                                                      c.tol.parseval,
                                                      {{"lambda", lambda},
                                                       {"nodes", std::int64_t(c.quad.parseval)}})};
                     }});
  tasks.push_back({"twisted_convolution_relation", [=] {
                     const double lambda = 1.3;
                     const TwistedParameter lam(lambda);
                     const MultiIndex a({1}), b({2}), d({0});
                     auto phi = [lam](MultiIndex p, MultiIndex q) -> PlaneFunction {
                       return [lam, p, q](std::span<const double> x, std::span<const double> u) {
                         const cplx z[1] = {x[0]}, w[1] = {u[0]};
                         return SpecialHermiteTable(lam, z, w, 2).value(p, q);
                       };
                     };
                     const std::vector<double> x{0.41}, u{0.23};
                     const cplx conv = twisted_convolution(phi(a, b), phi(b, d), lam, x, u,
                                                           cached_gauss_hermite(24));
                     const cplx rhs = twisted_convolution_constant(lambda, 1) * phi(a, d)(x, u);
                     return std::vector{make_report("twisted_convolution_relation", conv, rhs,
                                                    c.tol.heat, {{"lambda", lambda}})};
                   }});
}

void add_heat(const RunConfig& c, std::vector<Task>& tasks) {
  for (double lambda : {1.5, -1.5})
    for (double t : {0.2, 1.0})
      for (int a = 0; a <= 3; ++a)
        tasks.push_back({"heat_identity", [=] {
                           std::vector<VerificationReport> out;
                           for (int b = 0; b <= 3; ++b)
                             out.push_back(heat_report(lambda, t, a, b, c.quad.heat, c.tol.heat));
                           return out;
                         }});
}

void add_bergman(const RunConfig& c, std::vector<Task>& tasks) {
  for (int i = 0; i < c.random_slices; ++i)
    tasks.push_back({"bergman_isometry", [=] {
                       auto rng = stream_rng(c.seed, 1000 + i);
                       const double lambda = (rng.uniform() < 0.5 ? -1.0 : 1.0) *
                                             rng.uniform(c.lambda_interval[0], c.lambda_interval[1]);
                       const auto F = make_test_slice(c, lambda, 1100 + i);
                       const double norm = bergman_norm(heat_multiplier_apply(F, c.t), c.t,
                                                        cached_gauss_hermite(c.quad.bergman_2n),
                                                        cached_gauss_hermite(c.quad.bergman_G));
                       return std::vector{make_report("bergman_isometry", norm, F.norm_squared(),
                                                      c.tol.isometry,
                                                      {{"lambda", lambda}, {"t", c.t}})};
                     }});
  for (int i = 0; i < c.random_functions; ++i)
    tasks.push_back({"direct_integral_isometry", [=] {
                       const auto f = make_test_function(c, TestFunctionKind::RandomBand, 1200 + i);
                       DirectIntegralOptions o{c.quad.direct_2n, c.quad.direct_G, false};
                       const double norm = direct_integral_norm(segal_bargmann(f, c.t), c.t, o);
                       return std::vector{make_report("direct_integral_isometry", norm,
                                                      f.norm_squared(), c.tol.direct_integral,
                                                      {{"t", c.t},
                                                       {"function", std::int64_t(i)},
                                                       {"lambda_nodes",
                                                        std::int64_t(f.grid.nodes.size())}})};
                     }});
  tasks.push_back({"nonnegative_weight_probe", [=] {
                     WeightProbeOptions single;
                     single.single_lambda = true;
                     return std::vector{nonnegative_weight_probe(c.t),
                                        nonnegative_weight_probe(c.t, single)};
                   }});
}

void add_gutzmer(const RunConfig& c, std::vector<Task>& tasks) {
  const auto trap = periodic_trapezoid_rule(2 * c.M_trunc + 3);
  if (c.M_trunc == 0) {
    tasks.push_back({"gutzmer_trivial", [=] {
                       TwistedSlice F(TwistedParameter(1.0), c.n, 0,
                                      {{{MultiIndex::zeros(c.n), MultiIndex::zeros(c.n), {}}, 1.0}});
                       std::vector<double> zero(c.n, 0.0);
                       const double lhs = gutzmer_lhs(F, zero, zero, trap,
                                                      cached_gauss_hermite(c.quad.gutzmer_2n));
                       return std::vector{make_report("gutzmer_trivial", lhs, F.norm_squared(),
                                                      c.tol.gutzmer)};
                     }});
    return;
  }
  for (int i = 0; i < c.random_slices; ++i)
    tasks.push_back({"gutzmer", [=] {
                       auto rng = stream_rng(c.seed, 2000 + i);
                       const double lambda = (rng.uniform() < 0.5 ? -1.0 : 1.0) *
                                             rng.uniform(c.lambda_interval[0], c.lambda_interval[1]);
                       std::vector<double> y(c.n), v(c.n);
                       double r2 = 0.0;
                       for (int j = 0; j < c.n; ++j) {
                         y[j] = rng.normal();
                         v[j] = rng.normal();
                         r2 += y[j] * y[j] + v[j] * v[j];
                       }
                       const double radius = c.im_bound * rng.uniform() / std::sqrt(r2);
                       for (int j = 0; j < c.n; ++j) {
                         y[j] *= radius;
                         v[j] *= radius;
                       }
                       const auto F = make_test_slice(c, lambda, 2100 + i);
                       const double lhs =
                           gutzmer_lhs(F, y, v, trap, cached_gauss_hermite(c.quad.gutzmer_2n));
                       return std::vector{make_report("gutzmer", lhs, gutzmer_rhs(F, y, v),
                                                      c.tol.gutzmer,
                                                      {{"lambda", lambda},
                                                       {"y0", y[0]},
                                                       {"v0", v[0]},
                                                       {"k_nodes", std::int64_t(trap.size())}})};
                     }});
}

void add_poisson(const RunConfig& c, std::vector<Task>& tasks) {
  struct Case {
    double r;
    double h_scale;
  };
  for (Case pc : {Case{c.r, 1.0}, Case{0.5 * c.r, -0.5}, Case{0.0, 1.0}})
    tasks.push_back({"poisson_identity", [=] {
                       if (c.n != 1) throw std::invalid_argument("poisson suite requires n = 1");
                       const auto f = make_test_function(c, TestFunctionKind::RandomBand, 3000);
                       std::vector<double> H = c.H;
                       for (auto& h : H) h *= pc.h_scale;
                       PoissonOptions o;
                       o.nodes_2n = c.quad.poisson_2n;
                       o.tolerance = c.tol.poisson;
                       return std::vector{poisson_identity_check(f, c.q, pc.r, H, c.s, o)};
                     }});
}

void add_plancherel(const RunConfig& c, std::vector<Task>& tasks) {
  for (int i = 0; i < c.random_functions; ++i)
    tasks.push_back({"plancherel", [=] {
                       const auto f = make_test_function(c, TestFunctionKind::RandomBand, 4000 + i);
                       return std::vector{plancherel_check(f, c.tol.plancherel)};
                     }});
  tasks.push_back({"plancherel_polarization", [=] {
                     const auto f = make_test_function(c, TestFunctionKind::RandomBand, 4100);
                     const auto g = make_test_function(c, TestFunctionKind::RandomBand, 4101);
                     return std::vector{plancherel_polarization(f, g, c.tol.plancherel)};
                   }});
  tasks.push_back({"fourier_single_coefficient", [=] {
                     const auto f = make_test_function(c, TestFunctionKind::SingleCoeff, 4200);
                     const auto golden = load_golden(c.resolved_golden_path());
                     const double pinned = golden.at("fourier_entry_modulus_lambda1");
                     std::vector<VerificationReport> out;
                     for (std::size_t i = 0; i < f.slices.size(); ++i) {
                       const auto& sl = f.slices[i];
                       const auto mats = fourier_transform_band(f, i);
                       std::size_t entries = 0;
                       double modulus = 0.0;
                       for (const auto& F : mats) {
                         entries += F.entries.size();
                         for (const auto& [k, v] : F.entries) modulus = std::abs(v);
                       }
                       const double coeff = std::abs(sl.coefficients().begin()->second);
                       const double expected =
                           std::pow(pinned, f.n) * std::pow(sl.lambda().abs(), -0.5 * f.n) * coeff;
                       auto r = make_report("fourier_single_coefficient", modulus, expected,
                                            c.tol.plancherel,
                                            {{"lambda", sl.lambda().value()},
                                             {"sigma_count", std::int64_t(mats.size())},
                                             {"entry_count", std::int64_t(entries)}});
                       r.passed = r.passed && mats.size() == 1 && entries == 1;
                       out.push_back(r);
                     }
                     return out;
                   }});
}

void add_paley_wiener(const RunConfig& c, std::vector<Task>& tasks) {
  PaleyWienerOptions o;
  o.nodes_2n = c.quad.paley_wiener_2n;
  o.tolerance = c.tol.paley_wiener;
  auto point = [c](std::uint64_t stream) {
    auto rng = stream_rng(c.seed, stream);
    return random_complex_point(rng, c.n, c.d, c.H, c.s, 0.3);
  };
  for (int i = 0; i < 3; ++i)
    tasks.push_back({"paley_wiener_block", [=] {
                       const auto f = make_test_function(c, TestFunctionKind::LemmaBlock, 5000 + i);
                       const auto p = point(5100 + i);
                       auto r = paley_wiener_check(f, p, o);
                       const double closed = oracle::lemma_block_norm(f, p);
                       auto rc = make_report("paley_wiener_block_closed_form", r.rhs, closed,
                                             c.tol.block_closed_form, {{"block", std::int64_t(i)}});
                       r.params["block"] = std::int64_t(i);
                       return std::vector{r, rc};
                     }});
  if (c.d > 0) {
    // Pair A: different K-weights; pair B: equal K-weight, different nu.
    std::vector<int> pi(c.d, 1), pi2(c.d, -1), nu(c.d, 0), nu2(c.d, 0);
    nu2[0] = c.M_trunc > 0 ? 1 : 0;
    struct Pair {
      std::string label;
      std::vector<int> pa, na, pb, nb;
    };
    std::vector<Pair> pairs{{"distinct_weight", pi, nu, pi2, nu}};
    if (c.M_trunc > 0) pairs.push_back({"distinct_nu", pi, nu, pi, nu2});
    const int theta_nodes = 2 * (2 * c.M_trunc + 2 * c.mK_band) + 3;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const Pair pr = pairs[i];
      tasks.push_back({"paley_wiener_two_block", [=] {
                         const auto fa = lemma_block(c, 5200 + 2 * i, pr.pa, pr.na);
                         const auto fb = lemma_block(c, 5201 + 2 * i, pr.pb, pr.nb);
                         const auto p = point(5300 + i);
                         auto r = paley_wiener_check(add(fa, fb), p, o);
                         r.params["pair"] = pr.label;
                         return std::vector{r, cross_term_report(pr.label, fa, fb, p, o,
                                                                 theta_nodes, c.tol.cross_term)};
                       }});
    }
  }
  for (double lambda : {1.0, -1.5})
    tasks.push_back({"metaplectic_intertwining", [=] {
                       auto rng = stream_rng(c.seed, 5400 + (lambda > 0 ? 0 : 1));
                       std::vector<double> x(c.n), u(c.n);
                       for (int j = 0; j < c.n; ++j) {
                         x[j] = rng.uniform(-1.0, 1.0);
                         u[j] = rng.uniform(-1.0, 1.0);
                       }
                       TorusElement k{std::vector<double>(c.n)};
                       for (auto& th : k.theta) th = rng.uniform(0.0, 2.0 * kPi);
                       return std::vector{metaplectic_intertwining_check(
                           TwistedParameter(lambda), x, u, k, c.M_trunc, c.tol.metaplectic)};
                     }});
  for (double lambda : {1.0, -1.5})
    tasks.push_back({"rep_unitarity", [=] {
                       auto rng = stream_rng(c.seed, 5500 + (lambda > 0 ? 0 : 1));
                       auto p = random_complex_point(rng, c.n, c.d, std::vector<double>(c.d, 0.0),
                                                     0.0, 0.0);
                       for (auto& z : p.z) z = z.real();
                       for (auto& w : p.w) w = w.real();
                       const TorusIrrep sigma(random_weight(rng, c.d, c.mK_band));
                       return std::vector{rep_unitarity_check(TwistedParameter(lambda), sigma, p,
                                                              c.M_trunc, 40, c.tol.unitarity)};
                     }});
}

}  // namespace

nlohmann::ordered_json SuiteResult::to_json(bool include_timings) const {
  ordered_json j;
  j["suite"] = suite;
  j["passed"] = passed;
  j["config"] = config.to_json();
  ordered_json reports = ordered_json::array();
  for (const auto& c : checks) {
    const auto& r = c.report;
    ordered_json e;
    e["identity"] = r.identity_name;
    e["lhs_re"] = r.lhs.real();
    e["lhs_im"] = r.lhs.imag();
    e["rhs_re"] = r.rhs.real();
    e["rhs_im"] = r.rhs.imag();
    e["abs_err"] = r.abs_err;
    e["rel_err"] = r.rel_err;
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : r.params) std::visit([&](const auto& x) { params[k] = x; }, v);
    e["params"] = params;
    e["passed"] = r.passed;
    e["wall_ms"] = include_timings ? ordered_json(c.wall_ms) : ordered_json(nullptr);
    reports.push_back(e);
  }
  j["reports"] = reports;
  return j;
}

SuiteResult run_suite(const RunConfig& config, Suite suite) {
  config.validate();
  std::vector<Task> tasks;
  tasks.push_back({"golden_constants", [config] { return golden_drift_reports(config); }});
  auto want = [suite](Suite s) { return suite == Suite::All || suite == s; };
  if (want(Suite::Orthonormality)) add_orthonormality(config, tasks);
  if (want(Suite::Heat)) add_heat(config, tasks);
  if (want(Suite::Bergman)) add_bergman(config, tasks);
  if (want(Suite::Gutzmer)) add_gutzmer(config, tasks);
  if (want(Suite::Poisson)) add_poisson(config, tasks);
  if (want(Suite::Plancherel)) add_plancherel(config, tasks);
  if (want(Suite::PaleyWiener)) add_paley_wiener(config, tasks);

  std::vector<std::vector<CheckResult>> slots(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    const auto start = Clock::now();
    std::vector<VerificationReport> reports;
    try {
      reports = tasks[i].run();
    } catch (const std::exception& e) {
      reports = {failed_report(tasks[i].name, e.what())};
    }
    const double ms =
        std::chrono::duration<double, std::milli>(Clock::now() - start).count() /
        std::max<std::size_t>(reports.size(), 1);
    for (auto& r : reports) slots[i].push_back({std::move(r), ms});
  });

  SuiteResult result;
  result.suite = to_string(suite);
  result.config = config;
  result.passed = true;
  for (auto& s : slots)
    for (auto& c : s) {
      result.passed = result.passed && c.report.passed;
      result.checks.push_back(std::move(c));
    }
  return result;
}

// ---------------------------------------------------------------------------
// CSV dumps

void dump_csv(const RunConfig& config, const DumpOptions& o, std::ostream& out) {
  if (o.grid < 2) throw std::invalid_argument("dump: grid must be >= 2");
  const TwistedParameter lam(o.lambda);
  std::function<cplx(double, double)> value;
  std::optional<BandLimitedFunction> f;
  if (o.object == "special_hermite") {
    const MultiIndex a({o.alpha}), b({o.beta});
    const int M = std::max(o.alpha, o.beta);
    value = [=](double x, double u) {
      const cplx z[1] = {x}, w[1] = {u};
      return SpecialHermiteTable(lam, z, w, M).value(a, b);
    };
  } else if (o.object == "heat_kernel") {
    value = [=](double x, double u) {
      const cplx z[1] = {x}, w[1] = {u};
      return heat_kernel_twisted(o.t, lam, z, w);
    };
  } else if (o.object == "test_function") {
    RunConfig c = config;
    f = make_test_function(c, TestFunctionKind::RandomBand, 0);
    std::size_t best = 0;
    for (std::size_t i = 1; i < f->grid.nodes.size(); ++i)
      if (std::abs(f->grid.nodes[i] - o.lambda) < std::abs(f->grid.nodes[best] - o.lambda)) best = i;
    const TwistedSlice slice = f->slices[best];
    value = [slice, n = c.n, d = c.d](double x, double u) {
      std::vector<cplx> z(n, 0.0), w(n, 0.0), ang(d, 0.0);
      z[0] = x;
      w[0] = u;
      return slice.evaluate(z, w, ang);
    };
  } else {
    throw std::invalid_argument("dump: unknown object '" + o.object +
                                "' (special_hermite, heat_kernel, test_function)");
  }
  std::ostringstream buf;
  buf.precision(17);
  buf << "x,u,re,im,abs\n";
  for (int i = 0; i < o.grid; ++i)
    for (int j = 0; j < o.grid; ++j) {
      const double x = -o.extent + 2.0 * o.extent * i / (o.grid - 1);
      const double u = -o.extent + 2.0 * o.extent * j / (o.grid - 1);
      const cplx v = value(x, u);
      buf << x << ',' << u << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
    }
  out << buf.str();
}

}  // namespace hmh
