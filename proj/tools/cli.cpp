#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

#include "cli_output.hpp"
#include "pbl/bounds.hpp"
#include "pbl/counting.hpp"
#include "pbl/errors.hpp"
#include "pbl/geometry.hpp"
#include "pbl/lattice.hpp"
#include "pbl/transforms.hpp"

namespace pbl::cli {

namespace {

constexpr double kPi = std::numbers::pi;

// A precondition violated by a flag value; exit code 2.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& flag, const std::string& what) : std::runtime_error(flag + ": " + what) {}
};

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
  const char* v = std::getenv("PBL_LOG");
  if (v == nullptr) return LogLevel::Error;
  const std::string s(v);
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  return LogLevel::Error;
}

void log(std::ostream& err, LogLevel level, const std::string& msg) {
  if (static_cast<int>(level) <= static_cast<int>(log_level())) {
    err << (level == LogLevel::Debug ? "debug: " : "info: ") << msg << "\n";
  }
}

std::string fmt(double x) { return format_double(x); }

// ---------------------------------------------------------------- parsing

std::vector<int> parse_k_list(const std::string& text, const std::string& flag) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError(flag, "expected an integer or a range a..b, got '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {to_int(text)};
  const int lo = to_int(text.substr(0, dots));
  const int hi = to_int(text.substr(dots + 2));
  if (hi < lo) throw UsageError(flag, "empty range '" + text + "'");
  std::vector<int> out;
  for (int k = lo; k <= hi; ++k) out.push_back(k);
  return out;
}

double parse_double(const std::string& s, const std::string& flag) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw UsageError(flag, "expected a number, got '" + s + "'");
  return v;
}

// "a..b:step" (inclusive of b up to rounding) or a single value.
std::vector<double> parse_grid(const std::string& text, const std::string& flag) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {parse_double(text, flag)};
  const auto colon = text.find(':', dots);
  if (colon == std::string::npos) throw UsageError(flag, "expected a grid a..b:step, got '" + text + "'");
  const double lo = parse_double(text.substr(0, dots), flag);
  const double hi = parse_double(text.substr(dots + 2, colon - dots - 2), flag);
  const double step = parse_double(text.substr(colon + 1), flag);
  if (!(step > 0.0) || hi < lo) throw UsageError(flag, "grid needs step > 0 and a <= b, got '" + text + "'");
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
  if (count > 100000) throw UsageError(flag, "grid has more than 100000 points");
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config", "cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--config", "line " + std::to_string(lineno) + " of '" + path + "' is not key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

// Appends config entries as flags unless the command line already sets them.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  const auto entries = read_config(*path);
  std::vector<std::string> extra;
  for (const auto& [key, value] : entries) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "--config" || has_flag(args, flag)) continue;
    if (value == "true") {
      extra.push_back(flag);
    } else if (value != "false") {
      extra.push_back(flag);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

// ---------------------------------------------------------------- parallel

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

// Runs fn(i) for i in [0, count) on `jobs` threads. The exception of the
// lowest failing index is rethrown, so failures are deterministic too.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(resolve_jobs(jobs), static_cast<int>(std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------- options

struct Common {
  std::uint64_t seed = 1;
  int jobs = 0;
  std::string out;
  std::string format = "jsonl";
  std::string config;

  void echo(std::map<std::string, std::string>& cfg) const {
    cfg["seed"] = std::to_string(seed);
    cfg["format"] = format;
  }
};

struct LatticeFlags {
  double a1_re = 1.0, a1_im = 0.0, a2_re = 0.0, a2_im = 1.0, beta_step = 1.0;

  void add(CLI::App* app) {
    app->add_option("--a1-re", a1_re, "alpha generator a1, real part");
    app->add_option("--a1-im", a1_im, "alpha generator a1, imaginary part");
    app->add_option("--a2-re", a2_re, "alpha generator a2, real part");
    app->add_option("--a2-im", a2_im, "alpha generator a2, imaginary part");
    app->add_option("--beta-step", beta_step, "spacing of the beta lattice");
  }

  LatticeSpec spec() const {
    if (!(beta_step > 0.0)) throw UsageError("--beta-step", "beta_step must be positive");
    try {
      return LatticeSpec({a1_re, a1_im}, {a2_re, a2_im}, beta_step);
    } catch (const std::invalid_argument&) {
      throw UsageError("--a1-re/--a1-im/--a2-re/--a2-im", "alpha generators must be linearly independent over R");
    }
  }

  void echo(std::map<std::string, std::string>& cfg) const {
    cfg["a1_re"] = fmt(a1_re);
    cfg["a1_im"] = fmt(a1_im);
    cfg["a2_re"] = fmt(a2_re);
    cfg["a2_im"] = fmt(a2_im);
    cfg["beta_step"] = fmt(beta_step);
  }
};

struct ConstantFlags {
  double c_gamma = 1.0;
  int c_exponent = 2;

  void add(CLI::App* app) {
    app->add_option("--c-gamma", c_gamma, "C(k) = c_gamma * k^c_exponent");
    app->add_option("--c-exponent", c_exponent, "exponent of k in C(k)");
  }
  ConstantModel model() const {
    if (!(c_gamma > 0.0)) throw UsageError("--c-gamma", "c_gamma must be positive");
    return {c_gamma, c_exponent};
  }
  void echo(std::map<std::string, std::string>& cfg) const {
    cfg["c_gamma"] = fmt(c_gamma);
    cfg["c_exponent"] = std::to_string(c_exponent);
  }
};

CuspTerm parse_cusp_term(const std::string& s) {
  if (s == "chained") return CuspTerm::Chained;
  if (s == "printed") return CuspTerm::Printed;
  throw UsageError("--cusp-term", "expected 'chained' or 'printed', got '" + s + "'");
}

double log_of(const LogReal& x) { return x.log_abs(); }

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  double curvature_step = 1e-4;
  double perturb_gamma3 = 0.0;
};

struct Check {
  std::string name;
  double residual;
  double tolerance;
};

int cmd_verify(const Common& common, const VerifyFlags& f, ReportWriter& w) {
  if (!(f.curvature_step > 0.0) || f.curvature_step > 0.05) {
    throw UsageError("--curvature-step", "step must lie in (0, 0.05]");
  }
  std::map<std::string, std::string> cfg;
  common.echo(cfg);
  cfg["curvature_step"] = fmt(f.curvature_step);
  cfg["perturb_gamma3"] = fmt(f.perturb_gamma3);
  w.header("verify", cfg);

  std::mt19937_64 rng(common.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const StandardForms forms = standard_forms(2);
  std::vector<Check> checks;

  CMatrix g3 = cayley_gamma3().matrix();
  g3(0, 0) += f.perturb_gamma3;
  const CMatrix g23 = cayley_gamma23().matrix();
  checks.push_back({"gamma23_pullback", verify_isometry(g23, forms.m3, forms.m2), kFormTolerance});
  checks.push_back({"gamma3_pullback", verify_isometry(g3, forms.ball, forms.m3), kFormTolerance});
  checks.push_back({"gamma2_pullback", verify_isometry(g3 * g23, forms.ball, forms.m2), kFormTolerance});

  double conj = 0.0;
  const CMatrix g23_inv = g23.inverse();
  for (int i = 0; i < 100; ++i) {
    const HeisenbergParam p{{normal(rng), normal(rng)}, normal(rng)};
    const CMatrix lhs = g23 * stabilizer_matrix(p, Model::M2).matrix() * g23_inv;
    conj = std::max(conj, (lhs - stabilizer_matrix(p, Model::M3).matrix()).cwiseAbs().maxCoeff());
  }
  checks.push_back({"stabilizer_conjugation", conj, kFormTolerance});

  double disagreements = 0.0;
  for (Model m : {Model::Ball, Model::M2, Model::M3}) {
    const HermitianForm form = standard_form(m, 2);
    for (int i = 0; i < 10000; ++i) {
      const Complex z1(1.5 * unit(rng), 1.5 * unit(rng));
      const Complex z2(1.5 * unit(rng), 1.5 * unit(rng));
      CVector zt(3);
      zt << z1, z2, 1.0;
      const bool by_form = inner_product(form, zt, zt).real() < 0.0;
      bool closed = false;
      switch (m) {
        case Model::Ball: closed = std::norm(z1) + std::norm(z2) < 1.0; break;
        case Model::M2: closed = 2.0 * z1.imag() > std::norm(z2); break;
        case Model::M3: closed = 2.0 * z1.real() + std::norm(z2) < 0.0; break;
      }
      if (by_form != closed) disagreements += 1.0;
    }
  }
  checks.push_back({"membership_equivalence", disagreements, 0.0});

  auto random_ball_point = [&](double radius) {
    CVector z(2);
    do {
      z << Complex(unit(rng), unit(rng)), Complex(unit(rng), unit(rng));
    } while (z.norm() >= 1.0);
    return ModelPoint(Model::Ball, CVector(radius * z));
  };
  double invariance = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Isometry g = random_isometry(Model::Ball, 2, rng);
    const ModelPoint z = random_ball_point(0.9), x = random_ball_point(0.9);
    invariance = std::max(invariance, std::abs(distance(apply(g, z), apply(g, x)) - distance(z, x)));
  }
  checks.push_back({"distance_invariance", invariance, 1e-9});

  double cross = 0.0;
  const CayleyMap c23 = cayley_gamma23();
  for (int i = 0; i < 200; ++i) {
    auto m2_point = [&] {
      const Complex z2(unit(rng), unit(rng));
      return ModelPoint(Model::M2, {Complex(unit(rng), 0.5 * std::norm(z2) + 0.05 + std::abs(unit(rng))), z2});
    };
    const ModelPoint z = m2_point(), x = m2_point();
    cross = std::max(cross, std::abs(distance(z, x) - distance(apply(c23, z), apply(c23, x))));
  }
  checks.push_back({"cross_model_distance", cross, 1e-9});

  double curvature = 0.0;
  for (int n : {2, 3}) {
    const double expected = std::pow(4.0 * kPi, -n);
    for (int i = 0; i < 10; ++i) {
      CVector z(n);
      for (int j = 0; j < n; ++j) z[j] = Complex(unit(rng), unit(rng));
      z *= 0.6 * std::abs(unit(rng)) / z.norm();
      curvature = std::max(curvature, std::abs(curvature_determinant(ModelPoint(Model::Ball, z), f.curvature_step) / expected - 1.0));
    }
  }
  checks.push_back({"curvature_determinant", curvature, std::max(1e-4, 10.0 * f.curvature_step * f.curvature_step)});

  double location = 0.0, value = 0.0;
  for (int k : {6, 10, 20, 50}) {
    const double target = k / (4.0 * kPi);
    try {
      const MaximaResult r = maxima_locate(k, 1e-6);
      location = std::max({location, std::abs(r.point[0].real() + target) / target, std::abs(r.point[1])});
      const double expected = k * std::log(k / (2.0 * kPi)) - k;
      value = std::max(value, std::abs(r.log_value - expected) / std::abs(expected));
    } catch (const NumericalError&) {
      location = value = std::numeric_limits<double>::infinity();
    }
  }
  checks.push_back({"maxima_location", location, 1e-6});
  checks.push_back({"maxima_value", value, 1e-10});

  bool all = true;
  for (const Check& c : checks) {
    const bool pass = c.residual <= c.tolerance;
    all = all && pass;
    w.record("check", {{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", pass}});
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------------- bound

struct BoundFlags {
  std::string kind;
  int n = 2;
  std::string k = "6";
  double rx = 1.0;
  bool fit = false;
  std::string cusp_term = "chained";
  bool lattice_sum = false;
  double tol = 1e-8;
  ConstantFlags constants;
  LatticeFlags lattice;
};

int cmd_bound(const Common& common, const BoundFlags& f, ReportWriter& w) {
  const bool cusp = f.kind == "cusp";
  const std::vector<int> ks = parse_k_list(f.k, "--k");
  if (f.n < 2) throw UsageError("--n", "n must be >= 2");
  if (cusp && f.n != 2) throw UsageError("--n", "the cusp bound is defined for n = 2 only");
  for (int k : ks) {
    if (cusp && k < 6) throw UsageError("--k", "bound cusp requires k >= 6 (got " + std::to_string(k) + ")");
    if (!cusp && k < 2 * f.n + 2) {
      throw UsageError("--k", "bound cocompact requires k >= 2n+2 = " + std::to_string(2 * f.n + 2) + " (got " +
                                  std::to_string(k) + ")");
    }
  }
  if (!(f.rx > 0.0)) throw UsageError("--rx", "r_X must be positive");
  if (f.lattice_sum && !(f.tol > 0.0 && f.tol <= 1e-3)) throw UsageError("--tol", "rel_tol must lie in (0, 1e-3]");
  if (f.fit && std::set<int>(ks.begin(), ks.end()).size() < 5) throw UsageError("--fit", "needs at least 5 distinct k");
  const ConstantModel cm = f.constants.model();
  const LatticeSpec spec = f.lattice.spec();
  Theorem3Options opts;
  opts.cusp = parse_cusp_term(f.cusp_term);
  opts.with_lattice_sum = f.lattice_sum;
  opts.lattice_rel_tol = f.tol;
  opts.jobs = 1;

  std::map<std::string, std::string> cfg;
  common.echo(cfg);
  cfg["n"] = std::to_string(f.n);
  cfg["k"] = f.k;
  cfg["rx"] = fmt(f.rx);
  cfg["fit"] = f.fit ? "true" : "false";
  f.constants.echo(cfg);
  if (cusp) {
    cfg["cusp_term"] = f.cusp_term;
    cfg["lattice_sum"] = f.lattice_sum ? "true" : "false";
    if (f.lattice_sum) {
      cfg["tol"] = fmt(f.tol);
      f.lattice.echo(cfg);
    }
  }
  w.header("bound " + f.kind, cfg);

  std::vector<BoundReport> reports(ks.size());
  parallel_for(ks.size(), common.jobs, [&](std::size_t i) {
    reports[i] = cusp ? theorem3_bound(ks[i], f.rx, cm, spec, opts) : cocompact_bound(f.n, ks[i], f.rx, cm);
  });
  std::vector<LogReal> totals;
  for (const BoundReport& r : reports) {
    Record rec{{"k", static_cast<long long>(r.k)}};
    for (const auto& [name, value] : r.terms) rec.emplace_back("log_" + name, log_of(value));
    rec.emplace_back("log_total", log_of(r.total));
    rec.emplace_back("normalized_total", r.normalized_total.value());
    if (r.lattice_alternative) {
      rec.emplace_back("log_lattice_alternative", log_of(*r.lattice_alternative));
      rec.emplace_back("cusp_dominates_lattice", *r.cusp_dominates_lattice);
    }
    w.record("bound", rec);
    totals.push_back(r.total);
  }
  if (f.fit) {
    const ScalingFit fit = scaling_fit(ks, totals);
    w.record("fit", {{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual},
                     {"points", static_cast<long long>(ks.size())}});
  }
  return 0;
}

// ---------------------------------------------------------------- lattice-sum

struct LatticeSumFlags {
  std::string k = "6";
  double tol = 1e-8;
  LatticeFlags lattice;
};

int cmd_lattice_sum(const Common& common, const LatticeSumFlags& f, ReportWriter& w, std::ostream& err) {
  const std::vector<int> ks = parse_k_list(f.k, "--k");
  for (int k : ks) {
    if (k < 6) throw UsageError("--k", "lattice-sum requires k >= 6 (got " + std::to_string(k) + ")");
  }
  if (!(f.tol > 0.0 && f.tol <= 1e-3)) throw UsageError("--tol", "rel_tol must lie in (0, 1e-3]");
  const LatticeSpec spec = f.lattice.spec();
  std::map<std::string, std::string> cfg;
  common.echo(cfg);
  cfg["k"] = f.k;
  cfg["tol"] = fmt(f.tol);
  f.lattice.echo(cfg);
  w.header("lattice-sum", cfg);

  std::vector<LatticeSumResult> results(ks.size());
  parallel_for(ks.size(), common.jobs, [&](std::size_t i) { results[i] = cusp_lattice_sum(ks[i], spec, f.tol, 1); });
  const double covolume = lattice_covolume(spec);
  bool all = true;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const LatticeSumResult& r = results[i];
    const LogReal majorant = cusp_integral_majorant(ks[i]);
    const bool dominated = r.value * LogReal(covolume) <= majorant;
    all = all && dominated;
    w.record("lattice_sum", {{"k", static_cast<long long>(ks[i])},
                             {"log_sum", log_of(r.value)},
                             {"sum", r.value.value()},
                             {"R_alpha", r.R_alpha},
                             {"R_beta", r.R_beta},
                             {"tail_bound", r.tail_bound},
                             {"terms", r.terms},
                             {"covolume", covolume},
                             {"log_majorant", log_of(majorant)},
                             {"dominated", dominated}});
  }
  log(err, LogLevel::Info, std::string("lattice-sum: majorant domination ") + (all ? "holds" : "fails"));
  return 0;
}

// ---------------------------------------------------------------- gamma-chain

int cmd_gamma_chain(const Common& common, const std::string& k_text, ReportWriter& w) {
  const std::vector<int> ks = parse_k_list(k_text, "--k");
  for (int k : ks) {
    if (k < 6) throw UsageError("--k", "gamma-chain requires k >= 6 (got " + std::to_string(k) + ")");
  }
  std::map<std::string, std::string> cfg;
  common.echo(cfg);
  cfg["k"] = k_text;
  w.header("gamma-chain", cfg);
  std::vector<GammaChain> chains(ks.size());
  parallel_for(ks.size(), common.jobs, [&](std::size_t i) { chains[i] = gamma_integral_chain(ks[i]); });
  for (const GammaChain& g : chains) {
    w.record("gamma_chain", {{"k", static_cast<long long>(g.k)},
                             {"beta_closed", g.beta_closed},
                             {"beta_quad", g.beta_quad},
                             {"beta_ratio", g.beta_quad / g.beta_closed},
                             {"log_r_closed", log_of(g.r_closed)},
                             {"log_r_quad", log_of(g.r_quad)},
                             {"r_ratio", g.r_ratio},
                             {"log_chained", log_of(g.chained)},
                             {"log_double_quad", log_of(g.double_quad)},
                             {"double_quad_ratio", (g.double_quad / g.chained).value()}});
  }
  return 0;
}

// ---------------------------------------------------------------- count

struct CountFlags {
  std::string delta = "0..4:0.5";
  std::string rx = "auto";
  int k = 6;
  LatticeFlags lattice;
};

int cmd_count(const Common& common, const CountFlags& f, ReportWriter& w, std::ostream& err) {
  const std::vector<double> deltas = parse_grid(f.delta, "--delta");
  for (double d : deltas) {
    if (d < 0.0) throw UsageError("--delta", "delta must be nonnegative");
  }
  if (f.k < 1) throw UsageError("--k", "k must be >= 1");
  const LatticeSpec spec = f.lattice.spec();
  const OrbitSource src(spec);
  const double u = f.k / (2.0 * kPi);
  const ModelPoint z(Model::M3, {Complex(-u / 2.0, 0.0), Complex(0.0, 0.0)});
  double rx = 0.0;
  if (f.rx == "auto") {
    rx = local_injectivity_radius(src, z);
  } else {
    rx = parse_double(f.rx, "--rx");
    if (!(rx > 0.0)) throw UsageError("--rx", "r_X must be positive or 'auto'");
  }
  log(err, LogLevel::Info, "count: r_X = " + fmt(rx));

  std::map<std::string, std::string> cfg;
  common.echo(cfg);
  cfg["delta"] = f.delta;
  cfg["rx"] = f.rx;
  cfg["k"] = std::to_string(f.k);
  f.lattice.echo(cfg);
  w.header("count", cfg);

  std::vector<long long> counts(deltas.size());
  parallel_for(deltas.size(), common.jobs, [&](std::size_t i) { counts[i] = counting_function(src, z, z, deltas[i]); });
  bool all = true;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    const double bound = counting_upper_bound(2, rx, deltas[i]);
    const bool dominated = static_cast<double>(counts[i]) <= bound;
    all = all && dominated;
    w.record("count", {{"delta", deltas[i]},
                       {"enumerated", counts[i]},
                       {"bound", bound},
                       {"rx", rx},
                       {"dominated", dominated}});
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------------- maxima

int cmd_maxima(const Common& common, const std::string& k_text, double tol, ReportWriter& w) {
  const std::vector<int> ks = parse_k_list(k_text, "--k");
  for (int k : ks) {
    if (k < 1) throw UsageError("--k", "maxima requires k >= 1 (got " + std::to_string(k) + ")");
  }
  if (!(tol > 0.0)) throw UsageError("--tol", "tol must be positive");
  std::map<std::string, std::string> cfg;
  common.echo(cfg);
  cfg["k"] = k_text;
  cfg["tol"] = fmt(tol);
  w.header("maxima", cfg);
  std::vector<std::optional<MaximaResult>> results(ks.size());
  parallel_for(ks.size(), common.jobs, [&](std::size_t i) { results[i] = maxima_locate(ks[i], tol); });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const int k = ks[i];
    const MaximaResult& r = *results[i];
    const double target = -k / (4.0 * kPi);
    w.record("maxima", {{"k", static_cast<long long>(k)},
                        {"re_z1", r.point[0].real()},
                        {"re_z2", r.point[1].real()},
                        {"im_z2", r.point[1].imag()},
                        {"expected_re_z1", target},
                        {"rel_error", std::abs(r.point[0].real() - target) / std::abs(target)},
                        {"log_value", r.log_value},
                        {"expected_log_value", k * std::log(k / (2.0 * kPi)) - k}});
  }
  return 0;
}

// ---------------------------------------------------------------- fit

struct FitFlags {
  std::string what = "theorem3";
  int n = 2;
  std::string k = "50..400";
  double rx = 8.0;
  std::string cusp_term = "chained";
  std::optional<double> expect;
  double expect_tol = 0.05;
  ConstantFlags constants;
};

int cmd_fit(const Common& common, const FitFlags& f, ReportWriter& w) {
  const std::vector<int> ks = parse_k_list(f.k, "--k");
  if (std::set<int>(ks.begin(), ks.end()).size() < 5) throw UsageError("--k", "fit needs at least 5 distinct k");
  if (!(f.rx > 0.0)) throw UsageError("--rx", "r_X must be positive");
  const ConstantModel cm = f.constants.model();
  const CuspTerm variant = parse_cusp_term(f.cusp_term);
  std::function<LogReal(int)> bound;
  if (f.what == "cocompact") {
    if (f.n < 2) throw UsageError("--n", "n must be >= 2");
    for (int k : ks) {
      if (k < 2 * f.n + 2) throw UsageError("--k", "cocompact fit requires k >= 2n+2 (got " + std::to_string(k) + ")");
    }
    bound = [&](int k) { return cocompact_bound(f.n, k, f.rx, cm).total; };
  } else if (f.what == "theorem3" || f.what == "cusp-term") {
    for (int k : ks) {
      if (k < 6) throw UsageError("--k", f.what + " fit requires k >= 6 (got " + std::to_string(k) + ")");
    }
    if (f.what == "theorem3") {
      Theorem3Options opts;
      opts.cusp = variant;
      bound = [&, opts](int k) { return theorem3_bound(k, f.rx, cm, LatticeSpec::gaussian(), opts).total; };
    } else {
      bound = [&](int k) { return cm.at(k) * cusp_term_factor(k, variant); };
    }
  } else {
    throw UsageError("--what", "expected cocompact, theorem3 or cusp-term, got '" + f.what + "'");
  }
  if (f.expect && !(f.expect_tol > 0.0)) throw UsageError("--expect-tol", "tolerance must be positive");

  std::map<std::string, std::string> cfg;
  common.echo(cfg);
  cfg["what"] = f.what;
  cfg["k"] = f.k;
  cfg["rx"] = fmt(f.rx);
  if (f.what == "cocompact") cfg["n"] = std::to_string(f.n);
  if (f.what != "cocompact") cfg["cusp_term"] = f.cusp_term;
  f.constants.echo(cfg);
  if (f.expect) {
    cfg["expect"] = fmt(*f.expect);
    cfg["expect_tol"] = fmt(f.expect_tol);
  }
  w.header("fit", cfg);

  std::vector<LogReal> values(ks.size());
  parallel_for(ks.size(), common.jobs, [&](std::size_t i) { values[i] = bound(ks[i]); });
  for (std::size_t i = 0; i < ks.size(); ++i) {
    w.record("point", {{"k", static_cast<long long>(ks[i])}, {"log_value", log_of(values[i])}});
  }
  const ScalingFit fit = scaling_fit(ks, values);
  Record rec{{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual},
             {"points", static_cast<long long>(ks.size())}};
  bool pass = true;
  if (f.expect) {
    pass = std::abs(fit.slope - *f.expect) <= f.expect_tol;
    rec.emplace_back("pass", pass);
  }
  w.record("fit", rec);
  return pass ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex hyperbolic geometry, Heisenberg lattice sums and Bergman-kernel bound pipelines"};
  app.name("pbl");
  app.require_subcommand(1, 1);

  Common common;
  app.add_option("--seed", common.seed, "seed of every random sample");
  app.add_option("--jobs", common.jobs, "worker threads (0: available parallelism)")->check(CLI::NonNegativeNumber);
  app.add_option("--out", common.out, "write the report to this file instead of standard output");
  app.add_option("--format", common.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--config", common.config, "flat key=value file; command-line flags take precedence");

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  VerifyFlags verify;
  CLI::App* verify_cmd = sub("verify", "run the identity suite");
  verify_cmd->add_option("--curvature-step", verify.curvature_step, "finite-difference step of the curvature check");
  verify_cmd->add_option("--perturb-gamma3", verify.perturb_gamma3, "self-test: add this to gamma3(0,0)");

  BoundFlags bound;
  CLI::App* bound_cmd = sub("bound", "cocompact or cusp bound reports");
  bound_cmd->add_option("kind", bound.kind, "cocompact or cusp")->required()->check(CLI::IsMember({"cocompact", "cusp"}));
  bound_cmd->add_option("--n", bound.n, "complex dimension");
  bound_cmd->add_option("--k", bound.k, "weight k or range a..b");
  bound_cmd->add_option("--rx", bound.rx, "injectivity radius r_X");
  bound_cmd->add_flag("--fit", bound.fit, "append a scaling fit of the totals");
  bound_cmd->add_option("--cusp-term", bound.cusp_term, "chained or printed Gamma prefactor");
  bound_cmd->add_flag("--lattice-sum", bound.lattice_sum, "attach the certified lattice sum (cusp only)");
  bound_cmd->add_option("--tol", bound.tol, "relative tolerance of the lattice sum");
  bound.constants.add(bound_cmd);
  bound.lattice.add(bound_cmd);

  LatticeSumFlags lsum;
  CLI::App* lsum_cmd = sub("lattice-sum", "certified cusp lattice sum");
  lsum_cmd->add_option("--k", lsum.k, "weight k or range a..b");
  lsum_cmd->add_option("--tol", lsum.tol, "relative truncation tolerance");
  lsum.lattice.add(lsum_cmd);

  std::string gamma_k = "6";
  CLI::App* gamma_cmd = sub("gamma-chain", "closed forms versus quadrature of the cusp integrals");
  gamma_cmd->add_option("--k", gamma_k, "weight k or range a..b");

  CountFlags count;
  CLI::App* count_cmd = sub("count", "orbit counts versus the counting bound on a delta grid");
  count_cmd->add_option("--delta", count.delta, "grid a..b:step or a single value");
  count_cmd->add_option("--rx", count.rx, "r_X value or 'auto' (local injectivity radius)");
  count_cmd->add_option("--k", count.k, "the base point lies on the maximum set for this k");
  count.lattice.add(count_cmd);

  std::string maxima_k = "6";
  double maxima_tol = 1e-6;
  CLI::App* maxima_cmd = sub("maxima", "locate the maximum of the Petersson objective");
  maxima_cmd->add_option("--k", maxima_k, "weight k or range a..b");
  maxima_cmd->add_option("--tol", maxima_tol, "relative location tolerance");

  FitFlags fit;
  CLI::App* fit_cmd = sub("fit", "power-law exponent of a bound over a k range");
  fit_cmd->add_option("--what", fit.what, "cocompact, theorem3 or cusp-term");
  fit_cmd->add_option("--n", fit.n, "complex dimension (cocompact)");
  fit_cmd->add_option("--k", fit.k, "range a..b");
  fit_cmd->add_option("--rx", fit.rx, "injectivity radius r_X");
  fit_cmd->add_option("--cusp-term", fit.cusp_term, "chained or printed Gamma prefactor");
  fit_cmd->add_option("--expect", fit.expect, "exit 1 unless the slope is within --expect-tol of this");
  fit_cmd->add_option("--expect-tol", fit.expect_tol, "tolerance for --expect");
  fit.constants.add(fit_cmd);

  try {
    std::vector<std::string> args = merge_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::ostringstream buffer;
  const Format format = common.format == "csv" ? Format::Csv : Format::Jsonl;
  ReportWriter writer(buffer, format);
  int code = 0;
  try {
    if (*verify_cmd) {
      code = cmd_verify(common, verify, writer);
    } else if (*bound_cmd) {
      code = cmd_bound(common, bound, writer);
    } else if (*lsum_cmd) {
      code = cmd_lattice_sum(common, lsum, writer, err);
    } else if (*gamma_cmd) {
      code = cmd_gamma_chain(common, gamma_k, writer);
    } else if (*count_cmd) {
      code = cmd_count(common, count, writer, err);
    } else if (*maxima_cmd) {
      code = cmd_maxima(common, maxima_k, maxima_tol, writer);
    } else if (*fit_cmd) {
      code = cmd_fit(common, fit, writer);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const CertificationError& e) {
    err << "error: " << e.what() << " (certified lower bound " << e.lower_bound() << ")\n";
    return 3;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: internal failure: " << e.what() << "\n";
    return 3;
  }

  if (common.out.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(common.out, std::ios::binary);
    if (!file) {
      err << "error: --out: cannot open '" << common.out << "' for writing\n";
      return 2;
    }
    file << buffer.str();
  }
  log(err, LogLevel::Info, "exit code " + std::to_string(code));
  return code;
}

}  // namespace pbl::cli
