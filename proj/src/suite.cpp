#include "carflow/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "carflow/kernels.hpp"

namespace carflow::suite {

using json = nlohmann::json;
using lattice::Window;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kArtifactVersion = "0.1.0";

const std::vector<std::string> kChecks = {
    "car_relations",     "second_quantization",    "kernel_decomposition",
    "fiber_isometry",    "multiplicativity",       "opposite_transport",
    "defining_relation", "semigroup",              "symmetry_classification",
    "symmetry_witness"};

Point parse_point(const json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError(where + ": expected an array of " + std::to_string(dim) +
                      " integers");
  Point p(dim);
  for (int i = 0; i < dim; ++i) {
    if (!j[i].is_number_integer())
      throw ConfigError(where + ": lattice coordinates must be integers");
    p[i] = j[i].get<int>();
  }
  return p;
}

Window parse_box(const json& j, int dim, const std::string& where) {
  if (!j.is_object() || !j.contains("lower") || !j.contains("upper"))
    throw ConfigError(where + ": expected an object with 'lower' and 'upper'");
  Window w;
  w.lo = parse_point(j["lower"], dim, where + ".lower");
  w.hi = parse_point(j["upper"], dim, where + ".upper");
  for (int i = 0; i < dim; ++i)
    if (w.lo[i] > w.hi[i]) throw ConfigError(where + ": corners inverted");
  return w;
}

}  // namespace

const std::vector<std::string>& default_checks() { return kChecks; }

lattice::ConeSpec ExperimentConfig::cone() const {
  return lattice::ConeSpec(dimension, cone_generators);
}

lattice::ModuleSpec ExperimentConfig::module() const {
  if (module_form == "halfspaces")
    return lattice::ModuleSpec::halfspaces(dimension, module_halfspaces);
  return lattice::ModuleSpec::translates(cone(), module_origins);
}

int ExperimentConfig::fock_cap_modes() const {
  int m = 0;
  while ((1LL << (m + 1)) <= fock_cap) ++m;
  return std::min(m, kMaxFockModes);
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("syntax error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (!j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != kSchemaVersion)
    throw ConfigError("config requires \"version\": 1");

  ExperimentConfig cfg;
  if (!j.contains("cone") || !j["cone"].is_object())
    throw ConfigError("missing \"cone\" object");
  const json& jc = j["cone"];
  if (!jc.contains("dimension") || !jc["dimension"].is_number_integer())
    throw ConfigError("cone.dimension: expected an integer");
  cfg.dimension = jc["dimension"].get<int>();
  if (cfg.dimension < 1 || cfg.dimension > 6)
    throw ConfigError("cone.dimension must be in 1..6");
  if (!jc.contains("generators") || !jc["generators"].is_array() ||
      jc["generators"].empty())
    throw ConfigError("cone.generators: expected a nonempty array");
  for (std::size_t i = 0; i < jc["generators"].size(); ++i)
    cfg.cone_generators.push_back(parse_point(
        jc["generators"][i], cfg.dimension, "cone.generators[" + std::to_string(i) + "]"));

  const lattice::ConeValidation cv = cfg.cone().validate();
  if (!cv.ok()) {
    std::string msg = "cone validation failed:";
    for (const auto& s : cv.issues) msg += " " + s + ";";
    throw ConfigError(msg);
  }

  if (!j.contains("module") || !j["module"].is_object())
    throw ConfigError("missing \"module\" object");
  const json& jm = j["module"];
  if (!jm.contains("form") || !jm["form"].is_string())
    throw ConfigError("module.form: expected \"halfspaces\" or \"translates\"");
  cfg.module_form = jm["form"].get<std::string>();
  if (cfg.module_form == "halfspaces") {
    if (!jm.contains("halfspaces") || !jm["halfspaces"].is_array() ||
        jm["halfspaces"].empty())
      throw ConfigError("module.halfspaces: expected a nonempty array");
    for (std::size_t i = 0; i < jm["halfspaces"].size(); ++i) {
      const json& jh = jm["halfspaces"][i];
      const std::string where = "module.halfspaces[" + std::to_string(i) + "]";
      if (!jh.is_object() || !jh.contains("normal") || !jh.contains("offset"))
        throw ConfigError(where + ": expected {normal, offset}");
      if (!jh["offset"].is_number_integer())
        throw ConfigError(where + ".offset: must be an integer");
      lattice::ModuleSpec::Halfspace h;
      h.normal = parse_point(jh["normal"], cfg.dimension, where + ".normal");
      h.offset = jh["offset"].get<long long>();
      for (const Point& g : cfg.cone_generators)
        if (lattice::dot(h.normal, g) < 0)
          throw ConfigError(where + ": normal " + lattice::to_string(h.normal) +
                            " pairs negatively with cone generator " +
                            lattice::to_string(g) + "; not in the dual cone, so A+P<=A fails");
      cfg.module_halfspaces.push_back(std::move(h));
    }
  } else if (cfg.module_form == "translates") {
    if (!jm.contains("origins") || !jm["origins"].is_array() || jm["origins"].empty())
      throw ConfigError("module.origins: expected a nonempty array");
    for (std::size_t i = 0; i < jm["origins"].size(); ++i)
      cfg.module_origins.push_back(parse_point(
          jm["origins"][i], cfg.dimension, "module.origins[" + std::to_string(i) + "]"));
  } else {
    throw ConfigError("module.form: unknown form \"" + cfg.module_form + "\"");
  }

  if (!j.contains("window")) throw ConfigError("missing \"window\"");
  cfg.window = parse_box(j["window"], cfg.dimension, "window");
  if (!j.contains("search_box")) throw ConfigError("missing \"search_box\"");
  cfg.search_box = parse_box(j["search_box"], cfg.dimension, "search_box");

  if (j.contains("tolerance")) {
    if (!j["tolerance"].is_number()) throw ConfigError("tolerance: expected a number");
    cfg.tolerance = j["tolerance"].get<double>();
    if (!(cfg.tolerance > 0)) throw ConfigError("tolerance must be positive");
  }
  if (j.contains("fock_cap")) {
    if (!j["fock_cap"].is_number_integer())
      throw ConfigError("fock_cap: expected an integer");
    cfg.fock_cap = j["fock_cap"].get<long long>();
    if (cfg.fock_cap < 2) throw ConfigError("fock_cap must be at least 2");
    if (cfg.fock_cap > (1LL << kMaxFockModes))
      throw ConfigError("fock_cap exceeds 2^14");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
      throw ConfigError("seed: expected a 64-bit integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("suite")) {
    if (!j["suite"].is_array()) throw ConfigError("suite: expected an array of check names");
    for (const auto& name : j["suite"]) {
      if (!name.is_string()) throw ConfigError("suite: check names must be strings");
      const std::string n = name.get<std::string>();
      if (std::find(kChecks.begin(), kChecks.end(), n) == kChecks.end())
        throw ConfigError("suite: unknown check \"" + n + "\"");
      cfg.checks.push_back(n);
    }
  } else {
    cfg.checks = kChecks;
  }
  return cfg;
}

json config_json(const ExperimentConfig& cfg) {
  json j;
  j["version"] = kSchemaVersion;
  j["cone"] = {{"dimension", cfg.dimension}, {"generators", cfg.cone_generators}};
  json jm;
  jm["form"] = cfg.module_form;
  if (cfg.module_form == "halfspaces") {
    json arr = json::array();
    for (const auto& h : cfg.module_halfspaces)
      arr.push_back({{"normal", h.normal}, {"offset", h.offset}});
    jm["halfspaces"] = arr;
  } else {
    jm["origins"] = cfg.module_origins;
  }
  j["module"] = jm;
  j["window"] = {{"lower", cfg.window.lo}, {"upper", cfg.window.hi}};
  j["search_box"] = {{"lower", cfg.search_box.lo}, {"upper", cfg.search_box.hi}};
  j["tolerance"] = cfg.tolerance;
  j["fock_cap"] = cfg.fock_cap;
  j["seed"] = cfg.seed;
  j["suite"] = cfg.checks;
  return j;
}

Window fock_window(const lattice::ModuleSpec& a, const Window& w, int max_modes) {
  Window fw = w;
  bool hi_side = true;
  while (true) {
    long long count = 0;
    for (const Point& p : fw.points())
      if (a.contains(p)) ++count;
    if (count <= max_modes) return fw;
    int axis = -1, best = -1;
    for (int i = 0; i < fw.dim(); ++i) {
      const int extent = fw.hi[i] - fw.lo[i];
      if (extent > best) {
        best = extent;
        axis = i;
      }
    }
    if (best <= 0)
      throw CapExceeded("fock_window: cannot fit " + std::to_string(count) +
                        " carrier points under " + std::to_string(max_modes) + " modes");
    if (hi_side)
      --fw.hi[axis];
    else
      ++fw.lo[axis];
    hi_side = !hi_side;
  }
}

namespace {

struct SuiteContext {
  ExperimentConfig cfg;
  lattice::ConeSpec cone;
  lattice::ModuleSpec module;
  Window fock_win;
  lattice::ShiftRep rep;

  SuiteContext(const ExperimentConfig& c)
      : cfg(c),
        cone(c.cone()),
        module(c.module()),
        fock_win(fock_window(module, c.window, c.fock_cap_modes())),
        rep(lattice::ShiftRep::forward(module)) {}

  flow::FlowContext flow_ctx() const {
    return flow::make_context(module, cone, fock_win, cfg.fock_cap_modes());
  }

  // shifts sorted by (|x|_1, lex) whose kernel slice has 1..max_kernel modes
  std::vector<Point> kernel_shifts(int want, int max_kernel = 4) const {
    std::vector<Point> all = cone.elements_up_to(3);
    std::stable_sort(all.begin(), all.end(), [](const Point& a, const Point& b) {
      return lattice::norm1(a) < lattice::norm1(b);
    });
    std::vector<Point> out;
    for (const Point& x : all) {
      const std::size_t k = rep.kernel_points(x, fock_win).size();
      if (k >= 1 && k <= static_cast<std::size_t>(max_kernel)) out.push_back(x);
      if (static_cast<int>(out.size()) == want) break;
    }
    if (out.empty())
      throw WindowTooSmall("no cone element with a small nonempty kernel slice; "
                           "enlarge the window");
    while (static_cast<int>(out.size()) < want) out.push_back(out.back());
    return out;
  }
};

std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << std::setfill('0') << std::setw(16) << v;
  return os.str();
}

cplx sp_inner(const fock::SpVector& a, const fock::SpVector& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

void check_car_relations(const SuiteContext& sc, SplitMix64& rng, CheckRecord& rec) {
  const int n = std::max(2, std::min(10, static_cast<int>(
                                             sc.rep.carrier_points(sc.fock_win).size())));
  const fock::FockOperator id = fock::FockOperator::identity(n);
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const fock::SpVector f = fock::random_sp_vector(rng, n);
    const fock::SpVector g = fock::random_sp_vector(rng, n);
    const cplx fg = sp_inner(f, g);
    fock::FockOperator mixed =
        fock::anticommutator(fock::annihilation(f), fock::creation(g));
    fock::FockOperator expect = id;
    expect *= fg;
    worst = std::max(worst, fock::distance(mixed, expect));
    const fock::FockOperator same =
        fock::anticommutator(fock::annihilation(f), fock::annihilation(g));
    worst = std::max(worst, same.frobenius());
  }
  rec.residual = worst;
  rec.verdict = worst <= sc.cfg.tolerance ? "pass" : "fail";
}

void check_second_quantization(const SuiteContext& sc, SplitMix64& rng,
                               CheckRecord& rec) {
  double worst = 0;
  const int shapes[][3] = {{5, 4, 2}, {6, 4, 3}, {5, 3, 2}};
  for (const auto& s : shapes) {
    const DenseMatrix w1 = random_isometry(rng, s[0], s[1]);
    const DenseMatrix w2 = random_isometry(rng, s[1], s[2]);
    const fock::FockOperator lhs = fock::second_quantization(w1 * w2);
    const fock::FockOperator rhs =
        fock::second_quantization(w1) * fock::second_quantization(w2);
    worst = std::max(worst, fock::distance(lhs, rhs));
  }
  const DenseMatrix u = random_isometry(rng, 4, 4);
  worst = std::max(worst, fock::distance(fock::second_quantization(u).adjoint(),
                                         fock::second_quantization(u.adjoint())));
  rec.residual = worst;
  rec.verdict = worst <= sc.cfg.tolerance ? "pass" : "fail";
}

void check_kernel_decomposition(const SuiteContext& sc, SplitMix64& rng,
                                CheckRecord& rec) {
  const std::vector<Point> pool = sc.cone.elements_up_to(2);
  long long violations = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const Point& x = pool[rng.below(pool.size())];
    const Point& y = pool[rng.below(pool.size())];
    const lattice::SetIdentityReport rep =
        lattice::kernel_decomposition_check(sc.module, x, y, sc.cfg.window);
    violations += static_cast<long long>(rep.missing.size() + rep.extra.size() +
                                         rep.overlap.size());
  }
  rec.residual = static_cast<double>(violations);
  rec.verdict = violations == 0 ? "pass" : "fail";
}

void check_fiber_isometry(const SuiteContext& sc, SplitMix64& rng, CheckRecord& rec) {
  const product::Ambient h =
      product::make_ambient(sc.rep, sc.fock_win, sc.cfg.fock_cap_modes());
  double worst = 0;
  for (const Point& x : sc.kernel_shifts(2)) {
    const product::Fiber fib = product::fiber(sc.rep, x, sc.fock_win);
    for (int trial = 0; trial < 10; ++trial) {
      const product::PSElement ef = product::random_element(rng, fib);
      const product::PSElement eg = product::random_element(rng, fib);
      const product::Embedding tf =
          product::left_embedding(h, ef, product::Convention::literal);
      const product::Embedding tg =
          product::left_embedding(h, eg, product::Convention::literal);
      fock::FockOperator prod = tg.op.adjoint() * tf.op;
      fock::FockOperator expect = fock::FockOperator::identity(h.mode_count());
      expect *= fock::inner(eg.vec, ef.vec);  // conjugate-linear in the first slot
      const Mask v = tf.valid_sources;
      worst = std::max(
          worst, fock::distance(prod.restricted(v, v), expect.restricted(v, v)));
    }
  }
  rec.residual = worst;
  rec.verdict = worst <= sc.cfg.tolerance ? "pass" : "fail";
}

void check_multiplicativity(const SuiteContext& sc, SplitMix64& rng, CheckRecord& rec) {
  const product::Ambient h =
      product::make_ambient(sc.rep, sc.fock_win, sc.cfg.fock_cap_modes());
  const std::vector<Point> shifts = sc.kernel_shifts(2);
  const Point& x = shifts[0];
  const Point& y = shifts[0];

  json table;
  double worst = 0;
  bool pass = true;
  const char* parity_name[2] = {"even", "odd"};
  for (product::Convention c :
       {product::Convention::literal, product::Convention::parity_twisted}) {
    const product::SignTable t =
        product::multiplicativity_table(h, x, y, c, rng, sc.cfg.tolerance);
    json jt;
    for (const product::SignEntry& e : t.entries) {
      const std::string key =
          std::string(parity_name[e.left_parity]) + "_" + parity_name[e.right_parity];
      jt[key] = e.sign;
      worst = std::max(worst, e.residual);
      if (e.sign == 0) pass = false;
      if (e.left_parity == 0 && e.sign != +1) pass = false;
    }
    table[c == product::Convention::literal ? "literal" : "twisted"] = jt;
  }
  rec.sign_table = table;
  rec.residual = worst;
  rec.verdict = pass ? "pass" : "fail";
}

void check_opposite_transport(const SuiteContext& sc, SplitMix64& rng,
                              CheckRecord& rec) {
  const std::vector<Point> shifts = sc.kernel_shifts(2);
  double worst = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const product::Fiber f1 =
        product::fiber(sc.rep, shifts[rng.below(shifts.size())], sc.fock_win);
    const product::Fiber f2 =
        product::fiber(sc.rep, shifts[rng.below(shifts.size())], sc.fock_win);
    const product::PSElement e1 = product::random_element(rng, f1);
    const product::PSElement e2 = product::random_element(rng, f2);
    worst = std::max(worst, product::transport_antihom_residual(e1, e2));
    worst = std::max(worst,
                     std::abs(product::opposite_transport(e1).norm() - e1.norm()));
    // reflection composite: multiplicative into the shift system of -(A^c)
    const product::PSElement lhs = product::reflect_to_opposite_module(
        product::opposite_transport(product::forward_product(e1, e2)));
    const product::PSElement rhs = product::forward_product(
        product::reflect_to_opposite_module(product::opposite_transport(e2)),
        product::reflect_to_opposite_module(product::opposite_transport(e1)));
    worst = std::max(worst, product::element_distance(lhs, rhs));
  }
  rec.residual = worst;
  rec.verdict = worst <= sc.cfg.tolerance ? "pass" : "fail";
}

void check_defining_relation(const SuiteContext& sc, SplitMix64& rng,
                             CheckRecord& rec) {
  const flow::FlowContext ctx = sc.flow_ctx();
  double worst = 0;
  for (const Point& x : sc.cone.elements_up_to(3)) {
    const flow::FlowResult probe = flow::flow_action(
        ctx, x, fock::FockOperator::identity(ctx.modes()));
    if (probe.valid_sources == 0) continue;
    for (int trial = 0; trial < 2; ++trial) {
      fock::SpVector f = fock::random_sp_vector(rng, ctx.modes());
      for (int j = 0; j < ctx.modes(); ++j)
        if (!((probe.valid_sources >> j) & 1)) f[j] = 0;
      worst = std::max(worst, flow::defining_relation_residual(ctx, x, f));
    }
  }
  rec.residual = worst;
  rec.verdict = worst <= sc.cfg.tolerance ? "pass" : "fail";
}

void check_semigroup(const SuiteContext& sc, SplitMix64&, CheckRecord& rec) {
  const flow::FlowContext ctx = sc.flow_ctx();
  std::vector<std::pair<Point, Point>> pairs;
  const std::vector<Point> small = sc.cone.elements_up_to(2);
  for (const Point& x : small) {
    for (const Point& y : small) {
      if (lattice::norm1(lattice::add(x, y)) > 3) continue;
      pairs.push_back({x, y});
      if (pairs.size() >= 8) break;
    }
    if (pairs.size() >= 8) break;
  }
  double worst = 0;
  for (const auto& [x, y] : pairs)
    worst = std::max(worst, flow::semigroup_residual(ctx, x, y));
  rec.residual = worst;
  rec.verdict = worst <= 10 * sc.cfg.tolerance ? "pass" : "fail";
}

void check_symmetry_classification(const SuiteContext& sc, SplitMix64&,
                                   CheckRecord& rec) {
  const lattice::SymmetryResult r =
      lattice::symmetry_check(sc.module, sc.cfg.search_box, sc.cfg.window);
  rec.witness = r.witness;
  rec.verdict = "pass";
}

void check_symmetry_witness(const SuiteContext& sc, SplitMix64& rng, CheckRecord& rec) {
  const lattice::SymmetryResult r =
      lattice::symmetry_check(sc.module, sc.cfg.search_box, sc.cfg.window);
  if (!r.witness) {
    rec.verdict = "skip: no witness in box";
    return;
  }
  rec.witness = r.witness;
  const flow::WitnessCheck wc = flow::symmetry_witness_check(
      sc.module, *r.witness, sc.cfg.window, sc.fock_win, sc.kernel_shifts(2), rng, 25,
      sc.cfg.fock_cap_modes());
  const double worst = std::max(wc.max_residual, wc.max_norm_defect);
  rec.residual = worst;
  rec.verdict = worst <= sc.cfg.tolerance ? "pass" : "fail";
}

using CheckFn = void (*)(const SuiteContext&, SplitMix64&, CheckRecord&);

CheckFn check_body(const std::string& name) {
  if (name == "car_relations") return check_car_relations;
  if (name == "second_quantization") return check_second_quantization;
  if (name == "kernel_decomposition") return check_kernel_decomposition;
  if (name == "fiber_isometry") return check_fiber_isometry;
  if (name == "multiplicativity") return check_multiplicativity;
  if (name == "opposite_transport") return check_opposite_transport;
  if (name == "defining_relation") return check_defining_relation;
  if (name == "semigroup") return check_semigroup;
  if (name == "symmetry_classification") return check_symmetry_classification;
  if (name == "symmetry_witness") return check_symmetry_witness;
  return nullptr;
}

}  // namespace

Report run_suite(const ExperimentConfig& cfg) {
  Report report;
  report.config = cfg;

  const std::string config_digest = config_json(cfg).dump();
  const SuiteContext sc(cfg);

  for (const std::string& name : cfg.checks) {
    CheckRecord rec;
    rec.name = name;
    rec.digest = hex64(fnv1a64(name + ":" + std::to_string(cfg.seed) + ":" + config_digest));
    rec.sign_table = nullptr;
    SplitMix64 rng = check_stream(cfg.seed, name);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      check_body(name)(sc, rng, rec);
    } catch (const CapExceeded& e) {
      rec.verdict = std::string("abort: ") + e.what();
    } catch (const WindowTooSmall& e) {
      rec.verdict = std::string("abort: ") + e.what();
    } catch (const std::invalid_argument& e) {
      rec.verdict = std::string("abort: ") + e.what();
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    report.records.push_back(std::move(rec));
  }

  if (report.records.empty()) {
    report.verdict = "vacuous pass";
  } else {
    bool any_fail = false, any_abort = false;
    for (const auto& r : report.records) {
      any_fail |= r.failed();
      any_abort |= r.aborted();
    }
    report.verdict = any_fail ? "fail" : (any_abort ? "abort" : "pass");
  }
  return report;
}

std::string emit_report_json(const Report& report) {
  json j;
  j["version"] = {{"schema", kSchemaVersion}, {"artifact", kArtifactVersion}};
  j["config"] = config_json(report.config);
  j["verdict"] = report.verdict;
  json records = json::array();
  for (const CheckRecord& r : report.records) {
    json jr;
    jr["name"] = r.name;
    jr["digest"] = r.digest;
    jr["residual"] = r.residual ? json(*r.residual) : json(nullptr);
    jr["witness"] = r.witness ? json(*r.witness) : json(nullptr);
    jr["sign_table"] = r.sign_table;
    jr["verdict"] = r.verdict;
    // wall time is text-only: the JSON report is a byte-reproducible artifact
    jr["elapsed_ms"] = nullptr;
    records.push_back(std::move(jr));
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

std::string emit_report_text(const Report& report) {
  std::ostringstream os;
  os << "carflow suite report (artifact " << kArtifactVersion << ")\n";
  const auto& cfg = report.config;
  os << "  d=" << cfg.dimension << " module=" << cfg.module_form
     << " window=" << lattice::to_string(cfg.window.lo) << ".."
     << lattice::to_string(cfg.window.hi) << " seed=" << cfg.seed
     << " tolerance=" << cfg.tolerance << "\n";
  os << std::string(78, '-') << "\n";
  for (const CheckRecord& r : report.records) {
    os << "  " << std::left << std::setw(26) << r.name;
    os << std::setw(10) << (r.verdict.size() > 28 ? r.verdict.substr(0, 28) : r.verdict);
    if (r.residual)
      os << " residual=" << std::scientific << std::setprecision(3) << *r.residual;
    if (r.witness) os << " witness=" << lattice::to_string(*r.witness);
    if (r.elapsed_ms)
      os << " [" << std::fixed << std::setprecision(1) << *r.elapsed_ms << " ms]";
    os << "\n";
    if (r.verdict.size() > 28) os << "      " << r.verdict << "\n";
    if (r.sign_table.is_object()) {
      for (const auto& [conv, entries] : r.sign_table.items()) {
        os << "      sign table (" << conv << "):";
        for (const auto& [key, val] : entries.items())
          os << "  " << key << ":" << (val.get<int>() > 0 ? "+1" : (val.get<int>() < 0 ? "-1" : "none"));
        os << "\n";
      }
    }
  }
  os << std::string(78, '-') << "\n";
  os << "overall: " << report.verdict << "\n";
  return os.str();
}

Report parse_report(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("report syntax error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("config") || !j.contains("records") ||
      !j.contains("verdict"))
    throw ConfigError("report: missing top-level keys");
  Report report;
  report.config = parse_config(j["config"].dump());
  report.verdict = j["verdict"].get<std::string>();
  for (const json& jr : j["records"]) {
    CheckRecord r;
    r.name = jr.at("name").get<std::string>();
    r.digest = jr.at("digest").get<std::string>();
    if (!jr.at("residual").is_null()) r.residual = jr["residual"].get<double>();
    if (!jr.at("witness").is_null()) r.witness = jr["witness"].get<Point>();
    r.sign_table = jr.at("sign_table");
    r.verdict = jr.at("verdict").get<std::string>();
    report.records.push_back(std::move(r));
  }
  return report;
}

int exit_code(const Report& report) {
  bool any_fail = false, any_abort = false;
  for (const auto& r : report.records) {
    any_fail |= r.failed();
    any_abort |= r.aborted();
  }
  if (any_fail) return 1;
  if (any_abort) return 3;
  return 0;
}

}  // namespace carflow::suite
