#include "cli.hpp"

#include "serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <sstream>

namespace bfree::cli {
namespace {

constexpr const char* kFooter =
    "Output: JSON with \"schema_version\": \"1\" (numbers as decimal strings), or CSV where noted.\n"
    "Exit codes: 0 success, 2 domain or usage error, 3 inconclusive at budget, 1 internal consistency failure.\n"
    "Environment: BFREE_LAB_THREADS sets the worker count.";

struct Result {
  Json json;
  std::string csv; // empty when the command has no CSV form
  int code = 0;
};

using Action = std::function<Result()>;

struct Options {
  // global
  std::string out_path;
  std::string format = "json";
  unsigned precision = 50;
  std::size_t inline_digits = kDefaultInlineDigits;

  // shared
  std::string spec, tau, x, quotients;
  std::uint64_t qmax = 0;

  // qset
  std::uint64_t q = 0, n = 0, bound = 0, scan_bound = kDefaultSupportScanBound;
  std::string nu, grid;
  bool fit = false;

  // liouville
  std::uint64_t p0 = 0, p1 = 0, alpha1 = 0, steps = 0, digit_budget = kDefaultDigitBudget;
  std::string k = "minimal", cert;

  // plane
  std::string a, u = "0", v = "1", y, pq, p, box;
  std::vector<std::string> seeds;

  // dim
  std::string set = "w", s;
  std::uint64_t q0 = 1, q1 = 0;
};

Json header(const std::string& command) {
  Json j;
  j["schema_version"] = std::to_string(kSchemaVersion);
  j["command"] = command;
  return j;
}

Json verdict_json(Verdict v) { return std::string(to_string(v)); }

// -------------------------------------------------------------------------
// cf

ContinuedFraction cf_from(const Options& o) {
  if (!o.x.empty() && !o.quotients.empty())
    throw DomainError("give either --x or --quotients, not both");
  if (!o.x.empty())
    return ContinuedFraction::of_rational(parse_rational(o.x));
  if (o.quotients.empty())
    throw DomainError("one of --x or --quotients is required");
  auto qs = parse_integer_list(o.quotients);
  Integer a0 = qs.front();
  qs.erase(qs.begin());
  return ContinuedFraction::from_quotients(std::move(a0), std::move(qs), Presentation::prefix);
}

Json cf_source(const Options& o, const ContinuedFraction& cf) {
  Json j;
  j["presentation"] = cf.is_exact() ? "exact" : "prefix";
  if (!o.x.empty())
    j["x"] = to_string(parse_rational(o.x));
  else
    j["quotients"] = o.quotients;
  return j;
}

Result cf_expand(const Options& o) {
  if (o.x.empty())
    throw DomainError("cf expand: --x is required");
  const Rational x = parse_rational(o.x);
  const auto e = quotients_of_rational(x);
  Json j = header("cf expand");
  j["x"] = to_string(x);
  j["a0"] = to_string(e.a0);
  j["quotients"] = integers_json(e.quotients, o.inline_digits);
  return {j};
}

Result cf_convergents(const Options& o) {
  const auto cf = cf_from(o);
  Json j = header("cf convergents");
  j["source"] = cf_source(o, cf);
  Json list = Json::array();
  for (std::size_t s = 0; s <= cf.last_index(); ++s) {
    const auto i = static_cast<std::ptrdiff_t>(s);
    list.push_back({{"s", std::to_string(s)},
                    {"a", integer_json(cf.quotient(s), o.inline_digits)},
                    {"p", integer_json(cf.p(i), o.inline_digits)},
                    {"q", integer_json(cf.q(i), o.inline_digits)}});
  }
  j["convergents"] = std::move(list);
  return {j};
}

Result cf_legendre(const Options& o) {
  if (o.qmax < 1)
    throw DomainError("cf legendre: --qmax must be >= 1");
  const auto cf = cf_from(o);
  const auto entries = legendre_filter(cf, o.qmax);
  Json j = header("cf legendre");
  j["source"] = cf_source(o, cf);
  j["qmax"] = std::to_string(o.qmax);
  Json list = Json::array();
  std::size_t inconclusive = 0, non_convergent = 0;
  for (const auto& e : entries) {
    list.push_back({{"p", to_string(e.p)},
                    {"q", std::to_string(e.q)},
                    {"within", verdict_json(e.within)},
                    {"is_convergent", e.is_convergent}});
    if (e.within == Verdict::inconclusive)
      ++inconclusive;
    else if (!e.is_convergent)
      ++non_convergent;
  }
  j["entries"] = std::move(list);
  j["proven_non_convergent"] = std::to_string(non_convergent);
  j["inconclusive"] = std::to_string(inconclusive);
  return {j, {}, inconclusive > 0 ? 3 : 0};
}

// -------------------------------------------------------------------------
// qset

FreeSetSpec spec_from(const Options& o) {
  if (o.spec.empty())
    throw DomainError("--spec is required; grammar: " + std::string(kSpecGrammar));
  return parse_spec(o.spec);
}

Result qset_member(const Options& o) {
  const auto spec = spec_from(o);
  Json j = header("qset member");
  j["spec"] = spec.literal();
  j["q"] = std::to_string(o.q);
  j["member"] = member(spec, o.q);
  return {j};
}

Result qset_verify(const Options& o) {
  const auto spec = spec_from(o);
  const auto r = verify_free_property(spec, o.n);
  Json j = header("qset verify");
  j["spec"] = r.spec;
  j["checked_up_to"] = std::to_string(r.checked_up_to);
  Json v = Json::array();
  for (auto q : r.violations)
    v.push_back(std::to_string(q));
  j["violations"] = std::move(v);
  j["holds"] = r.violations.empty();
  return {j};
}

Result qset_support(const Options& o) {
  const auto spec = spec_from(o);
  const auto r = support_primes(spec, o.bound, o.scan_bound);
  Json j = header("qset support");
  j["spec"] = r.spec;
  j["bound"] = std::to_string(r.bound);
  Json primes = Json::array(), inc = Json::array();
  for (auto p : r.primes)
    primes.push_back(std::to_string(p));
  for (auto p : r.inconclusive)
    inc.push_back(std::to_string(p));
  j["primes"] = std::move(primes);
  j["inconclusive"] = std::move(inc);
  return {j, {}, r.inconclusive.empty() ? 0 : 3};
}

Result qset_nu(const Options& o) {
  const auto spec = spec_from(o);
  Json j = header("qset nu");
  j["spec"] = spec.literal();
  ConvergenceExponent ce;
  if (o.fit) {
    std::vector<std::uint64_t> grid{1'000, 10'000, 100'000, 1'000'000};
    if (!o.grid.empty()) {
      grid.clear();
      for (const auto& part : split(o.grid, ','))
        grid.push_back(parse_u64(part, "grid"));
    }
    ce = counting_exponent_fit(spec, grid);
  } else {
    ce = convergence_exponent(spec);
  }
  j["method"] = std::string(to_string(ce.method));
  if (ce.exact)
    j["nu"] = to_string(*ce.exact);
  if (ce.method == ConvergenceExponent::Method::counting_fit) {
    j["fitted"] = fmt_double(ce.fitted);
    Json pts = Json::array();
    for (std::size_t i = 0; i < ce.grid.size(); ++i)
      pts.push_back({{"N", std::to_string(ce.grid[i])},
                     {"count", std::to_string(ce.counts[i])},
                     {"residual", fmt_double(ce.residuals[i])}});
    j["points"] = std::move(pts);
  }
  j["note"] = ce.note;
  return {j};
}

Result qset_euler(const Options& o) {
  const auto spec = spec_from(o);
  if (o.nu.empty())
    throw DomainError("qset euler: --nu is required");
  const auto r = euler_product_partial(spec, parse_rational(o.nu), o.bound, o.precision);
  Json j = header("qset euler");
  j["spec"] = r.spec;
  j["nu"] = to_string(r.nu);
  j["P"] = std::to_string(r.bound);
  j["precision"] = std::to_string(r.precision);
  j["support_sum"] = r.left_sum;
  j["q_partial_sum"] = r.q_partial_sum;
  j["euler_product"] = r.right_product;
  j["support_sum_le_q_sum"] = r.left_le_middle;
  j["q_sum_le_product"] = r.middle_le_right;
  j["support_size"] = std::to_string(r.support_size);
  j["support_inconclusive"] = std::to_string(r.support_inconclusive);
  return {j};
}

// -------------------------------------------------------------------------
// liouville

std::vector<std::optional<Integer>> parse_k(const std::string& text) {
  std::vector<std::optional<Integer>> out;
  if (text == "minimal" || text.empty())
    return out;
  for (const auto& part : split(text, text.find('/') != std::string::npos ? '/' : ',')) {
    if (part == "minimal" || part == "m")
      out.emplace_back();
    else
      out.emplace_back(parse_integer(part));
  }
  return out;
}

/// Builds q_0 .. q_steps, stopping early when the digit budget is hit.
PrimePairConstruction build(std::uint64_t p0, std::uint64_t p1, std::uint64_t alpha1, std::uint64_t steps,
                            const std::string& k, std::uint64_t budget) {
  if (steps < 1)
    throw DomainError("--steps must be >= 1");
  const auto ks = parse_k(k);
  if (ks.size() > steps - 1)
    throw DomainError("--k lists more choices than steps - 1");
  auto c = PrimePairConstruction::init(p0, p1, alpha1, budget);
  for (std::uint64_t t = 2; t <= steps && c.status() == ConstructionStatus::active; ++t) {
    const std::size_t idx = t - 2;
    c = extend(c, idx < ks.size() ? ks[idx] : std::nullopt);
  }
  return c;
}

PrimePairConstruction build_from(const Options& o) {
  return build(o.p0, o.p1, o.alpha1, o.steps, o.k, o.digit_budget);
}

Json verify_json(const VerifyReport& r) {
  Json j;
  j["all_passed"] = r.all_passed();
  Json failed = Json::array();
  for (const auto& c : r.checks)
    if (!c.passed)
      failed.push_back({{"check", c.name}, {"index", std::to_string(c.index)}});
  j["checks_run"] = std::to_string(r.checks.size());
  j["failed"] = std::move(failed);
  return j;
}

Result liouville_build(const Options& o) {
  const auto c = build_from(o);
  Json j = header("liouville build");
  j["steps_requested"] = std::to_string(o.steps);
  j["construction"] = construction_json(c, o.inline_digits);
  j["verify"] = verify_json(verify(c));
  return {j, {}, c.status() == ConstructionStatus::growth_exceeded ? 3 : 0};
}

Result liouville_verify(const Options& o) {
  PrimePairConstruction c = [&] {
    if (o.cert.empty())
      return build_from(o);
    std::ifstream in(o.cert);
    if (!in)
      throw DomainError("liouville verify: cannot open '" + o.cert + "'");
    Json cert;
    try {
      cert = Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw DomainError(std::string("liouville verify: invalid JSON: ") + e.what());
    }
    return construction_from_json(cert.contains("construction") ? cert["construction"] : cert);
  }();
  const auto r = verify(c);
  Json j = header("liouville verify");
  j["terms"] = std::to_string(c.terms());
  j["verify"] = verify_json(r);
  Json checks = Json::array();
  for (const auto& ch : r.checks)
    checks.push_back({{"check", ch.name}, {"index", std::to_string(ch.index)}, {"passed", ch.passed}});
  j["checks"] = std::move(checks);
  return {j};
}

Json indices_json(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (auto s : v)
    out.push_back(std::to_string(s));
  return out;
}

Result liouville_evidence(const Options& o) {
  if (o.tau.empty())
    throw DomainError("liouville evidence: --tau is required");
  const auto c = build_from(o);
  const auto ev = wstar_evidence(c, parse_rational(o.tau));
  Json j = header("liouville evidence");
  j["pi"] = {std::to_string(c.pi(0)), std::to_string(c.pi(1))};
  j["terms"] = std::to_string(c.terms());
  j["tau"] = to_string(ev.tau);
  j["modulus"] = std::to_string(ev.modulus);
  j["outside_q"] = indices_json(ev.outside_q);
  j["all_outside_q"] = ev.all_outside_q;
  j["hits"] = indices_json(ev.hits);
  j["misses"] = indices_json(ev.misses);
  j["inconclusive"] = indices_json(ev.inconclusive);
  j["legendre_cutoff"] = to_string(ev.legendre_cutoff);
  j["exceptional_bound"] = to_string(ev.exceptional_bound);
  j["in_q_convergent_hits"] = std::to_string(ev.in_q_convergent_hits);
  Json list = Json::array();
  for (const auto& e : ev.convergents)
    list.push_back({{"s", std::to_string(e.s)},
                    {"hit", verdict_json(e.hit)},
                    {"depth", e.depth < 0 ? std::string("tail") : std::to_string(e.depth)},
                    {"error_lo", rational_json(e.lo, o.inline_digits)},
                    {"error_hi", rational_json(e.hi, o.inline_digits)}});
  j["convergents"] = std::move(list);
  return {j};
}

Result liouville_profile(const Options& o) {
  const auto c = build_from(o);
  Json j = header("liouville profile");
  j["terms"] = std::to_string(c.terms());
  Json list = Json::array();
  for (const auto& p : irrationality_profile(c))
    list.push_back({{"s", std::to_string(p.s)}, {"w", fmt_double(p.w, 12)}});
  j["profile"] = std::move(list);
  return {j};
}

// -------------------------------------------------------------------------
// plane

Hyperplane plane_from(const Options& o) {
  if (o.a.empty())
    throw DomainError("--a is required (comma-separated integer coefficients)");
  return Hyperplane::make(parse_integer_list(o.a), parse_integer(o.u), parse_integer(o.v));
}

Json rationals_json(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& r : v)
    out.push_back(to_string(r));
  return out;
}

Result plane_lift(const Options& o) {
  const auto h = plane_from(o);
  const auto y = parse_rational_list(o.y);
  Json j = header("plane lift");
  j["hyperplane"] = h.describe();
  j["y"] = rationals_json(y);
  j["x_n"] = to_string(lift(h, y));
  j["lipschitz_constant"] = to_string(lipschitz_constant(h));
  return {j};
}

Result plane_threshold(const Options& o) {
  if (o.a.empty() || o.tau.empty())
    throw DomainError("plane threshold: --a and --tau are required");
  const auto a = parse_integer_list(o.a);
  const Rational tau = parse_rational(o.tau);
  const Integer v = parse_integer(o.v);
  if (v < 1)
    throw DomainError("plane threshold: --v must be >= 1");
  std::vector<Integer> scaled;
  for (const auto& x : a)
    scaled.push_back(x * v);
  Json j = header("plane threshold");
  j["a"] = integers_json(a, o.inline_digits);
  j["v"] = to_string(v);
  j["tau"] = to_string(tau);
  j["threshold"] = to_string(dependence_threshold(scaled, tau));
  return {j};
}

Json hit_json(const ScanHit& h, std::size_t inline_digits) {
  Json j;
  j["q"] = integer_json(h.q, inline_digits);
  j["p"] = integers_json(h.p, inline_digits);
  j["proof"] = std::string(to_string(h.proof));
  j["on_hyperplane"] = h.on_hyperplane;
  if (h.in_q)
    j["in_q"] = *h.in_q;
  Json err = Json::array();
  for (const auto& e : h.error_bound)
    err.push_back(rational_json(e, inline_digits));
  j["error_bound"] = std::move(err);
  return j;
}

Json scan_json(const ScanReport& r, std::size_t inline_digits) {
  Json j;
  j["hyperplane"] = r.hyperplane;
  Json x = Json::array();
  for (const auto& c : r.x)
    x.push_back(c);
  j["x"] = std::move(x);
  j["tau"] = to_string(r.tau);
  j["q_max"] = integer_json(r.q_max, inline_digits);
  j["threshold"] = to_string(r.threshold);
  Json hits = Json::array();
  for (const auto& h : r.hits)
    hits.push_back(hit_json(h, inline_digits));
  j["hits"] = std::move(hits);
  j["violations_above_threshold"] = integers_json(r.violations_above_threshold, inline_digits);
  j["failures_below_threshold"] = integers_json(r.failures_below_threshold, inline_digits);
  j["inconclusive_hits"] = std::to_string(r.inconclusive_hits);
  return j;
}

Result plane_transfer(const Options& o) {
  const auto h = plane_from(o);
  Json j = header("plane transfer");
  if (!o.p.empty()) {
    if (o.pq.empty())
      throw DomainError("plane transfer: --q is required with --p");
    const Integer q = parse_integer(o.pq);
    const auto p = parse_integer_list(o.p);
    j["hyperplane"] = h.describe();
    j["q"] = to_string(q);
    j["p"] = integers_json(p, o.inline_digits);
    j["on_hyperplane"] = check_transfer(h, q, p);
    return {j};
  }
  if (o.y.empty() || o.tau.empty() || o.qmax < 1)
    throw DomainError("plane transfer: give --q and --p, or --y, --tau and --qmax");
  std::vector<Coordinate> first;
  for (const auto& r : parse_rational_list(o.y))
    first.push_back(Coordinate::exact(r));
  const Point x = point_on(h, std::move(first));
  const auto report = transfer_property_test(h, x, parse_rational(o.tau), o.qmax);
  j["scan"] = scan_json(report, o.inline_digits);
  j["property_holds"] = report.violations_above_threshold.empty();
  return {j, {}, report.inconclusive_hits > 0 ? 3 : 0};
}

Result plane_points(const Options& o) {
  const auto h = plane_from(o);
  if (o.pq.empty() || o.box.empty())
    throw DomainError("plane points: --q and --box are required");
  const Integer q = parse_integer(o.pq);
  Box box;
  for (const auto& part : split(o.box, ',')) {
    const auto ends = split(part, ':');
    if (ends.size() != 2)
      throw DomainError("plane points: --box entries must be lo:hi");
    box.bounds.emplace_back(parse_integer(ends[0]), parse_integer(ends[1]));
  }
  const auto pts = rational_points(h, q, box);
  Json j = header("plane points");
  j["hyperplane"] = h.describe();
  j["q"] = to_string(q);
  Json list = Json::array();
  for (const auto& p : pts)
    list.push_back(integers_json(p, o.inline_digits));
  j["points"] = std::move(list);
  j["count"] = std::to_string(pts.size());
  return {j};
}

/// P0:P1:ALPHA1:STEPS[:K2/K3/...]
PrimePairConstruction parse_seed(const std::string& text, std::uint64_t budget) {
  const auto parts = split(text, ':');
  if (parts.size() != 4 && parts.size() != 5)
    throw DomainError("seed '" + text + "' must be P0:P1:ALPHA1:STEPS[:K2/K3/...]");
  return build(parse_u64(parts[0], "seed P0"), parse_u64(parts[1], "seed P1"), parse_u64(parts[2], "seed ALPHA1"),
               parse_u64(parts[3], "seed STEPS"), parts.size() == 5 ? parts[4] : std::string("minimal"), budget);
}

Result plane_wstar(const Options& o) {
  const auto h = plane_from(o);
  if (o.tau.empty())
    throw DomainError("plane wstar: --tau is required");
  const auto spec = spec_from(o);
  std::vector<PrimePairConstruction> seeds;
  for (const auto& s : o.seeds)
    seeds.push_back(parse_seed(s, o.digit_budget));
  const auto r = wstar_point_from_seed(h, seeds, parse_rational(o.tau), spec, o.qmax ? o.qmax : 200);
  Json j = header("plane wstar");
  j["spec"] = spec.literal();
  j["seed_depth"] = std::to_string(r.seed_depth);
  j["scan"] = scan_json(r.scan, o.inline_digits);
  j["in_q_count"] = std::to_string(r.scan.in_q_count);
  j["out_q_count"] = std::to_string(r.scan.out_q_count);
  j["large_hits_multiple_of_v"] = r.large_hits_multiple_of_v;
  j["large_hits_outside_q"] = r.large_hits_outside_q;
  return {j};
}

// -------------------------------------------------------------------------
// dim

Result dim_formula(const Options& o) {
  if (o.tau.empty())
    throw DomainError("dim formula: --tau is required");
  if (!o.spec.empty() && !o.nu.empty())
    throw DomainError("dim formula: give --spec or --nu, not both");
  NuInput in{Rational(1), true};
  if (!o.spec.empty())
    in = NuInput::from_spec(spec_from(o));
  else if (!o.nu.empty())
    in.nu = parse_rational(o.nu);
  const auto set = parse_dimension_set(o.set);
  if (set != DimensionSet::w && o.spec.empty() && o.nu.empty())
    throw DomainError("dim formula: --set " + o.set + " needs --spec or --nu");
  const auto v = theoretical_dimension(static_cast<unsigned>(o.n), parse_rational(o.tau), set, in);
  Json j = header("dim formula");
  j["n"] = std::to_string(v.n);
  j["tau"] = to_string(v.tau);
  j["set"] = std::string(to_string(v.set));
  if (set != DimensionSet::w)
    j["nu"] = to_string(v.nu);
  if (v.value)
    j["value"] = to_string(*v.value);
  if (v.interval)
    j["interval"] = {to_string(v.interval->first), to_string(v.interval->second)};
  j["asserted"] = v.asserted;
  Json gates = Json::array();
  for (const auto& g : v.gates)
    gates.push_back({{"gate", g.name}, {"passed", g.passed}});
  j["gates"] = std::move(gates);
  j["source"] = v.source;
  if (!v.note.empty())
    j["note"] = v.note;
  return {j};
}

Result dim_series(const Options& o) {
  if (o.tau.empty() || o.s.empty())
    throw DomainError("dim series: --tau and --s are required");
  const auto spec = spec_from(o);
  const auto r = cover_series(spec, static_cast<unsigned>(o.n), parse_rational(o.tau), parse_rational(o.s), o.q0, o.q1,
                              o.precision);
  Json j = header("dim series");
  j["spec"] = r.spec;
  j["n"] = std::to_string(r.n);
  j["tau"] = to_string(r.tau);
  j["s"] = to_string(r.s);
  j["Q0"] = std::to_string(r.q0);
  j["Q1"] = std::to_string(r.q1);
  j["members"] = std::to_string(r.members);
  j["precision"] = std::to_string(r.precision);
  j["value"] = r.value;
  std::string csv = "spec,n,tau,s,Q0,Q1,members,value\n";
  csv += r.spec + "," + std::to_string(r.n) + "," + to_string(r.tau) + "," + to_string(r.s) + "," +
         std::to_string(r.q0) + "," + std::to_string(r.q1) + "," + std::to_string(r.members) + "," + r.value + "\n";
  return {j, csv};
}

Result dim_critical(const Options& o) {
  if (o.tau.empty())
    throw DomainError("dim critical: --tau is required");
  const auto spec = spec_from(o);
  std::vector<Rational> grid;
  if (!o.grid.empty())
    grid = parse_rational_list(o.grid);
  const auto r = critical_exponent(spec, static_cast<unsigned>(o.n), parse_rational(o.tau),
                                   o.qmax ? o.qmax : (std::uint64_t{1} << 20), grid);
  Json j = header("dim critical");
  j["spec"] = r.spec;
  j["n"] = std::to_string(r.n);
  j["tau"] = to_string(r.tau);
  j["Q_max"] = std::to_string(r.q_max);
  j["exact_value"] = to_string(r.exact_value);
  if (r.s_star) {
    j["s_star"] = fmt_double(*r.s_star);
    j["abs_error"] = fmt_double(std::abs(*r.s_star - r.exact_value.get_d()));
  } else {
    j["s_star"] = nullptr;
    j["note"] = r.note;
  }
  Json slopes = Json::array();
  for (const auto& g : r.grid)
    slopes.push_back({{"s", to_string(g.s)}, {"slope", fmt_double(g.slope)}});
  j["slopes"] = std::move(slopes);

  std::string csv = "spec,n,tau,s,block_j,block_sum,slope\n";
  for (const auto& g : r.grid)
    for (const auto& b : g.blocks)
      csv += r.spec + "," + std::to_string(r.n) + "," + to_string(r.tau) + "," + to_string(g.s) + "," +
             std::to_string(b.j) + "," + (b.skipped ? std::string("skipped") : fmt_double(b.sum)) + "," +
             fmt_double(g.slope) + "\n";
  return {j, csv};
}

// -------------------------------------------------------------------------

CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& description, Action& slot,
               std::function<Result()> fn) {
  auto* app = parent->add_subcommand(name, description);
  app->footer(kFooter);
  app->fallthrough();
  app->callback([&slot, fn] { slot = fn; });
  return app;
}

CLI::App* group(CLI::App* parent, const std::string& name, const std::string& description) {
  auto* app = parent->add_subcommand(name, description);
  app->footer(kFooter);
  app->fallthrough();
  app->require_subcommand(1);
  return app;
}

void add_cf_source(CLI::App* app, Options& o) {
  app->add_option("--x", o.x, "Rational x as p or p/q");
  app->add_option("--quotients", o.quotients, "Prefix a0,a1,...,aS of an irrational's expansion");
}

void add_build(CLI::App* app, Options& o, bool required = true) {
  auto* p0 = app->add_option("--p0", o.p0, "First prime pi0");
  auto* p1 = app->add_option("--p1", o.p1, "Second prime pi1");
  auto* a1 = app->add_option("--alpha1", o.alpha1, "Exponent alpha1 >= 1 (q1 = pi1^alpha1)");
  auto* st = app->add_option("--steps", o.steps, "Build q_0 .. q_steps");
  if (required) {
    p0->required();
    p1->required();
    a1->required();
    st->required();
  }
  app->add_option("--k", o.k, "minimal, or k_2,k_3,... (entries may be 'minimal')")->capture_default_str();
  app->add_option("--digit-budget", o.digit_budget, "Largest allowed decimal digit count of q_t")->capture_default_str();
}

void add_plane(CLI::App* app, Options& o) {
  app->add_option("--a", o.a, "Coefficients a1,...,an (a_n != 0); use --a=-1,2 for a leading minus");
  app->add_option("--u", o.u, "Numerator u of the right-hand side u/v")->capture_default_str();
  app->add_option("--v", o.v, "Denominator v >= 1")->capture_default_str();
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  Action action;

  CLI::App app{"bfree-lab: exact experiments on divisor-free denominator sets, continued fractions and "
               "simultaneous approximation"};
  app.name("bfree-lab");
  app.footer(kFooter);
  app.require_subcommand(1);
  app.add_option("--out", o.out_path, "Write output to this file instead of stdout");
  app.add_option("--format", o.format, "json | csv (csv for dim series and dim critical)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--precision", o.precision, "Decimal digits for high-precision sums")->capture_default_str();
  app.add_option("--inline-digits", o.inline_digits, "Integers with more digits are written in compact form")
      ->capture_default_str();

  auto* cf = group(&app, "cf", "Continued fractions");
  {
    auto* e = leaf(cf, "expand", "Partial quotients of a rational", action, [&] { return cf_expand(o); });
    e->add_option("--x", o.x, "Rational x as p or p/q")->required();
    auto* c = leaf(cf, "convergents", "Convergents p_s/q_s", action, [&] { return cf_convergents(o); });
    add_cf_source(c, o);
    auto* l = leaf(cf, "legendre", "Fractions within 1/(2q^2) and whether each is a convergent", action,
                   [&] { return cf_legendre(o); });
    add_cf_source(l, o);
    l->add_option("--qmax", o.qmax, "Largest denominator")->required();
  }

  auto* qs = group(&app, "qset", "Divisor-free denominator sets");
  {
    auto* m = leaf(qs, "member", "Membership of q", action, [&] { return qset_member(o); });
    m->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    m->add_option("--q", o.q, "Candidate q >= 1")->required();
    auto* v = leaf(qs, "verify", "Check the divisor-free property up to N", action, [&] { return qset_verify(o); });
    v->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    v->add_option("--n", o.n, "Upper bound N")->required();
    auto* s = leaf(qs, "support", "Primes <= P dividing a member", action, [&] { return qset_support(o); });
    s->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    s->add_option("--bound", o.bound, "Prime bound P")->required();
    s->add_option("--scan-bound", o.scan_bound, "Largest multiple scanned for table specs")->capture_default_str();
    auto* n = leaf(qs, "nu", "Exponent of convergence", action, [&] { return qset_nu(o); });
    n->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    n->add_flag("--fit", o.fit, "Least-squares counting fit instead of the exact rule");
    n->add_option("--grid", o.grid, "Increasing N values for --fit, comma-separated");
    auto* eu = leaf(qs, "euler", "Support sum, partial sum and Euler product at exponent nu", action,
                    [&] { return qset_euler(o); });
    eu->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    eu->add_option("--nu", o.nu, "Exponent nu > 0 (rational)")->required();
    eu->add_option("--bound", o.bound, "Bound P")->required();
  }

  auto* lv = group(&app, "liouville", "Prime-pair continued-fraction constructions");
  {
    auto* b = leaf(lv, "build", "Build a construction certificate (exit 3 on growth-exceeded)", action,
                   [&] { return liouville_build(o); });
    add_build(b, o);
    auto* v = leaf(lv, "verify", "Re-check a certificate (--cert) or a fresh build", action,
                   [&] { return liouville_verify(o); });
    v->add_option("--cert", o.cert, "Certificate JSON written by liouville build");
    add_build(v, o, false);
    auto* e = leaf(lv, "evidence", "Exact W* evidence at exponent tau > 2", action,
                   [&] { return liouville_evidence(o); });
    add_build(e, o);
    e->add_option("--tau", o.tau, "Exponent tau (rational, denominator <= 8)")->required();
    auto* p = leaf(lv, "profile", "w_s = 1 + log q_{s+1} / log q_s", action, [&] { return liouville_profile(o); });
    add_build(p, o);
  }

  auto* pl = group(&app, "plane", "Rational hyperplanes a1 x1 + ... + an xn = u/v");
  {
    auto* l = leaf(pl, "lift", "x_n from x_1 .. x_{n-1}", action, [&] { return plane_lift(o); });
    add_plane(l, o);
    l->add_option("--y", o.y, "x_1,...,x_{n-1} as rationals")->required();
    auto* t = leaf(pl, "threshold", "Least q0 with q0^(tau-1) > v * sum |a_i|", action,
                   [&] { return plane_threshold(o); });
    t->add_option("--a", o.a, "Coefficients a1,...,an")->required();
    t->add_option("--v", o.v, "Denominator of the target u/v")->capture_default_str();
    t->add_option("--tau", o.tau, "Exponent tau > 1")->required();
    auto* tr = leaf(pl, "transfer", "Check p/q on the plane (--q --p) or scan a point (--y --tau --qmax)", action,
                    [&] { return plane_transfer(o); });
    add_plane(tr, o);
    tr->add_option("--q", o.pq, "Denominator q");
    tr->add_option("--p", o.p, "Numerators p1,...,pn");
    tr->add_option("--y", o.y, "x_1,...,x_{n-1} of the point to scan");
    tr->add_option("--tau", o.tau, "Exponent tau > 1");
    tr->add_option("--qmax", o.qmax, "Largest denominator scanned");
    auto* pt = leaf(pl, "points", "Rational points with denominator q in a box", action,
                    [&] { return plane_points(o); });
    add_plane(pt, o);
    pt->add_option("--q", o.pq, "Denominator q")->required();
    pt->add_option("--box", o.box, "lo:hi per numerator, comma-separated")->required();
    auto* w = leaf(pl, "wstar", "Point built from seed constructions, scanned for approximations", action,
                   [&] { return plane_wstar(o); });
    add_plane(w, o);
    w->add_option("--seed", o.seeds, "P0:P1:ALPHA1:STEPS[:K2/K3/...], one per coordinate x_1 .. x_{n-1}")
        ->required();
    w->add_option("--tau", o.tau, "Exponent tau > 2")->required();
    w->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    w->add_option("--qmax", o.qmax, "Scan every q <= qmax as well (default 200)");
    w->add_option("--digit-budget", o.digit_budget, "Digit budget for the seeds")->capture_default_str();
  }

  auto* dm = group(&app, "dim", "Hausdorff dimension formulas and the natural-cover series");
  {
    auto* f = leaf(dm, "formula", "Dimension of W, W(Q) or W*(Q)", action, [&] { return dim_formula(o); });
    f->add_option("--n", o.n, "Dimension n >= 1")->required();
    f->add_option("--tau", o.tau, "Exponent tau > 1")->required();
    f->add_option("--set", o.set, "w | wq | wstar")->capture_default_str();
    f->add_option("--spec", o.spec, std::string(kSpecGrammar));
    f->add_option("--nu", o.nu, "Exponent of convergence in [0, 1] instead of --spec");
    auto* s = leaf(dm, "series", "Cover series sum over q in Q of q^n (2 q^-tau)^s (csv available)", action,
                   [&] { return dim_series(o); });
    s->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    s->add_option("--n", o.n, "Dimension n >= 1")->required();
    s->add_option("--tau", o.tau, "Exponent tau")->required();
    s->add_option("--s", o.s, "Exponent s > 0")->required();
    s->add_option("--q0", o.q0, "First q")->capture_default_str();
    s->add_option("--q1", o.q1, "Last q")->required();
    auto* c = leaf(dm, "critical", "Abscissa of the cover series from dyadic block slopes (csv available)", action,
                   [&] { return dim_critical(o); });
    c->add_option("--spec", o.spec, std::string(kSpecGrammar))->required();
    c->add_option("--n", o.n, "Dimension n >= 1")->required();
    c->add_option("--tau", o.tau, "Exponent tau > 1")->required();
    c->add_option("--qmax", o.qmax, "Q_max >= 2^16 (default 2^20)");
    c->add_option("--grid", o.grid, "Increasing s values in (0, n+1], comma-separated (default k/20)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e, out, err);
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Result result;
  try {
    if (!action)
      throw DomainError("no command given");
    result = action();
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const InternalConsistencyError& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::string text;
  if (o.format == "csv") {
    if (result.csv.empty()) {
      err << "error: --format csv is only available for dim series and dim critical\n";
      return 2;
    }
    text = result.csv;
  } else {
    text = result.json.dump(2) + "\n";
  }

  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << o.out_path << "'\n";
      return 2;
    }
    file << text;
  }
  return result.code;
}

} // namespace bfree::cli
