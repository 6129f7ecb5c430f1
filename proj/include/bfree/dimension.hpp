#pragma once

// Hausdorff dimension formulas for W, W(Q) and W*(Q), and the natural-cover
// series sum_{q in Q} q^n (2 q^-tau)^s whose convergence abscissa is (n + nu)/tau.

#include <bfree/bigfloat.hpp>
#include <bfree/errors.hpp>
#include <bfree/exact.hpp>
#include <bfree/free_set.hpp>
#include <bfree/parallel.hpp>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace bfree {

enum class DimensionSet { w, wq, wstar };

inline std::string_view to_string(DimensionSet s) {
  switch (s) {
  case DimensionSet::w: return "w";
  case DimensionSet::wq: return "wq";
  case DimensionSet::wstar: return "wstar";
  }
  return "w";
}

inline DimensionSet parse_dimension_set(std::string_view text) {
  if (text == "w")
    return DimensionSet::w;
  if (text == "wq")
    return DimensionSet::wq;
  if (text == "wstar")
    return DimensionSet::wstar;
  throw DomainError("unknown set '" + std::string(text) + "' (expected w | wq | wstar)");
}

struct Gate {
  std::string name;
  bool passed = false;
};

struct DimensionVerdict {
  unsigned n = 1;
  Rational tau;
  Rational nu;
  DimensionSet set = DimensionSet::w;
  std::optional<Rational> value;
  std::optional<std::pair<Rational, Rational>> interval;
  /// False when a hypothesis behind the formula fails; the formula is
  /// then reported for reference only.
  bool asserted = false;
  std::vector<Gate> gates;
  std::string source;
  std::string note;
};

struct NuInput {
  Rational nu;
  bool infinite = true; // the dimension result for W* needs Q infinite

  static NuInput from_spec(const FreeSetSpec& spec) {
    const auto ce = convergence_exponent(spec);
    if (!ce.exact)
      throw DomainError("exponent of convergence is undecided for " + spec.literal());
    const auto* table = std::get_if<ExplicitTable>(&spec.variant());
    const bool finite = table && table->tail.kind == TableTail::Kind::none;
    return {*ce.exact, !finite};
  }
};

inline DimensionVerdict theoretical_dimension(unsigned n, const Rational& tau, DimensionSet set, const NuInput& in) {
  if (n < 1)
    throw DomainError("theoretical_dimension: n must be >= 1");
  if (tau <= 1)
    throw DomainError("theoretical_dimension: tau must be > 1");
  if (in.nu < 0 || in.nu > 1)
    throw DomainError("theoretical_dimension: nu must lie in [0, 1]");

  DimensionVerdict v;
  v.n = n;
  v.tau = tau;
  v.nu = in.nu;
  v.set = set;
  const Rational N(n);
  const bool g1 = tau > 1 + Rational(1) / N;
  const bool gnu = tau > 1 + in.nu / N;

  switch (set) {
  case DimensionSet::w:
    v.source = "jarnik-besicovitch";
    v.gates = {{"tau > 1+1/n", g1}};
    v.value = (N + 1) / tau;
    v.asserted = g1;
    break;
  case DimensionSet::wq:
    v.source = "borosh-fraenkel";
    v.gates = {{"tau > 1+nu/n", gnu}};
    v.value = (N + in.nu) / tau;
    v.asserted = gnu;
    break;
  case DimensionSet::wstar: {
    v.source = "restricted-denominator-bounds";
    if (in.nu < 1) {
      v.gates = {{"Q infinite", in.infinite}, {"nu < 1", true}, {"tau > 1+1/n", g1}};
      v.value = (N + 1) / tau;
      v.asserted = in.infinite && g1;
    } else {
      const bool gn = n >= 2 && tau > 1 + Rational(1) / Rational(n - 1);
      v.gates = {{"Q infinite", in.infinite}, {"nu = 1", true}, {"n >= 2", n >= 2}, {"tau > 1+1/(n-1)", gn}};
      v.interval = std::make_pair(N / tau, (N + 1) / tau);
      v.asserted = in.infinite && gn;
      if (n == 1)
        v.note = "no bound is known for n = 1 and nu = 1";
    }
    break;
  }
  }
  if (!v.asserted && v.note.empty())
    v.note = "formula not asserted: a hypothesis gate failed";
  return v;
}

// ---------------------------------------------------------------------------
// Cover series

struct CoverSeries {
  std::string spec;
  unsigned n = 1;
  Rational tau;
  Rational s;
  std::uint64_t q0 = 1, q1 = 1;
  unsigned precision = 50;
  std::uint64_t members = 0;
  std::string value;
};

/// Sum over q in Q with q0 <= q <= q1 of q^n (2 q^-tau)^s. Summation runs in
/// fixed chunks combined in order, so the digits do not depend on threads.
inline CoverSeries cover_series(const FreeSetSpec& spec, unsigned n, const Rational& tau, const Rational& s,
                                std::uint64_t q0, std::uint64_t q1, unsigned digits = 50) {
  if (q0 < 1 || q0 > q1)
    throw DomainError("cover_series: need 1 <= Q0 <= Q1");
  if (sgn(s) <= 0)
    throw DomainError("cover_series: s must be > 0");
  const mpfr_prec_t bits = bits_for_digits(digits) + 64;
  const auto in = sieve_members(spec, q1);
  const Rational exponent = Rational(n) - tau * s;

  constexpr std::uint64_t kChunk = 1 << 14;
  const std::uint64_t chunks = (q1 - q0) / kChunk + 1;
  std::vector<std::optional<BigFloat>> partial(chunks);
  std::vector<std::uint64_t> counts(chunks, 0);
  parallel_for(chunks, [&](std::size_t c) {
    BigFloat sum(bits);
    const std::uint64_t lo = q0 + c * kChunk;
    const std::uint64_t hi = std::min(q1, lo + kChunk - 1);
    for (std::uint64_t q = lo; q <= hi; ++q) {
      if (!in[q])
        continue;
      sum += BigFloat::power(bits, from_u64(q), exponent);
      ++counts[c];
    }
    partial[c] = std::move(sum);
  });

  BigFloat total(bits);
  CoverSeries out;
  for (std::size_t c = 0; c < chunks; ++c) {
    total += *partial[c];
    out.members += counts[c];
  }
  total *= BigFloat::power(bits, Integer(2), s);
  out.spec = spec.literal();
  out.n = n;
  out.tau = tau;
  out.s = s;
  out.q0 = q0;
  out.q1 = q1;
  out.precision = digits;
  out.value = total.to_decimal(digits);
  return out;
}

// ---------------------------------------------------------------------------
// Critical exponent

struct BlockSum {
  unsigned j = 0;
  std::uint64_t members = 0;
  double sum = 0; // 2^s * sum over q in [2^j, 2^{j+1}) of q^{n - tau s}; 0 when skipped
  bool skipped = false;
};

struct GridPoint {
  Rational s;
  double slope = 0; // growth exponent of log2(block sum) per block
  std::vector<BlockSum> blocks;
};

struct CriticalExponent {
  std::string spec;
  unsigned n = 1;
  Rational tau;
  std::uint64_t q_max = 0;
  std::optional<double> s_star;
  Rational exact_value; // (n + nu)/tau
  std::vector<GridPoint> grid;
  std::string note;
};

inline std::vector<Rational> default_s_grid(unsigned n) {
  std::vector<Rational> grid;
  for (unsigned k = 1; k <= 20 * (n + 1); ++k)
    grid.push_back(make_rational(k, 20));
  return grid;
}

inline constexpr std::uint64_t kMinCriticalQmax = std::uint64_t{1} << 16;

/// Locates the abscissa of the cover series: for each s, the slope of
/// log2(block sum) against j over the upper half of the dyadic blocks, then
/// the linear zero crossing of that slope along the grid.
inline CriticalExponent critical_exponent(const FreeSetSpec& spec, unsigned n, const Rational& tau,
                                          std::uint64_t q_max, std::vector<Rational> s_grid = {}) {
  if (n < 1)
    throw DomainError("critical_exponent: n must be >= 1");
  if (tau <= 1)
    throw DomainError("critical_exponent: tau must be > 1");
  if (q_max < kMinCriticalQmax)
    throw DomainError("critical_exponent: Q_max must be >= 2^16");
  if (s_grid.empty())
    s_grid = default_s_grid(n);
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    if (sgn(s_grid[i]) <= 0 || s_grid[i] > Rational(n + 1))
      throw DomainError("critical_exponent: s grid must lie in (0, n+1]");
    if (i > 0 && s_grid[i] <= s_grid[i - 1])
      throw DomainError("critical_exponent: s grid must be strictly increasing");
  }

  const auto in = sieve_members(spec, q_max);
  unsigned blocks = 0;
  while ((std::uint64_t{2} << blocks) - 1 <= q_max)
    ++blocks; // block j covers [2^j, 2^{j+1}) and must fit below q_max
  std::vector<std::vector<double>> logs(blocks);
  for (unsigned j = 0; j < blocks; ++j)
    for (std::uint64_t q = std::uint64_t{1} << j; q < (std::uint64_t{2} << j); ++q)
      if (in[q])
        logs[j].push_back(std::log2(static_cast<double>(q)));

  CriticalExponent out;
  out.spec = spec.literal();
  out.n = n;
  out.tau = tau;
  out.q_max = q_max;
  out.exact_value = (Rational(n) + NuInput::from_spec(spec).nu) / tau;
  out.grid.resize(s_grid.size());

  parallel_for(s_grid.size(), [&](std::size_t g) {
    GridPoint& gp = out.grid[g];
    gp.s = s_grid[g];
    const double sd = s_grid[g].get_d();
    const double e = static_cast<double>(n) - tau.get_d() * sd;
    std::vector<double> xs, ys;
    for (unsigned j = 0; j < blocks; ++j) {
      BlockSum b;
      b.j = j;
      b.members = logs[j].size();
      if (logs[j].empty()) {
        b.skipped = true;
      } else {
        double sum = 0;
        for (double lq : logs[j])
          sum += std::exp2(e * lq);
        b.sum = std::exp2(sd) * sum;
        if (j >= blocks / 2) {
          xs.push_back(j);
          ys.push_back(std::log2(b.sum));
        }
      }
      gp.blocks.push_back(b);
    }
    if (xs.size() < 2)
      throw DomainError("critical_exponent: fewer than two non-empty blocks in the upper half");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    gp.slope = sxy / sxx;
  });

  for (std::size_t g = 0; g < out.grid.size(); ++g) {
    const double f0 = out.grid[g].slope;
    if (f0 == 0) {
      out.s_star = out.grid[g].s.get_d();
      break;
    }
    if (g + 1 < out.grid.size() && f0 > 0 && out.grid[g + 1].slope < 0) {
      const double f1 = out.grid[g + 1].slope;
      const double s0 = out.grid[g].s.get_d(), s1 = out.grid[g + 1].s.get_d();
      out.s_star = s0 + (s1 - s0) * f0 / (f0 - f1);
      break;
    }
  }
  if (!out.s_star)
    out.note = "block slope does not change sign on the s grid";
  return out;
}

} // namespace bfree
