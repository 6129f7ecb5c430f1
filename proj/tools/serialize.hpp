#pragma once

// JSON rendering for library results. Every number is a decimal string.

#include <bfree/bfree.hpp>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace bfree::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kDefaultInlineDigits = 10'000;

inline std::string fmt_double(double v, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

/// Small prime p with n = p^e (e >= 1), if any.
inline std::optional<std::pair<unsigned long, unsigned long>> small_prime_power(const Integer& n) {
  if (n < 2)
    return std::nullopt;
  for (unsigned long p = 2; p < 1000; ++p) {
    if (!is_prime(p))
      continue;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0)
      continue;
    Integer rest;
    const unsigned long e = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), Integer(p).get_mpz_t());
    if (rest == 1)
      return std::make_pair(p, e);
    return std::nullopt;
  }
  return std::nullopt;
}

/// Decimal string, or for integers beyond `inline_digits` digits either
/// {"prime", "exponent"} or {"digits", "leading", "trailing"}.
inline Json integer_json(const Integer& n, std::size_t inline_digits) {
  if (decimal_digits(n) <= inline_digits)
    return to_string(n);
  if (auto pp = small_prime_power(n))
    return Json{{"prime", std::to_string(pp->first)}, {"exponent", std::to_string(pp->second)}};
  const std::string s = to_string(n);
  return Json{{"digits", std::to_string(decimal_digits(n))}, {"leading", s.substr(0, 30)},
              {"trailing", s.substr(s.size() - 30)}};
}

inline Json integers_json(const std::vector<Integer>& v, std::size_t inline_digits) {
  Json out = Json::array();
  for (const auto& x : v)
    out.push_back(integer_json(x, inline_digits));
  return out;
}

/// "p/q", or {"log10", "num_digits", "den_digits"} when too long to inline.
inline Json rational_json(const Rational& r, std::size_t inline_digits) {
  const std::size_t nd = decimal_digits(r.get_num()), dd = decimal_digits(r.get_den());
  if (nd + dd <= inline_digits)
    return to_string(r);
  double l = -std::numeric_limits<double>::infinity();
  if (r != 0)
    l = (log2(abs(r.get_num())) - log2(r.get_den())) * 0.30102999566398120;
  return Json{{"log10", fmt_double(l, 12)}, {"num_digits", std::to_string(nd)}, {"den_digits", std::to_string(dd)}};
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep))
    out.push_back(cur);
  if (!text.empty() && text.back() == sep)
    out.emplace_back();
  return out;
}

inline std::uint64_t parse_u64(const std::string& text, const char* what) {
  const Integer z = parse_integer(text);
  if (z < 0 || !fits_u64(z))
    throw DomainError(std::string(what) + ": '" + text + "' is not a natural number");
  return to_u64(z);
}

inline std::vector<Integer> parse_integer_list(const std::string& text) {
  std::vector<Integer> out;
  for (const auto& part : split(text, ','))
    out.push_back(parse_integer(part));
  if (out.empty())
    throw DomainError("empty integer list");
  return out;
}

inline std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& part : split(text, ','))
    out.push_back(parse_rational(part));
  if (out.empty())
    throw DomainError("empty rational list");
  return out;
}

inline std::uint64_t json_u64(const Json& j, const char* what) {
  if (j.is_number_unsigned())
    return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<long long>() >= 0)
    return static_cast<std::uint64_t>(j.get<long long>());
  if (j.is_string())
    return parse_u64(j.get<std::string>(), what);
  throw DomainError(std::string(what) + ": expected a natural number");
}

/// Table file: {"N": n, "members": [...], "tail": "none" | "all" | {"smooth": [...]}}.
inline FreeSetSpec load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw DomainError("table: cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("table: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("N") || !j.contains("members"))
    throw DomainError("table: '" + path + "' needs keys N and members");
  const std::uint64_t limit = json_u64(j["N"], "table N");
  std::vector<std::uint64_t> members;
  for (const auto& m : j["members"])
    members.push_back(json_u64(m, "table member"));
  TableTail tail;
  if (j.contains("tail")) {
    const auto& t = j["tail"];
    if (t == "none")
      tail.kind = TableTail::Kind::none;
    else if (t == "all")
      tail.kind = TableTail::Kind::all;
    else if (t.is_object() && t.contains("smooth")) {
      tail.kind = TableTail::Kind::smooth;
      for (const auto& p : t["smooth"])
        tail.primes.push_back(json_u64(p, "smooth prime"));
    } else
      throw DomainError("table: tail must be \"none\", \"all\" or {\"smooth\": [...]}");
  }
  return FreeSetSpec::table(limit, members, std::move(tail), path);
}

/// kfree:k | coprime:m | bfree:b1,b2,... | table:@file
inline FreeSetSpec parse_spec(const std::string& text) {
  const auto bad = [&]() {
    return DomainError("malformed spec '" + text + "'; grammar: " + std::string(kSpecGrammar));
  };
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw bad();
  const std::string kind = text.substr(0, colon), arg = text.substr(colon + 1);
  try {
    if (kind == "kfree")
      return FreeSetSpec::kfree(static_cast<unsigned>(parse_u64(arg, "kfree")));
    if (kind == "coprime")
      return FreeSetSpec::coprime_to(parse_u64(arg, "coprime"));
    if (kind == "bfree") {
      std::vector<std::uint64_t> b;
      for (const auto& part : split(arg, ','))
        b.push_back(parse_u64(part, "bfree"));
      return FreeSetSpec::bfree(std::move(b));
    }
  } catch (const DomainError& e) {
    throw DomainError(std::string(e.what()) + "; grammar: " + std::string(kSpecGrammar));
  }
  if (kind == "table" && arg.size() > 1 && arg[0] == '@')
    return load_table(arg.substr(1));
  throw bad();
}

// ---------------------------------------------------------------------------
// Constructions

/// "pi^alpha" for q_t, t >= 1; "1" for q_0.
inline std::string power_expr(const PrimePairConstruction& c, std::size_t t) {
  if (t == 0)
    return "1";
  return std::to_string(c.pi(static_cast<int>(t % 2))) + "^" + to_string(c.alpha()[t]);
}

inline Json construction_json(const PrimePairConstruction& c, std::size_t inline_digits) {
  Json q = Json::array(), a = Json::array(), digits = Json::array();
  for (std::size_t t = 0; t < c.terms(); ++t) {
    const std::size_t d = decimal_digits(c.q()[t]);
    digits.push_back(std::to_string(d));
    if (t == 0 || d <= inline_digits)
      q.push_back(to_string(c.q()[t]));
    else
      q.push_back(Json{{"prime", std::to_string(c.pi(static_cast<int>(t % 2)))}, {"exponent", to_string(c.alpha()[t])}});

    const std::size_t ad = decimal_digits(c.a()[t]);
    if (ad <= inline_digits || t < 2)
      a.push_back(to_string(c.a()[t]));
    else
      a.push_back(Json{{"expr", "(" + power_expr(c, t) + " - " + power_expr(c, t - 2) + ") / " + power_expr(c, t - 1)},
                       {"digits", std::to_string(ad)}});
  }
  Json out;
  out["pi"] = {std::to_string(c.pi(0)), std::to_string(c.pi(1))};
  out["digit_budget"] = std::to_string(c.digit_budget());
  out["status"] = std::string(to_string(c.status()));
  out["terms"] = std::to_string(c.terms());
  out["alpha"] = integers_json(c.alpha(), inline_digits);
  out["k"] = integers_json(c.k_choices(), inline_digits);
  out["q"] = std::move(q);
  out["q_digits"] = std::move(digits);
  out["a"] = std::move(a);
  if (c.status() == ConstructionStatus::growth_exceeded)
    out["pending_alpha_bits"] = std::to_string(c.pending_alpha_bits());
  return out;
}

inline Integer integer_from_json(const Json& j, const char* what) {
  if (j.is_string())
    return parse_integer(j.get<std::string>());
  if (j.is_number_integer())
    return Integer(std::to_string(j.get<long long>()));
  if (j.is_object() && j.contains("prime") && j.contains("exponent"))
    return pow(Integer(json_u64(j["prime"], what)), json_u64(j["exponent"], what));
  throw DomainError(std::string(what) + ": unsupported integer encoding");
}

/// Inverse of construction_json. Partial quotients given as expressions are
/// recomputed from q; verify() then checks everything.
inline PrimePairConstruction construction_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("pi") || !j.contains("q") || !j.contains("a") || !j.contains("alpha"))
    throw DomainError("certificate: needs pi, alpha, k, q and a");
  std::vector<Integer> alpha, k, q, a;
  for (const auto& x : j["alpha"])
    alpha.push_back(integer_from_json(x, "alpha"));
  if (j.contains("k"))
    for (const auto& x : j["k"])
      k.push_back(integer_from_json(x, "k"));
  for (const auto& x : j["q"])
    q.push_back(integer_from_json(x, "q"));
  const auto& ja = j["a"];
  for (std::size_t t = 0; t < ja.size(); ++t) {
    if (ja[t].is_object() && ja[t].contains("expr")) {
      if (t < 2 || t >= q.size())
        throw DomainError("certificate: a_" + std::to_string(t) + " expression without matching q");
      a.push_back((q[t] - q[t - 2]) / q[t - 1]);
    } else {
      a.push_back(integer_from_json(ja[t], "a"));
    }
  }
  const auto status = j.value("status", std::string("active")) == "growth-exceeded" ? ConstructionStatus::growth_exceeded
                                                                                   : ConstructionStatus::active;
  const std::uint64_t budget = j.contains("digit_budget") ? json_u64(j["digit_budget"], "digit_budget")
                                                          : kDefaultDigitBudget;
  return PrimePairConstruction::from_parts(json_u64(j["pi"].at(0), "pi"), json_u64(j["pi"].at(1), "pi"),
                                           std::move(alpha), std::move(k), std::move(a), std::move(q), status, budget);
}

} // namespace bfree::cli
