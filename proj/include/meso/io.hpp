#pragma once

// JSON serialization for problems, algebra values, and reports. Keys follow
// the documented schema; emission order is fixed so identical inputs give
// byte-identical output.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "meso/character.hpp"
#include "meso/congruence.hpp"
#include "meso/cyclotomic.hpp"
#include "meso/errors.hpp"
#include "meso/exponents.hpp"
#include "meso/mesoprime.hpp"
#include "meso/polynomial.hpp"

namespace meso {

using Json = nlohmann::ordered_json;

// Wraps the vendor parser so syntax errors carry a line and column.
inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("malformed JSON at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + e.what());
  }
}

inline Json cyclo_to_json(const Cyclo& c) {
  Json j;
  j["order"] = c.order();
  Json coeffs = Json::array();
  for (const auto& q : c.coeffs()) coeffs.push_back(rational_to_string(q));
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline Cyclo cyclo_from_json(const Json& j) {
  if (j.is_number_integer()) return Cyclo(static_cast<std::int64_t>(j.get<std::int64_t>()));
  if (j.is_string()) return Cyclo(rational_from_string(j.get<std::string>()));
  if (!j.is_object() || !j.contains("order") || !j.contains("coeffs"))
    throw InputError("field element must be an integer, a rational string, or {order, coeffs}");
  std::uint64_t order = j.at("order").get<std::uint64_t>();
  std::vector<Rational> coeffs;
  for (const auto& entry : j.at("coeffs")) {
    if (entry.is_number_integer())
      coeffs.push_back(make_rational(entry.get<std::int64_t>()));
    else if (entry.is_string())
      coeffs.push_back(rational_from_string(entry.get<std::string>()));
    else
      throw InputError("field element coefficients must be integers or rational strings");
  }
  return Cyclo::from_coeffs(order, std::move(coeffs));
}

inline Json element_to_json(const ModuleElement& m) {
  Json j;
  j["exponents"] = m.degree;
  j["gen"] = m.gen;
  return j;
}

inline ModuleElement element_from_json(const Json& j, std::size_t nvars, std::size_t rank) {
  if (!j.is_object() || !j.contains("exponents") || !j.contains("gen"))
    throw InputError("module element must be {exponents, gen}");
  ModuleElement m;
  m.gen = j.at("gen").get<std::uint32_t>();
  if (m.gen >= rank) throw InputError("generator index out of range: " + std::to_string(m.gen));
  m.degree = j.at("exponents").get<Exponent>();
  if (m.degree.size() != nvars)
    throw InputError("exponent vector length disagrees with the variable count");
  if (!is_nonnegative(m.degree)) throw InputError("exponents must be nonnegative");
  return m;
}

inline Json poly_to_json(const PolyVector& p) {
  Json j = Json::array();
  for (const auto& t : p.terms()) {
    Json term;
    term["coeff"] = cyclo_to_json(t.coeff);
    term["exponents"] = t.mono.degree;
    term["gen"] = t.mono.gen;
    j.push_back(std::move(term));
  }
  return j;
}

// max_terms = 0 accepts any length; problem inputs pass 2.
inline PolyVector poly_from_json(const Json& j, std::size_t nvars, std::size_t rank,
                                 const MonomialOrder& ord, std::size_t max_terms = 0) {
  if (!j.is_array()) throw InputError("a module vector must be an array of terms");
  if (max_terms != 0 && j.size() > max_terms)
    throw InputError("entry has " + std::to_string(j.size()) + " terms, at most " +
                     std::to_string(max_terms) + " allowed");
  std::vector<Term> terms;
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("coeff"))
      throw InputError("term must be {coeff, exponents, gen}");
    Term t;
    t.coeff = cyclo_from_json(entry.at("coeff"));
    t.mono = element_from_json(entry, nvars, rank);
    terms.push_back(std::move(t));
  }
  return PolyVector::from_terms(std::move(terms), ord);
}

inline Json prime_to_json(const MonoidPrime& p) { return Json(p.coords); }

inline MonoidPrime prime_from_json(const Json& j, std::size_t nvars) {
  if (!j.is_array()) throw InputError("a monoid prime must be an array of coordinates");
  std::vector<std::size_t> coords = j.get<std::vector<std::size_t>>();
  for (auto c : coords)
    if (c >= nvars) throw InputError("prime coordinate out of range: " + std::to_string(c));
  return MonoidPrime(std::move(coords));
}

inline Json lattice_to_json(const IntMat& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& v : row) r.push_back(v.get_str());
    rows.push_back(std::move(r));
  }
  return rows;
}

inline IntMat lattice_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("a lattice must be an array of rows");
  IntMat m;
  for (const auto& row : j) {
    if (!row.is_array()) throw InputError("a lattice row must be an array");
    IntVec r;
    for (const auto& v : row) {
      if (v.is_number_integer())
        r.emplace_back(static_cast<long>(v.get<std::int64_t>()));
      else if (v.is_string())
        r.emplace_back(v.get<std::string>());
      else
        throw InputError("lattice entries must be integers or integer strings");
    }
    m.push_back(std::move(r));
  }
  return m;
}

inline Json mesoprime_to_json(const Mesoprime& mp) {
  Json j;
  j["prime"] = prime_to_json(mp.prime);
  j["lattice"] = lattice_to_json(mp.lattice);
  Json values = Json::array();
  for (const auto& v : mp.values) values.push_back(cyclo_to_json(v));
  j["values"] = std::move(values);
  return j;
}

inline Mesoprime mesoprime_from_json(const Json& j, std::size_t nvars) {
  if (!j.is_object() || !j.contains("prime") || !j.contains("lattice") || !j.contains("values"))
    throw InputError("a mesoprime must be {prime, lattice, values}");
  Mesoprime mp;
  mp.prime = prime_from_json(j.at("prime"), nvars);
  mp.lattice = lattice_from_json(j.at("lattice"));
  for (const auto& v : j.at("values")) mp.values.push_back(cyclo_from_json(v));
  if (mp.values.size() != mp.lattice.size())
    throw InputError("a mesoprime needs one value per lattice row");
  return mp;
}

// The parsed problem: ambient ring and module, the object to decompose, and
// run options. Congruence targets carry their generators as pairs and nils;
// binomial targets as two-term vectors.
struct ProblemFile {
  std::vector<std::string> vars;
  std::uint64_t field_order = 1;
  std::size_t rank = 1;
  std::vector<PolyVector> defining;

  bool binomial_target = true;
  std::vector<PolyVector> generators;   // binomial target
  CongruencePresentation congruence;    // congruence target

  std::int64_t budget = 16;
  bool budget_specified = false;
  bool verify = true;
  bool prune = false;
  std::string format = "json";

  std::size_t nvars() const { return vars.size(); }
};

inline ProblemFile problem_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("a problem must be a JSON object");
  ProblemFile p;
  MonomialOrder ord{};

  if (!j.contains("ring") || !j.at("ring").contains("vars"))
    throw InputError("missing ring.vars");
  p.vars = j.at("ring").at("vars").get<std::vector<std::string>>();
  if (p.vars.empty()) throw InputError("at least one variable is required");
  if (j.at("ring").contains("coeff")) {
    const Json& c = j.at("ring").at("coeff");
    if (c.is_string()) {
      if (c.get<std::string>() != "QQ")
        throw InputError("ring.coeff must be \"QQ\" or {cyclotomic: m}");
      p.field_order = 1;
    } else if (c.is_object() && c.contains("cyclotomic")) {
      p.field_order = normalize_cyclo_order(c.at("cyclotomic").get<std::uint64_t>());
    } else {
      throw InputError("ring.coeff must be \"QQ\" or {cyclotomic: m}");
    }
  }

  if (j.contains("module")) {
    const Json& m = j.at("module");
    if (m.contains("rank")) p.rank = m.at("rank").get<std::size_t>();
    if (p.rank == 0) throw InputError("module rank must be positive");
    if (m.contains("defining"))
      for (const auto& entry : m.at("defining"))
        p.defining.push_back(poly_from_json(entry, p.nvars(), p.rank, ord, 2));
  }

  if (!j.contains("target") || !j.at("target").contains("kind"))
    throw InputError("missing target.kind");
  const Json& target = j.at("target");
  std::string kind = target.at("kind").get<std::string>();
  const Json empty = Json::array();
  const Json& gens = target.contains("generators") ? target.at("generators") : empty;
  if (kind == "binomial") {
    p.binomial_target = true;
    for (const auto& entry : gens)
      p.generators.push_back(poly_from_json(entry, p.nvars(), p.rank, ord, 2));
  } else if (kind == "congruence") {
    p.binomial_target = false;
    p.congruence.nvars = p.nvars();
    p.congruence.ngens = p.rank;
    if (!p.defining.empty())
      throw InputError("congruence targets take no module.defining entries");
    for (const auto& entry : gens) {
      if (entry.is_object() && entry.contains("pair")) {
        const Json& pr = entry.at("pair");
        if (!pr.is_array() || pr.size() != 2)
          throw InputError("a congruence pair must list two module elements");
        p.congruence.pairs.push_back({element_from_json(pr.at(0), p.nvars(), p.rank),
                                      element_from_json(pr.at(1), p.nvars(), p.rank)});
      } else if (entry.is_object() && entry.contains("nil")) {
        p.congruence.nils.push_back(element_from_json(entry.at("nil"), p.nvars(), p.rank));
      } else {
        throw InputError("congruence generators must be {pair: [a, b]} or {nil: a}");
      }
    }
  } else {
    throw InputError("target.kind must be \"congruence\" or \"binomial\"");
  }

  if (j.contains("options")) {
    const Json& o = j.at("options");
    if (o.contains("budget")) {
      p.budget = o.at("budget").get<std::int64_t>();
      p.budget_specified = true;
    }
    if (p.budget <= 0) throw InputError("options.budget must be positive");
    if (o.contains("verify")) p.verify = o.at("verify").get<bool>();
    if (o.contains("prune")) p.prune = o.at("prune").get<bool>();
    if (o.contains("format")) p.format = o.at("format").get<std::string>();
    if (p.format != "json" && p.format != "text")
      throw InputError("options.format must be \"json\" or \"text\"");
  }
  return p;
}

inline Json problem_to_json(const ProblemFile& p) {
  Json j;
  j["ring"]["vars"] = p.vars;
  if (p.field_order == 1)
    j["ring"]["coeff"] = "QQ";
  else
    j["ring"]["coeff"]["cyclotomic"] = p.field_order;
  j["module"]["rank"] = p.rank;
  Json defining = Json::array();
  for (const auto& d : p.defining) defining.push_back(poly_to_json(d));
  j["module"]["defining"] = std::move(defining);
  j["target"]["kind"] = p.binomial_target ? "binomial" : "congruence";
  Json gens = Json::array();
  if (p.binomial_target) {
    for (const auto& g : p.generators) gens.push_back(poly_to_json(g));
  } else {
    for (const auto& pr : p.congruence.pairs) {
      Json entry;
      entry["pair"] = Json::array({element_to_json(pr.lhs), element_to_json(pr.rhs)});
      gens.push_back(std::move(entry));
    }
    for (const auto& nil : p.congruence.nils) {
      Json entry;
      entry["nil"] = element_to_json(nil);
      gens.push_back(std::move(entry));
    }
  }
  j["target"]["generators"] = std::move(gens);
  j["options"]["budget"] = p.budget;
  j["options"]["verify"] = p.verify;
  j["options"]["prune"] = p.prune;
  j["options"]["format"] = p.format;
  return j;
}

}  // namespace meso
