#ifndef QRELKIT_SERIALIZE_HPP
#define QRELKIT_SERIALIZE_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "builders.hpp"

/// JSON round trips for all public value types, plus the structured check
/// report.  Complex numbers are always [re, im]; key order is fixed via
/// ordered_json so output is byte-stable.
namespace qrelkit {

using Json = nlohmann::ordered_json;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Json complex_to_json(const std::complex<double>& z) {
  return Json::array({z.real(), z.imag()});
}

inline std::complex<double> complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError("complex number must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("matrix must be a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw ParseError("matrix rows must be nonempty arrays");
  CMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError("ragged matrix");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(j[r][c]);
  }
  return m;
}

inline Json qset_to_json(const QuantumSet& x) {
  Json atoms = Json::array();
  for (const auto& a : x.atoms)
    atoms.push_back(Json{{"label", a.label}, {"dim", a.dim}});
  return Json{{"atoms", std::move(atoms)}};
}

inline QuantumSet qset_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array())
    throw ParseError("quantum set must be {\"atoms\": [...]}");
  std::vector<Atom> atoms;
  for (const auto& a : j["atoms"]) {
    if (!a.is_object() || !a.contains("label") || !a.contains("dim") ||
        !a["label"].is_string() || !a["dim"].is_number_integer())
      throw ParseError("atom must be {\"label\": str, \"dim\": int}");
    const auto dim = a["dim"].get<long long>();
    if (dim < 1) throw ParseError("atom dim must be positive");
    atoms.push_back({a["label"].get<std::string>(), static_cast<Eigen::Index>(dim)});
  }
  try {
    return QuantumSet{std::move(atoms)};
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

inline Json element_to_json(const AlgebraElement& x) {
  Json blocks = Json::array();
  for (const auto& b : x.blocks) blocks.push_back(matrix_to_json(b));
  return Json{{"blocks", std::move(blocks)}};
}

inline AlgebraElement element_from_json(const Json& j, const HAAlgebra& alg) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array() ||
      j["blocks"].size() != alg.size())
    throw ParseError("element must carry one block per algebra factor");
  std::vector<CMatrix> blocks;
  for (const auto& b : j["blocks"]) blocks.push_back(matrix_from_json(b));
  try {
    return AlgebraElement(alg, std::move(blocks));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

inline Json relation_to_json(const QRelation& r) {
  Json comps = Json::array();
  for (const auto& [key, sub] : r.components) {
    Json basis = Json::array();
    for (const auto& m : sub.basis) basis.push_back(matrix_to_json(m));
    comps.push_back(Json{{"from", r.dom.atoms[key.first].label},
                         {"to", r.cod.atoms[key.second].label},
                         {"basis", std::move(basis)}});
  }
  return Json{{"dom", qset_to_json(r.dom)}, {"cod", qset_to_json(r.cod)},
              {"components", std::move(comps)}};
}

inline QRelation relation_from_json(const Json& j, double tol = kDefaultTol) {
  if (!j.is_object() || !j.contains("dom") || !j.contains("cod") || !j.contains("components"))
    throw ParseError("relation must carry dom, cod, components");
  QRelation r(qset_from_json(j["dom"]), qset_from_json(j["cod"]));
  auto find_atom = [](const QuantumSet& x, const std::string& label) {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x.atoms[i].label == label) return i;
    throw ParseError("unknown atom label: " + label);
  };
  if (!j["components"].is_array()) throw ParseError("components must be an array");
  for (const auto& c : j["components"]) {
    if (!c.is_object() || !c.contains("from") || !c.contains("to") || !c.contains("basis"))
      throw ParseError("component must carry from, to, basis");
    const std::size_t a = find_atom(r.dom, c["from"].get<std::string>());
    const std::size_t b = find_atom(r.cod, c["to"].get<std::string>());
    std::vector<CMatrix> basis;
    for (const auto& m : c["basis"]) basis.push_back(matrix_from_json(m));
    try {
      r.set(a, b, span(basis, r.dom.dim(a), r.cod.dim(b), tol));
    } catch (const ShapeMismatch& e) {
      throw ParseError(e.what());
    }
  }
  return r;
}

inline Json state_to_json(const State& s) {
  Json dens = Json::array();
  for (const auto& rho : s.densities) dens.push_back(matrix_to_json(rho));
  return Json{{"algebra", qset_to_json(qset_of(s.parent))}, {"densities", std::move(dens)}};
}

inline Json morphism_to_json(const WStarMorphism& f) {
  return Json{{"source", qset_to_json(qset_of(f.source))},
              {"target", qset_to_json(qset_of(f.target))},
              {"action", matrix_to_json(f.action)}};
}

inline WStarMorphism morphism_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("action"))
    throw ParseError("morphism must carry source, target, action");
  const HAAlgebra src = ell_infty(qset_from_json(j["source"]));
  const HAAlgebra tgt = ell_infty(qset_from_json(j["target"]));
  CMatrix act = matrix_from_json(j["action"]);
  if (act.rows() != tgt.coord_dim() || act.cols() != src.coord_dim())
    throw ParseError("morphism action shape does not match algebras");
  return WStarMorphism(src, tgt, std::move(act));
}

inline Json monoid_to_json(const DiscreteQuantumMonoid& q) {
  return Json{{"algebra", qset_to_json(q.qset())},
              {"delta", Json{{"action", matrix_to_json(q.delta.action)}}},
              {"epsilon", Json{{"action", matrix_to_json(q.epsilon.action)}}}};
}

inline DiscreteQuantumMonoid monoid_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("algebra") || !j.contains("delta") || !j.contains("epsilon"))
    throw ParseError("monoid must carry algebra, delta, epsilon");
  const HAAlgebra m = ell_infty(qset_from_json(j["algebra"]));
  auto action = [&](const Json& part, const char* which) {
    if (!part.is_object() || !part.contains("action"))
      throw ParseError(std::string(which) + " must carry an action matrix");
    return matrix_from_json(part["action"]);
  };
  CMatrix da = action(j["delta"], "delta");
  CMatrix ea = action(j["epsilon"], "epsilon");
  const HAAlgebra mm = tensor_algebra(m, m);
  if (da.rows() != mm.coord_dim() || da.cols() != m.coord_dim())
    throw ParseError("delta action shape mismatch");
  if (ea.rows() != 1 || ea.cols() != m.coord_dim())
    throw ParseError("epsilon action shape mismatch");
  return {m, WStarMorphism(m, mm, std::move(da)),
          WStarMorphism(m, scalar_algebra(), std::move(ea))};
}

inline std::string fnv1a_digest(const std::string& bytes) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

inline constexpr const char* kToolVersion = "0.1.0";

struct Report {
  std::string version = kToolVersion;
  std::string input_digest;
  std::vector<ConditionLine> entries;

  bool overall() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }

  void append(const CheckReport& rep, const std::string& prefix) {
    for (const auto& l : rep.lines)
      entries.push_back({prefix + "." + l.name, l.condition, l.residual, l.pass});
  }

  Json to_json() const {
    Json ents = Json::array();
    for (const auto& e : entries)
      ents.push_back(Json{{"name", e.name},
                          {"anchor", e.condition},
                          {"verdict", e.pass ? "pass" : "fail"},
                          {"residual", e.residual}});
    return Json{{"version", version},
                {"input_digest", input_digest},
                {"entries", std::move(ents)},
                {"overall", overall() ? "pass" : "fail"}};
  }

  std::string to_text() const {
    std::string out = "qrelkit " + version + "  input " + input_digest + "\n";
    char buf[64];
    for (const auto& e : entries) {
      std::snprintf(buf, sizeof(buf), "%.3e", e.residual);
      out += std::string(e.pass ? "pass" : "FAIL") + "  " + e.name + "  residual " + buf +
             "  (" + e.condition + ")\n";
    }
    out += std::string("overall: ") + (overall() ? "pass" : "FAIL") + "\n";
    return out;
  }
};

}  // namespace qrelkit

#endif  // QRELKIT_SERIALIZE_HPP
