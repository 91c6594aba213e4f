#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qrelkit/serialize.hpp"

namespace {

using namespace qrelkit;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << text;
}

Json parse_json(const std::string& bytes) {
  Json j = Json::parse(bytes, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON input");
  return j;
}

int run_check(const std::string& path, const std::string& level, double tol,
              const std::string& out_path, const std::string& format) {
  const std::string bytes = read_input(path);
  DiscreteQuantumMonoid q = monoid_from_json(parse_json(bytes));

  Report report;
  report.input_digest = fnv1a_digest(bytes);

  CheckReport monoid = check_monoid(q, tol);
  report.append(monoid, "monoid");
  bool gate_ok = monoid.passed();

  if (gate_ok && (level == "group" || level == "kac" || level == "full")) {
    GroupVerdict gv = vaes_group_check(q, tol);
    report.append(gv.report, "group");
    auto cand = solve_antipode(q, tol);
    report.entries.push_back({"group.antipode_solvable",
                              "the two-sided convolution-inverse system is consistent",
                              cand ? cand->residual : 1.0, cand.has_value()});
    report.entries.push_back({"group.criteria_agree",
                              "support criterion and antipode solvability coincide",
                              0.0, gv.is_group == cand.has_value()});
    gate_ok = gv.is_group && cand.has_value();

    if (gate_ok && (level == "kac" || level == "full")) {
      KacVerdict kv = is_kac(q, std::max(tol, 1e-6));
      report.append(kv.report, "kac");
      report.entries.push_back({"kac.verdict", "antipode is a *-map", kv.is_kac ? 0.0 : 1.0,
                                kv.is_kac});
      gate_ok = kv.is_kac;

      if (gate_ok && level == "full") {
        QRelation inv = inversion_relation(q, *cand);
        report.append(dqg_relation_check(q, inv, std::max(tol, 1e-7)), "full.inversion");
        QRelation s_hat = morphism_to_relation(antipode_morphism(q, *cand));
        report.entries.push_back(
            {"full.inversion_matches_antipode",
             "the intertwiner relation equals the antipode's relation",
             rel_eq_residual(inv, s_hat),
             rel_eq(inv, s_hat, std::max(tol, 1e-7))});
      }
    }
  }

  write_output(out_path, format == "text" ? report.to_text() : report.to_json().dump(2) + "\n");
  return report.overall() ? 0 : 1;
}

int run_convert(const std::string& path, const std::string& to, double tol,
                const std::string& out_path) {
  const Json j = parse_json(read_input(path));
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
    throw ParseError("artifact must carry a \"kind\" tag");
  const std::string kind = j["kind"].get<std::string>();

  QRelation rel;
  if (kind == "relation") {
    rel = relation_from_json(j, tol);
  } else if (kind == "projection") {
    if (!j.contains("dom") || !j.contains("cod") || !j.contains("element"))
      throw ParseError("projection artifact must carry dom, cod, element");
    QuantumSet dom = qset_from_json(j["dom"]);
    QuantumSet cod = qset_from_json(j["cod"]);
    const HAAlgebra amb = tensor_op_algebra(ell_infty(dom), ell_infty(cod));
    AlgebraElement el = element_from_json(j["element"], amb);
    try {
      rel = projection_to_relation(ProjectionElement(el, 1e-7), dom, cod, tol);
    } catch (const InvalidProjection& e) {
      throw ParseError(e.what());
    }
  } else if (kind == "morphism") {
    rel = morphism_to_relation(morphism_from_json(j), tol);
  } else {
    throw ParseError("unknown artifact kind: " + kind);
  }

  Json out;
  if (to == "relation") {
    out = relation_to_json(rel);
    out["kind"] = "relation";
  } else if (to == "projection") {
    ProjectionElement p = relation_to_projection(rel, tol);
    out = Json{{"kind", "projection"},
               {"dom", qset_to_json(rel.dom)},
               {"cod", qset_to_json(rel.cod)},
               {"element", element_to_json(p.element)}};
  } else if (to == "morphism") {
    WStarMorphism f = relation_to_morphism(rel, true, tol);
    out = morphism_to_json(f);
    out["kind"] = "morphism";
  } else {
    throw ParseError("unknown conversion target: " + to);
  }
  write_output(out_path, out.dump(2) + "\n");
  return 0;
}

int run_examples(const std::string& name, unsigned long long seed, const std::string& out_path) {
  DiscreteQuantumMonoid q;
  if (name == "z2")
    q = function_algebra(cyclic_table(2));
  else if (name == "z3")
    q = function_algebra(cyclic_table(3));
  else if (name == "z4")
    q = function_algebra(cyclic_table(4));
  else if (name == "z5")
    q = function_algebra(cyclic_table(5));
  else if (name == "klein")
    q = function_algebra(klein_four_table());
  else if (name == "s3")
    q = function_algebra(s3_table());
  else if (name == "d4")
    q = function_algebra(d4_table());
  else if (name == "bool-and")
    q = function_algebra(bool_and_table());
  else if (name == "z2-dual")
    q = group_algebra(cyclic_table(2), seed);
  else if (name == "z3-dual")
    q = group_algebra(cyclic_table(3), seed);
  else if (name == "s3-dual")
    q = group_algebra(s3_table(), seed);
  else if (name == "d4-dual")
    q = group_algebra(d4_table(), seed);
  else if (name == "kac-paljutkin")
    q = kac_paljutkin(seed);
  else
    throw ParseError("unknown example name: " + name);
  write_output(out_path, monoid_to_json(q).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum sets, quantum relations, and discrete quantum monoid checks"};
  app.require_subcommand(1);

  double tol = 1e-8;
  unsigned long long seed = 20240101;
  std::string out_path;
  std::string format = "json";
  app.add_option("--tol", tol, "numerical tolerance")->capture_default_str();
  app.add_option("--seed", seed, "PRNG seed for spectral splitting")->capture_default_str();
  app.add_option("--out", out_path, "write output to a file instead of stdout");
  app.add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "text"}));

  std::string check_path = "-";
  std::string level = "full";
  CLI::App* check = app.add_subcommand("check", "validate a monoid JSON file");
  check->fallthrough();
  check->add_option("path", check_path, "input file, - for stdin");
  check->add_option("--level", level, "how far to check")
      ->check(CLI::IsMember({"monoid", "group", "kac", "full"}));

  std::string convert_path = "-";
  std::string to = "relation";
  CLI::App* convert = app.add_subcommand("convert", "convert between relation guises");
  convert->fallthrough();
  convert->add_option("path", convert_path, "input artifact, - for stdin");
  convert->add_option("--to", to, "target guise")
      ->check(CLI::IsMember({"relation", "projection", "morphism"}));

  std::string example_name;
  CLI::App* examples = app.add_subcommand("examples", "emit a built-in example monoid");
  examples->fallthrough();
  examples->add_option("name", example_name, "example name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(check_path, level, tol, out_path, format);
    if (convert->parsed()) return run_convert(convert_path, to, tol, out_path);
    if (examples->parsed()) return run_examples(example_name, seed, out_path);
  } catch (const qrelkit::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const qrelkit::NotAFunction& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
