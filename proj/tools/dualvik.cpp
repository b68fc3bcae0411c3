#include <bit>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualvik/boolalg.hpp"
#include "dualvik/duality.hpp"
#include "dualvik/errors.hpp"
#include "dualvik/instance.hpp"
#include "dualvik/kalg.hpp"
#include "dualvik/klift.hpp"
#include "dualvik/rel.hpp"
#include "dualvik/rng.hpp"
#include "dualvik/s5mac.hpp"
#include "dualvik/subord.hpp"

namespace {

using Json = nlohmann::ordered_json;
using namespace dualvik;

struct Opts {
  std::string instance;
  std::string relation;
  std::string subordination;
  std::string first, second;
  std::string flavor;
  std::string algebra;
  std::string square;
  std::string out;
  std::string axioms = "S1,S2,S3,S4";
  std::string format = "text";
  std::vector<std::string> terms;
  int atoms = 2;
  int max_size = 2;
  int samples = 0;
  std::uint64_t seed = 1;
};

bool json_mode(const Opts& o) { return o.format == "json"; }

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Algebra algebra_from_flag(const std::string& flag) {
  if (flag.empty()) throw ValidationError("--algebra requires a comma-separated atom list");
  return Algebra(split(flag, ','));
}

Flavor flavor_from_flag(const std::string& flag) {
  if (flag == "box") return Flavor::box;
  if (flag == "diamond") return Flavor::diamond;
  if (flag == "em") return Flavor::em;
  throw ValidationError("--flavor must be box, diamond, or em");
}

const Relation& named_relation(const Instance& inst, const std::string& name) {
  const Relation* r = inst.find_relation(name);
  if (!r) throw ValidationError("unknown relation \"" + name + "\"");
  return *r;
}

const Subordination& named_subordination(const Instance& inst,
                                         const std::string& name) {
  const Subordination* s = inst.find_subordination(name);
  if (!s) throw ValidationError("unknown subordination \"" + name + "\"");
  return *s;
}

S5Algebra endo_algebra(const Subordination& s) {
  if (!(s.source() == s.target())) {
    throw ValidationError("this operation needs an endo subordination");
  }
  return S5Algebra{s.source(), s};
}

void emit_relation(const Relation& r, bool json) {
  if (json) {
    Json out = Json::object();
    out["source"] = r.source().atom_names();
    out["target"] = r.target().atom_names();
    Json pairs = Json::array();
    for (int i = 0; i < r.source().atom_count(); ++i) {
      for (int j = 0; j < r.target().atom_count(); ++j) {
        if (r.holds(i, j)) {
          pairs.push_back(Json::array(
              {r.source().atom_name(i), r.target().atom_name(j)}));
        }
      }
    }
    out["pairs"] = std::move(pairs);
    std::cout << out.dump(2) << "\n";
    return;
  }
  for (int i = 0; i < r.source().atom_count(); ++i) {
    for (int j = 0; j < r.target().atom_count(); ++j) {
      if (r.holds(i, j)) {
        std::cout << r.source().atom_name(i) << " -> "
                  << r.target().atom_name(j) << "\n";
      }
    }
  }
}

void emit_subordination(const Subordination& s, bool json) {
  if (s.source().atom_count() > 6 || s.target().atom_count() > 6) {
    throw CapExceeded("pair listing capped at 6 atoms per side; "
                      "print the dual relation instead");
  }
  if (json) {
    Json out = Json::object();
    out["source"] = s.source().atom_names();
    out["target"] = s.target().atom_names();
    Json pairs = Json::array();
    for (const auto& [a, b] : s.pairs()) {
      Json pa = Json::array(), pb = Json::array();
      for (int i = 0; i < s.source().atom_count(); ++i) {
        if (a >> i & 1) pa.push_back(s.source().atom_name(i));
      }
      for (int i = 0; i < s.target().atom_count(); ++i) {
        if (b >> i & 1) pb.push_back(s.target().atom_name(i));
      }
      pairs.push_back(Json::array({std::move(pa), std::move(pb)}));
    }
    out["pairs"] = std::move(pairs);
    std::cout << out.dump(2) << "\n";
    return;
  }
  for (const auto& [a, b] : s.pairs()) {
    std::cout << render_mask(s.source(), a) << " -> "
              << render_mask(s.target(), b) << "\n";
  }
}

std::uint64_t ideal_generator(IdealMask ideal) {
  std::uint64_t g = 0;
  for (IdealMask m = ideal; m; m &= m - 1) {
    g |= static_cast<std::uint64_t>(std::countr_zero(m));
  }
  return g;
}

int run_check(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  std::map<std::string, Axiom> by_name;
  for (Axiom a : {Axiom::S1, Axiom::S2, Axiom::S3, Axiom::S4, Axiom::S5,
                  Axiom::S6, Axiom::S7, Axiom::S8}) {
    by_name[axiom_name(a)] = a;
  }
  std::vector<Axiom> which;
  for (const std::string& n : split(o.axioms, ',')) {
    auto it = by_name.find(n);
    if (it == by_name.end()) throw ValidationError("unknown axiom \"" + n + "\"");
    which.push_back(it->second);
  }
  std::vector<std::pair<std::string, Subordination>> targets;
  if (!o.subordination.empty()) {
    targets.emplace_back(o.subordination,
                         named_subordination(inst, o.subordination));
  } else {
    targets = inst.subordinations;
  }
  if (targets.empty()) throw ValidationError("no subordinations to check");
  bool all_pass = true;
  Json jout = Json::array();
  for (const auto& [name, s] : targets) {
    Json jaxioms = Json::array();
    for (const AxiomReport& r : check_axioms(s, which)) {
      all_pass = all_pass && r.pass;
      if (json_mode(o)) {
        Json ja = Json::object();
        ja["axiom"] = axiom_name(r.axiom);
        ja["pass"] = r.pass;
        ja["witness"] = r.witness;
        jaxioms.push_back(std::move(ja));
      } else {
        std::cout << name << ": " << axiom_name(r.axiom)
                  << (r.pass ? " PASS" : " FAIL " + r.witness) << "\n";
      }
    }
    if (json_mode(o)) {
      Json js = Json::object();
      js["name"] = name;
      js["axioms"] = std::move(jaxioms);
      jout.push_back(std::move(js));
    }
  }
  if (json_mode(o)) std::cout << jout.dump(2) << "\n";
  return all_pass ? 0 : 1;
}

int run_lift(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  const Flavor f = flavor_from_flag(o.flavor);
  if (!o.relation.empty() == !o.subordination.empty()) {
    throw ValidationError("lift needs exactly one of --relation / --subordination");
  }
  if (!o.relation.empty()) {
    if (!o.terms.empty()) {
      throw ValidationError("terms only apply to a lifted subordination");
    }
    const Relation& r = named_relation(inst, o.relation);
    const Relation lifted = f == Flavor::box       ? lift_box(r)
                            : f == Flavor::diamond ? lift_diamond(r)
                                                   : lift_em(r);
    emit_relation(lifted, json_mode(o));
    return 0;
  }
  const Subordination& s = named_subordination(inst, o.subordination);
  if (o.terms.empty()) {
    emit_subordination(materialize_subordination(lift_subord(s, f)),
                       json_mode(o));
    return 0;
  }
  if (o.terms.size() != 2) {
    throw ValidationError("membership queries take exactly two terms");
  }
  const LiftedSubordination ls = lift_subord(s, f);
  const Dnf x = to_dnf(parse_term(o.terms[0], s.source()));
  const Cnf y = to_cnf(parse_term(o.terms[1], s.target()));
  const bool ans = ls.holds_nf(x, y);
  const auto witnesses = ls.explain(x, y);
  if (json_mode(o)) {
    Json out = Json::object();
    out["holds"] = ans;
    Json jw = Json::array();
    for (const auto& w : witnesses) {
      Json e = Json::object();
      e["clause"] = w.clause;
      e["conjunct"] = w.conjunct;
      e["box"] = w.box_index;
      e["diamond"] = w.diamond_index;
      jw.push_back(std::move(e));
    }
    out["witnesses"] = std::move(jw);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << (ans ? "true" : "false") << "\n";
  for (const auto& w : witnesses) {
    std::cout << "clause " << w.clause << " conjunct " << w.conjunct << ":";
    if (w.box_index >= 0) std::cout << " box " << w.box_index;
    if (w.diamond_index >= 0) std::cout << " diamond " << w.diamond_index;
    if (w.box_index < 0 && w.diamond_index < 0) std::cout << " no witness";
    std::cout << "\n";
  }
  return 0;
}

int run_compose(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  if (o.first.empty() || o.second.empty()) {
    throw ValidationError("compose needs --first and --second");
  }
  const bool rel = inst.find_relation(o.first) != nullptr;
  if (rel) {
    emit_relation(compose(named_relation(inst, o.second),
                          named_relation(inst, o.first)),
                  json_mode(o));
  } else {
    emit_subordination(compose(named_subordination(inst, o.second),
                               named_subordination(inst, o.first)),
                       json_mode(o));
  }
  return 0;
}

int run_dual(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  if (!o.relation.empty() == !o.subordination.empty()) {
    throw ValidationError("dual needs exactly one of --relation / --subordination");
  }
  if (!o.subordination.empty()) {
    emit_relation(named_subordination(inst, o.subordination).dual(),
                  json_mode(o));
  } else {
    emit_subordination(clop_mor(named_relation(inst, o.relation)),
                       json_mode(o));
  }
  return 0;
}

int run_nf(const Opts& o) {
  const Algebra base = algebra_from_flag(o.algebra);
  const TermPtr t = parse_term(o.terms.at(0), base);
  const std::string dnf = render_dnf(to_dnf(t));
  const std::string cnf = render_cnf(to_cnf(t));
  if (json_mode(o)) {
    Json out = Json::object();
    out["dnf"] = dnf;
    out["cnf"] = cnf;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << dnf << "\n" << cnf << "\n";
  }
  return 0;
}

int run_leq(const Opts& o) {
  const Algebra base = algebra_from_flag(o.algebra);
  const bool ans = term_leq(parse_term(o.terms.at(0), base),
                            parse_term(o.terms.at(1), base));
  if (json_mode(o)) {
    Json out = Json::object();
    out["leq"] = ans;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (ans ? "true" : "false") << "\n";
  }
  return 0;
}

void emit_completion(const Algebra& base, const MacneilleResult& m, bool json) {
  const Algebra& comp = m.completion.algebra;
  if (json) {
    Json out = Json::object();
    out["elements"] = std::uint64_t{1} << comp.atom_count();
    out["atoms"] = comp.atom_names();
    Json ideals = Json::array();
    for (IdealMask im : m.normal_ideals) {
      Json ji = Json::object();
      ji["generator"] = render_mask(base, ideal_generator(im));
      ideals.push_back(std::move(ji));
    }
    out["ideals"] = std::move(ideals);
    Json embed = Json::object();
    for (std::uint64_t e = 0; e < m.embed.size(); ++e) {
      embed[render_mask(base, e)] = render_mask(comp, m.embed[e]);
    }
    out["embed"] = std::move(embed);
    std::cout << out.dump(2) << "\n";
    return;
  }
  std::cout << "elements: " << (std::uint64_t{1} << comp.atom_count()) << "\n";
  std::cout << "atoms:";
  for (const std::string& n : comp.atom_names()) std::cout << " " << n;
  std::cout << "\n";
  for (std::size_t i = 0; i < m.normal_ideals.size(); ++i) {
    std::cout << "ideal " << i << ": generator "
              << render_mask(base, ideal_generator(m.normal_ideals[i])) << "\n";
  }
  for (std::uint64_t e = 0; e < m.embed.size(); ++e) {
    std::cout << "embed " << render_mask(base, e) << " -> "
              << render_mask(comp, m.embed[e]) << "\n";
  }
}

int run_macneille(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  const S5Algebra a = endo_algebra(named_subordination(inst, o.subordination));
  emit_completion(a.algebra, macneille(a), json_mode(o));
  return 0;
}

int run_sideals(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  const S5Algebra a = endo_algebra(named_subordination(inst, o.subordination));
  const std::vector<IdealMask> ideals = s_ideals(a);
  if (json_mode(o)) {
    Json out = Json::object();
    out["count"] = ideals.size();
    Json ji = Json::array();
    for (IdealMask im : ideals) {
      Json e = Json::object();
      e["generator"] = render_mask(a.algebra, ideal_generator(im));
      e["normal"] = is_normal_ideal(im, a);
      ji.push_back(std::move(e));
    }
    out["ideals"] = std::move(ji);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "ideals: " << ideals.size() << "\n";
  for (std::size_t i = 0; i < ideals.size(); ++i) {
    std::cout << "ideal " << i << ": generator "
              << render_mask(a.algebra, ideal_generator(ideals[i]))
              << (is_normal_ideal(ideals[i], a) ? " (normal)" : "") << "\n";
  }
  return 0;
}

int run_ls(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  const S5Algebra a = endo_algebra(named_subordination(inst, o.subordination));
  const Subordination ks = materialize_subordination(lift_subord(a.s, Flavor::em));
  emit_completion(ks.source(), l_s(a), json_mode(o));
  return 0;
}

int run_jp(const Opts& o) {
  const Instance inst = load_instance(o.instance);
  const S5Algebra a = endo_algebra(named_subordination(inst, o.subordination));
  const FiniteFrame f = j_p(a);
  if (json_mode(o)) {
    Json out = Json::object();
    out["elements"] = f.size();
    Json ideals = Json::array();
    for (int i = 0; i < f.size(); ++i) {
      Json e = Json::object();
      e["generator"] = render_mask(f.base(), f.generator(i));
      ideals.push_back(std::move(e));
    }
    out["ideals"] = std::move(ideals);
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "elements: " << f.size() << "\n";
  for (int i = 0; i < f.size(); ++i) {
    std::cout << "ideal " << i << ": generator "
              << render_mask(f.base(), f.generator(i)) << "\n";
  }
  return 0;
}

int run_verify(const Opts& o) {
  RunConfig cfg;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.caps.exhaustive = o.max_size;
  if (o.max_size < 1 || o.max_size > 6) {
    throw ValidationError("--max-size must be between 1 and 6");
  }
  std::vector<Square> squares =
      o.square.empty() ? all_squares()
                       : std::vector<Square>{square_from_name(o.square)};
  int total = 0, passed = 0;
  Json jsquares = Json::array();
  for (Square sq : squares) {
    const std::vector<SquareReport> reports = verify_square(sq, cfg);
    int sq_pass = 0;
    Json jinst = Json::array();
    for (const SquareReport& r : reports) {
      sq_pass += r.pass ? 1 : 0;
      if (json_mode(o)) {
        Json ji = Json::object();
        ji["instance"] = r.instance;
        ji["pass"] = r.pass;
        ji["left"] = r.left;
        ji["right"] = r.right;
        ji["witness"] = r.witness;
        jinst.push_back(std::move(ji));
      } else {
        std::cout << square_name(sq) << " " << r.instance
                  << (r.pass ? " PASS" : " FAIL " + r.witness) << "\n";
      }
    }
    total += static_cast<int>(reports.size());
    passed += sq_pass;
    if (json_mode(o)) {
      Json js = Json::object();
      js["square"] = square_name(sq);
      js["passed"] = sq_pass;
      js["total"] = reports.size();
      js["instances"] = std::move(jinst);
      jsquares.push_back(std::move(js));
    } else if (squares.size() > 1) {
      std::cout << square_name(sq)
                << (sq_pass == static_cast<int>(reports.size()) ? " PASS "
                                                                : " FAIL ")
                << sq_pass << "/" << reports.size() << "\n";
    }
  }
  if (json_mode(o)) {
    Json out = Json::object();
    out["squares"] = std::move(jsquares);
    out["passed"] = passed;
    out["total"] = total;
    out["pass"] = passed == total;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << (passed == total ? "PASS " : "FAIL ") << passed << "/"
              << total << "\n";
  }
  return passed == total ? 0 : 1;
}

int run_gen(const Opts& o) {
  const std::string text = render_instance(random_instance(o.atoms, o.seed));
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + o.out);
    f << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Opts o;
  int code = 0;
  CLI::App app{"Finite workbench for relation lifts, subordination calculi, "
               "and completion functors"};
  app.require_subcommand(1);

  const auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
  };
  const auto add_instance = [&](CLI::App* sub) {
    sub->add_option("--instance", o.instance, "Instance file (JSON)")
        ->required();
  };

  CLI::App* check = app.add_subcommand(
      "check", "Check subordination axioms on a loaded instance");
  add_instance(check);
  add_format(check);
  check->add_option("--subordination", o.subordination,
                    "Check one subordination (default: all)");
  check->add_option("--axioms", o.axioms,
                    "Comma-separated axiom list (default S1,S2,S3,S4)");
  check->callback([&] { code = run_check(o); });

  CLI::App* lift = app.add_subcommand(
      "lift", "Lift a relation (hyperspace) or a subordination (term level)");
  add_instance(lift);
  add_format(lift);
  lift->add_option("--relation", o.relation, "Relation to lift");
  lift->add_option("--subordination", o.subordination, "Subordination to lift");
  lift->add_option("--flavor", o.flavor, "box | diamond | em")->required();
  lift->add_option("terms", o.terms,
                   "Two terms for a membership query on the lifted "
                   "subordination")
      ->expected(0, 2);
  lift->callback([&] { code = run_lift(o); });

  CLI::App* comp = app.add_subcommand(
      "compose", "Compose two relations or two subordinations");
  add_instance(comp);
  add_format(comp);
  comp->add_option("--first", o.first, "Applied first")->required();
  comp->add_option("--second", o.second, "Applied second")->required();
  comp->callback([&] { code = run_compose(o); });

  CLI::App* dual = app.add_subcommand(
      "dual", "Dual relation of a subordination, or subordination of a relation");
  add_instance(dual);
  add_format(dual);
  dual->add_option("--relation", o.relation, "Relation side");
  dual->add_option("--subordination", o.subordination, "Subordination side");
  dual->callback([&] { code = run_dual(o); });

  CLI::App* nf = app.add_subcommand("nf", "Normal forms of a modal term");
  add_format(nf);
  nf->add_option("--algebra", o.algebra, "Comma-separated atom names")
      ->required();
  nf->add_option("term", o.terms, "Term")->expected(1);
  nf->callback([&] { code = run_nf(o); });

  CLI::App* leq = app.add_subcommand("leq", "Decide term order");
  add_format(leq);
  leq->add_option("--algebra", o.algebra, "Comma-separated atom names")
      ->required();
  leq->add_option("terms", o.terms, "Two terms")->expected(2);
  leq->callback([&] { code = run_leq(o); });

  CLI::App* mac = app.add_subcommand(
      "macneille", "Completion by normal ideals of an endo subordination");
  add_instance(mac);
  add_format(mac);
  mac->add_option("--subordination", o.subordination, "Endo subordination")
      ->required();
  mac->callback([&] { code = run_macneille(o); });

  CLI::App* sid = app.add_subcommand("sideals", "Enumerate the ideal frame");
  add_instance(sid);
  add_format(sid);
  sid->add_option("--subordination", o.subordination, "Endo subordination")
      ->required();
  sid->callback([&] { code = run_sideals(o); });

  CLI::App* ls = app.add_subcommand(
      "ls", "Completion of the lifted term algebra of a proximity");
  add_instance(ls);
  add_format(ls);
  ls->add_option("--subordination", o.subordination, "Endo subordination")
      ->required();
  ls->callback([&] { code = run_ls(o); });

  CLI::App* jp = app.add_subcommand(
      "jp", "Ideal frame of the lifted term algebra of a proximity");
  add_instance(jp);
  add_format(jp);
  jp->add_option("--subordination", o.subordination, "Endo subordination")
      ->required();
  jp->callback([&] { code = run_jp(o); });

  CLI::App* verify = app.add_subcommand(
      "verify", "Run commuting-square verification suites");
  add_format(verify);
  verify->add_option("--square", o.square,
                     "One square by name (default: all)");
  verify->add_option("--max-size", o.max_size,
                     "Carrier size for the exhaustive family");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--samples", o.samples,
                     "Extra random instances on top of the exhaustive family");
  verify->callback([&] { code = run_verify(o); });

  CLI::App* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  add_format(gen);
  gen->add_option("--atoms", o.atoms, "Carrier size");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--out", o.out, "Write to a file instead of stdout");
  gen->callback([&] { code = run_gen(o); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}
