#include "dualvik/instance.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dualvik/errors.hpp"
#include "dualvik/rng.hpp"

namespace dualvik {

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ValidationError("instance " + where + ": " + what);
}

void check_keys(const Json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key)) fail(where, "unknown key \"" + key + "\"");
  }
}

std::vector<std::string> name_list(const Json& arr, const std::string& where) {
  if (!arr.is_array() || arr.empty()) fail(where, "expected a nonempty array of names");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const Json& v : arr) {
    if (!v.is_string()) fail(where, "expected a string");
    const std::string s = v.get<std::string>();
    if (s.empty() || !seen.insert(s).second) fail(where, "duplicate or empty name \"" + s + "\"");
    out.push_back(s);
  }
  if (static_cast<int>(out.size()) > Caps{}.enumeration) {
    throw CapExceeded("instance " + where + ": carriers capped at " +
                      std::to_string(Caps{}.enumeration) + " atoms");
  }
  return out;
}

std::string str_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    fail(where, std::string("\"") + key + "\" must be a string");
  }
  return obj[key].get<std::string>();
}

int member_index(const Algebra& a, const Json& v, const std::string& where) {
  if (!v.is_string()) fail(where, "expected a member name");
  const int i = a.atom_index(v.get<std::string>());
  if (i < 0) fail(where, "unknown member \"" + v.get<std::string>() + "\"");
  return i;
}

std::uint64_t element_mask(const Algebra& a, const Json& v,
                           const std::string& where) {
  if (!v.is_array()) fail(where, "element literals are arrays of atom names");
  std::uint64_t mask = 0;
  for (const Json& atom : v) {
    mask |= std::uint64_t{1} << member_index(a, atom, where);
  }
  return mask;
}

}  // namespace

const Algebra* Instance::find_carrier(const std::string& name) const {
  for (const auto& [n, a] : algebras) {
    if (n == name) return &a;
  }
  for (const auto& [n, a] : points) {
    if (n == name) return &a;
  }
  return nullptr;
}

const Relation* Instance::find_relation(const std::string& name) const {
  for (const auto& [n, r] : relations) {
    if (n == name) return &r;
  }
  return nullptr;
}

const Subordination* Instance::find_subordination(const std::string& name) const {
  for (const auto& [n, s] : subordinations) {
    if (n == name) return &s;
  }
  return nullptr;
}

Instance parse_instance(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = e.byte < text.size() ? e.byte : text.size();
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("line " + std::to_string(line) + " column " +
                         std::to_string(col) + ": " + e.what(),
                     e.byte);
  }
  if (!root.is_object()) throw ValidationError("instance: top level must be an object");
  check_keys(root, "top level", {"algebras", "points", "relations", "subordinations"});

  Instance inst;
  std::set<std::string> carrier_names;
  const auto add_carriers = [&](const char* key, const char* member_key,
                                auto& into) {
    if (!root.contains(key)) return;
    const Json& sec = root[key];
    if (!sec.is_object()) fail(key, "expected an object of named entries");
    for (const auto& [name, entry] : sec.items()) {
      const std::string where = std::string(key) + "." + name;
      if (!carrier_names.insert(name).second) fail(where, "duplicate carrier name");
      if (!entry.is_object()) fail(where, "expected an object");
      check_keys(entry, where, {member_key});
      if (!entry.contains(member_key)) fail(where, std::string("missing \"") + member_key + "\"");
      into.emplace_back(name, Algebra(name_list(entry[member_key], where)));
    }
  };
  add_carriers("algebras", "atoms", inst.algebras);
  add_carriers("points", "points", inst.points);

  if (root.contains("relations")) {
    const Json& sec = root["relations"];
    if (!sec.is_object()) fail("relations", "expected an object of named entries");
    for (const auto& [name, entry] : sec.items()) {
      const std::string where = "relations." + name;
      if (!entry.is_object()) fail(where, "expected an object");
      check_keys(entry, where, {"source", "target", "pairs"});
      const std::string sname = str_field(entry, "source", where);
      const std::string tname = str_field(entry, "target", where);
      const Algebra* src = inst.find_carrier(sname);
      const Algebra* tgt = inst.find_carrier(tname);
      if (!src || !tgt)
        fail(where, "\"" + (src ? tname : sname) +
                        "\" does not name a declared carrier");
      if (!entry.contains("pairs")) fail(where, "missing \"pairs\"");
      Relation r(*src, *tgt);
      if (!entry["pairs"].is_array()) fail(where, "\"pairs\" must be an array");
      for (const Json& p : entry["pairs"]) {
        if (!p.is_array() || p.size() != 2) fail(where, "each pair is a two-element array");
        r.add(member_index(*src, p[0], where), member_index(*tgt, p[1], where));
      }
      inst.relations.emplace_back(name, std::move(r));
    }
  }

  if (root.contains("subordinations")) {
    const Json& sec = root["subordinations"];
    if (!sec.is_object()) fail("subordinations", "expected an object of named entries");
    for (const auto& [name, entry] : sec.items()) {
      const std::string where = "subordinations." + name;
      if (!entry.is_object()) fail(where, "expected an object");
      if (entry.contains("dual")) {
        check_keys(entry, where, {"dual"});
        const Relation* r = inst.find_relation(str_field(entry, "dual", where));
        if (!r) fail(where, "\"dual\" does not name a declared relation");
        inst.subordinations.emplace_back(name, Subordination::from_relation(*r));
        continue;
      }
      if (entry.contains("dual_relation")) {
        check_keys(entry, where, {"source", "target", "dual_relation"});
        const std::string sname = str_field(entry, "source", where);
        const std::string tname = str_field(entry, "target", where);
        const Algebra* src = inst.find_carrier(sname);
        const Algebra* tgt = inst.find_carrier(tname);
        if (!src || !tgt)
          fail(where, "\"" + (src ? tname : sname) +
                          "\" does not name a declared carrier");
        if (!entry["dual_relation"].is_array()) fail(where, "\"dual_relation\" must be an array of atom pairs");
        Relation d(*src, *tgt);
        for (const Json& p : entry["dual_relation"]) {
          if (!p.is_array() || p.size() != 2) fail(where, "each pair is a two-element array");
          d.add(member_index(*src, p[0], where), member_index(*tgt, p[1], where));
        }
        inst.subordinations.emplace_back(name, Subordination::from_relation(d));
        continue;
      }
      check_keys(entry, where, {"source", "target", "pairs"});
      const std::string sname = str_field(entry, "source", where);
      const std::string tname = str_field(entry, "target", where);
      const Algebra* src = inst.find_carrier(sname);
      const Algebra* tgt = inst.find_carrier(tname);
      if (!src || !tgt)
        fail(where, "\"" + (src ? tname : sname) +
                        "\" does not name a declared carrier");
      if (!entry.contains("pairs") || !entry["pairs"].is_array()) fail(where, "\"pairs\" must be an array");
      std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
      for (const Json& p : entry["pairs"]) {
        if (!p.is_array() || p.size() != 2) fail(where, "each pair is a two-element array");
        pairs.emplace_back(element_mask(*src, p[0], where),
                           element_mask(*tgt, p[1], where));
      }
      try {
        inst.subordinations.emplace_back(
            name, Subordination::from_pairs(*src, *tgt, pairs));
      } catch (const CapExceeded&) {
        throw;
      } catch (const ValidationError& e) {
        fail(where, e.what());
      }
    }
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

std::string render_instance(const Instance& inst) {
  Json root = Json::object();
  const auto carriers = [&](const std::vector<std::pair<std::string, Algebra>>& from,
                            const char* member_key) {
    Json sec = Json::object();
    for (const auto& [name, a] : from) {
      sec[name] = Json::object();
      sec[name][member_key] = a.atom_names();
    }
    return sec;
  };
  if (!inst.algebras.empty()) root["algebras"] = carriers(inst.algebras, "atoms");
  if (!inst.points.empty()) root["points"] = carriers(inst.points, "points");
  const auto carrier_name = [&](const Algebra& a) -> std::string {
    for (const auto& [n, c] : inst.algebras) {
      if (c == a) return n;
    }
    for (const auto& [n, c] : inst.points) {
      if (c == a) return n;
    }
    throw ValidationError("render: relation endpoint is not a declared carrier");
  };
  if (!inst.relations.empty()) {
    Json sec = Json::object();
    for (const auto& [name, r] : inst.relations) {
      Json entry = Json::object();
      entry["source"] = carrier_name(r.source());
      entry["target"] = carrier_name(r.target());
      Json pairs = Json::array();
      for (int i = 0; i < r.source().atom_count(); ++i) {
        for (int j = 0; j < r.target().atom_count(); ++j) {
          if (r.holds(i, j)) {
            pairs.push_back(Json::array(
                {r.source().atom_name(i), r.target().atom_name(j)}));
          }
        }
      }
      entry["pairs"] = std::move(pairs);
      sec[name] = std::move(entry);
    }
    root["relations"] = std::move(sec);
  }
  if (!inst.subordinations.empty()) {
    Json sec = Json::object();
    for (const auto& [name, s] : inst.subordinations) {
      Json entry = Json::object();
      const Relation& d = s.dual();
      std::string backing;
      for (const auto& [rn, r] : inst.relations) {
        if (r == d) backing = rn;
      }
      if (!backing.empty()) {
        entry["dual"] = backing;
      } else {
        entry["source"] = carrier_name(s.source());
        entry["target"] = carrier_name(s.target());
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
        entry["pairs"] = std::move(pairs);
      }
      sec[name] = std::move(entry);
    }
    root["subordinations"] = std::move(sec);
  }
  return root.dump(2) + "\n";
}

Instance random_instance(int atoms, std::uint64_t seed) {
  if (atoms < 1 || atoms > Caps{}.randomized) {
    throw CapExceeded("generated instances capped at " +
                      std::to_string(Caps{}.randomized) + " atoms");
  }
  RandomSource rng(seed);
  Instance inst;
  inst.algebras.emplace_back("A", Algebra::with_size(atoms, "p"));
  inst.points.emplace_back("X", Algebra::with_size(atoms, "x"));
  const Algebra& a = inst.algebras.front().second;
  const Algebra& x = inst.points.front().second;
  Relation r(x, x);
  Relation d(a, a);
  for (int i = 0; i < atoms; ++i) {
    for (int j = 0; j < atoms; ++j) {
      if (rng.coin()) r.add(i, j);
      if (rng.coin()) d.add(i, j);
    }
  }
  Subordination s = Subordination::from_relation(d);
  inst.relations.emplace_back("R", std::move(r));
  inst.relations.emplace_back("SD", std::move(d));
  inst.subordinations.emplace_back("S", std::move(s));
  return inst;
}

}  // namespace dualvik
