#include "dualvik/kalg.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <mutex>
#include <optional>

namespace dualvik {

const Element& Term::generator() const {
  if (!gen_) throw ValidationError("term node has no generator");
  return *gen_;
}
const TermPtr& Term::child() const { return left_; }
const TermPtr& Term::left() const { return left_; }
const TermPtr& Term::right() const { return right_; }

TermPtr t_bot(const Algebra& base) {
  return TermPtr(new Term(Term::Kind::bot, base));
}
TermPtr t_top(const Algebra& base) {
  return TermPtr(new Term(Term::Kind::top, base));
}
TermPtr t_box(const Element& generator) {
  auto t = new Term(Term::Kind::box, generator.algebra());
  t->gen_ = std::make_shared<const Element>(generator);
  return TermPtr(t);
}
TermPtr t_dia(const Element& generator) {
  auto t = new Term(Term::Kind::diamond, generator.algebra());
  t->gen_ = std::make_shared<const Element>(generator);
  return TermPtr(t);
}
TermPtr t_not(const TermPtr& x) {
  auto t = new Term(Term::Kind::neg, x->base());
  t->left_ = x;
  return TermPtr(t);
}
TermPtr t_and(const TermPtr& l, const TermPtr& r) {
  require_same_algebra(l->base(), r->base());
  auto t = new Term(Term::Kind::conj, l->base());
  t->left_ = l;
  t->right_ = r;
  return TermPtr(t);
}
TermPtr t_or(const TermPtr& l, const TermPtr& r) {
  require_same_algebra(l->base(), r->base());
  auto t = new Term(Term::Kind::disj, l->base());
  t->left_ = l;
  t->right_ = r;
  return TermPtr(t);
}

// --- parsing ---------------------------------------------------------------

namespace {

class Parser {
public:
  Parser(std::string_view text, const Algebra& base) : text_(text), base_(base) {}

  TermPtr parse() {
    TermPtr t = parse_or();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return t;
  }

private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool eat(char c) {
    if (!peek_is(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!eat(c))
      throw ParseError(std::string("expected '") + c + "'", pos_);
  }

  std::optional<std::string> try_identifier() {
    skip_ws();
    std::size_t start = pos_;
    auto head = [](char c) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    };
    auto body = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    };
    if (pos_ >= text_.size() || !head(text_[pos_])) return std::nullopt;
    while (pos_ < text_.size() && body(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  TermPtr parse_or() {
    TermPtr t = parse_and();
    while (eat('|')) t = t_or(t, parse_and());
    return t;
  }

  TermPtr parse_and() {
    TermPtr t = parse_unary();
    while (eat('&')) t = t_and(t, parse_unary());
    return t;
  }

  TermPtr parse_unary() {
    if (eat('!')) return t_not(parse_unary());
    if (eat('(')) {
      TermPtr t = parse_or();
      expect(')');
      return t;
    }
    if (eat('0')) return t_bot(base_);
    if (eat('1')) return t_top(base_);
    skip_ws();
    std::size_t at = pos_;
    auto ident = try_identifier();
    if (!ident)
      throw ParseError("expected a term", pos_);
    if (*ident == "box" || *ident == "dia") {
      expect('(');
      std::uint64_t mask = parse_elem_or();
      expect(')');
      Element e(base_, mask);
      return *ident == "box" ? t_box(e) : t_dia(e);
    }
    throw ParseError("unexpected identifier '" + *ident + "'", at);
  }

  std::uint64_t parse_elem_or() {
    std::uint64_t m = parse_elem_and();
    while (eat('|')) m |= parse_elem_and();
    return m;
  }

  std::uint64_t parse_elem_and() {
    std::uint64_t m = parse_elem_unary();
    while (eat('&')) m &= parse_elem_unary();
    return m;
  }

  std::uint64_t parse_elem_unary() {
    if (eat('!')) return ~parse_elem_unary() & base_.full_mask();
    if (eat('(')) {
      std::uint64_t m = parse_elem_or();
      expect(')');
      return m;
    }
    if (eat('0')) return 0;
    if (eat('1')) return base_.full_mask();
    skip_ws();
    std::size_t at = pos_;
    auto ident = try_identifier();
    if (!ident)
      throw ParseError("expected an element expression", pos_);
    int i = base_.atom_index(*ident);
    if (i < 0)
      throw ParseError("unknown atom '" + *ident + "'", at);
    return std::uint64_t{1} << i;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  const Algebra& base_;
};

}  // namespace

TermPtr parse_term(std::string_view text, const Algebra& base) {
  return Parser(text, base).parse();
}

// --- rendering -------------------------------------------------------------

namespace {

// Precedence levels: | = 0, & = 1, ! = 2, leaf = 3.
void render_into(const TermPtr& t, int min_prec, std::string& out) {
  auto wrap = [&](int prec, auto&& body) {
    bool parens = prec < min_prec;
    if (parens) out += "(";
    body();
    if (parens) out += ")";
  };
  switch (t->kind()) {
    case Term::Kind::bot: out += "0"; break;
    case Term::Kind::top: out += "1"; break;
    case Term::Kind::box:
      out += "box(" + render_element(t->generator()) + ")";
      break;
    case Term::Kind::diamond:
      out += "dia(" + render_element(t->generator()) + ")";
      break;
    case Term::Kind::neg:
      wrap(2, [&] {
        out += "!";
        render_into(t->child(), 3, out);
      });
      break;
    case Term::Kind::conj:
      wrap(1, [&] {
        render_into(t->left(), 1, out);
        out += " & ";
        render_into(t->right(), 2, out);
      });
      break;
    case Term::Kind::disj:
      wrap(0, [&] {
        render_into(t->left(), 0, out);
        out += " | ";
        render_into(t->right(), 1, out);
      });
      break;
  }
}

}  // namespace

std::string render_term(const TermPtr& t) {
  std::string out;
  render_into(t, 0, out);
  return out;
}

// --- normal forms ----------------------------------------------------------

namespace {

// Clause with diamonds restricted below the box and reduced to the minimal
// antichain; nullopt when the clause collapses to 0.
std::optional<DnfClause> normalize_clause(std::uint64_t box,
                                          std::vector<std::uint64_t> diamonds) {
  for (auto& d : diamonds) {
    d &= box;
    if (d == 0) return std::nullopt;
  }
  std::sort(diamonds.begin(), diamonds.end());
  diamonds.erase(std::unique(diamonds.begin(), diamonds.end()), diamonds.end());
  std::vector<std::uint64_t> kept;
  for (std::size_t i = 0; i < diamonds.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < diamonds.size() && !redundant; ++j)
      if (i != j && (diamonds[j] & ~diamonds[i]) == 0 &&
          diamonds[j] != diamonds[i])
        redundant = true;  // a strictly smaller diamond implies this one
    if (!redundant) kept.push_back(diamonds[i]);
  }
  return DnfClause{box, std::move(kept)};
}

// Single-clause instance of the order criterion; exact on normalized clauses.
bool clause_leq(const DnfClause& a, const DnfClause& b) {
  if (a.box & ~b.box) return false;
  for (std::uint64_t bd : b.diamonds) {
    bool witnessed = false;
    for (std::uint64_t ad : a.diamonds)
      if ((ad & ~bd) == 0) {
        witnessed = true;
        break;
      }
    if (!witnessed) return false;
  }
  return true;
}

std::vector<DnfClause> canonicalize(std::vector<DnfClause> clauses) {
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  std::vector<DnfClause> kept;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    bool absorbed = false;
    for (std::size_t j = 0; j < clauses.size() && !absorbed; ++j)
      if (i != j && clause_leq(clauses[i], clauses[j]) &&
          !(clauses[j] == clauses[i]))
        absorbed = true;
    if (!absorbed) kept.push_back(clauses[i]);
  }
  return kept;
}

std::vector<DnfClause> dnf_and(const std::vector<DnfClause>& l,
                               const std::vector<DnfClause>& r) {
  std::vector<DnfClause> out;
  for (const auto& a : l)
    for (const auto& b : r) {
      std::uint64_t box = a.box & b.box;
      std::vector<std::uint64_t> diamonds = a.diamonds;
      diamonds.insert(diamonds.end(), b.diamonds.begin(), b.diamonds.end());
      if (auto c = normalize_clause(box, std::move(diamonds)))
        out.push_back(std::move(*c));
    }
  return canonicalize(std::move(out));
}

std::vector<DnfClause> dnf_or(std::vector<DnfClause> l,
                              const std::vector<DnfClause>& r) {
  l.insert(l.end(), r.begin(), r.end());
  return canonicalize(std::move(l));
}

// DNF of t (negated = false) or of !t (negated = true), pushing negation to
// the generators.
std::vector<DnfClause> dnf_of(const TermPtr& t, bool negated,
                              std::uint64_t full) {
  switch (t->kind()) {
    case Term::Kind::bot:
      return negated ? std::vector<DnfClause>{{full, {}}}
                     : std::vector<DnfClause>{};
    case Term::Kind::top:
      return negated ? std::vector<DnfClause>{}
                     : std::vector<DnfClause>{{full, {}}};
    case Term::Kind::box: {
      std::uint64_t g = t->generator().mask();
      if (!negated) return {{g, {}}};
      // !box(g) = dia(!g)
      std::uint64_t ng = ~g & full;
      if (ng == 0) return {};
      return {{full, {ng}}};
    }
    case Term::Kind::diamond: {
      std::uint64_t g = t->generator().mask();
      if (negated) return {{~g & full, {}}};
      if (g == 0) return {};
      return {{full, {g}}};
    }
    case Term::Kind::neg:
      return dnf_of(t->child(), !negated, full);
    case Term::Kind::conj: {
      auto l = dnf_of(t->left(), negated, full);
      auto r = dnf_of(t->right(), negated, full);
      return negated ? dnf_or(std::move(l), r) : dnf_and(l, r);
    }
    case Term::Kind::disj: {
      auto l = dnf_of(t->left(), negated, full);
      auto r = dnf_of(t->right(), negated, full);
      return negated ? dnf_and(l, r) : dnf_or(std::move(l), r);
    }
  }
  return {};
}

}  // namespace

Dnf to_dnf(const TermPtr& t) {
  return Dnf{t->base(), dnf_of(t, false, t->base().full_mask())};
}

Cnf dual_cnf(const Dnf& d) {
  std::uint64_t full = d.base.full_mask();
  std::vector<CnfConjunct> conjuncts;
  conjuncts.reserve(d.clauses.size());
  for (const auto& c : d.clauses) {
    CnfConjunct j{~c.box & full, {}};
    j.boxes.reserve(c.diamonds.size());
    for (std::uint64_t b : c.diamonds) j.boxes.push_back(~b & full);
    std::sort(j.boxes.begin(), j.boxes.end());
    conjuncts.push_back(std::move(j));
  }
  std::sort(conjuncts.begin(), conjuncts.end());
  return Cnf{d.base, std::move(conjuncts)};
}

Dnf dual_dnf(const Cnf& c) {
  std::uint64_t full = c.base.full_mask();
  std::vector<DnfClause> clauses;
  clauses.reserve(c.conjuncts.size());
  for (const auto& j : c.conjuncts) {
    DnfClause cl{~j.diamond & full, {}};
    cl.diamonds.reserve(j.boxes.size());
    for (std::uint64_t b : j.boxes) cl.diamonds.push_back(~b & full);
    std::sort(cl.diamonds.begin(), cl.diamonds.end());
    clauses.push_back(std::move(cl));
  }
  std::sort(clauses.begin(), clauses.end());
  return Dnf{c.base, std::move(clauses)};
}

Cnf to_cnf(const TermPtr& t) {
  return dual_cnf(Dnf{t->base(), dnf_of(t, true, t->base().full_mask())});
}

TermPtr dnf_term(const Dnf& d) {
  TermPtr out;
  for (const auto& c : d.clauses) {
    TermPtr clause = t_box(Element(d.base, c.box));
    for (std::uint64_t b : c.diamonds)
      clause = t_and(clause, t_dia(Element(d.base, b)));
    out = out ? t_or(out, clause) : clause;
  }
  return out ? out : t_bot(d.base);
}

TermPtr cnf_term(const Cnf& c) {
  TermPtr out;
  for (const auto& j : c.conjuncts) {
    TermPtr conjunct = t_dia(Element(c.base, j.diamond));
    for (std::uint64_t b : j.boxes)
      conjunct = t_or(conjunct, t_box(Element(c.base, b)));
    out = out ? t_and(out, conjunct) : conjunct;
  }
  return out ? out : t_top(c.base);
}

std::string render_dnf(const Dnf& d) {
  if (d.clauses.empty()) return "0";
  std::string out;
  for (const auto& c : d.clauses) {
    if (!out.empty()) out += " | ";
    out += "box(" + render_mask(d.base, c.box) + ")";
    for (std::uint64_t b : c.diamonds)
      out += " & dia(" + render_mask(d.base, b) + ")";
  }
  return out;
}

std::string render_cnf(const Cnf& c) {
  if (c.conjuncts.empty()) return "1";
  std::string out;
  for (const auto& j : c.conjuncts) {
    if (!out.empty()) out += " & ";
    out += "(dia(" + render_mask(c.base, j.diamond) + ")";
    for (std::uint64_t b : j.boxes)
      out += " | box(" + render_mask(c.base, b) + ")";
    out += ")";
  }
  return out;
}

// --- semantics -------------------------------------------------------------

namespace {

std::size_t semantic_width(const Algebra& base, int cap) {
  if (base.atom_count() > cap)
    throw CapExceeded("semantic evaluation capped at " + std::to_string(cap) +
                      " atoms, got " + std::to_string(base.atom_count()));
  return std::size_t{1} << base.atom_count();
}

}  // namespace

SemanticValue eval_semantic(const TermPtr& t, int cap) {
  std::size_t width = semantic_width(t->base(), cap);
  switch (t->kind()) {
    case Term::Kind::bot: return Bits(width);
    case Term::Kind::top: return Bits::ones(width);
    case Term::Kind::box: {
      Bits out(width);
      std::uint64_t g = t->generator().mask();
      for (std::size_t f = 0; f < width; ++f)
        if ((f & ~g) == 0) out.set(f);
      return out;
    }
    case Term::Kind::diamond: {
      Bits out(width);
      std::uint64_t g = t->generator().mask();
      for (std::size_t f = 0; f < width; ++f)
        if (f & g) out.set(f);
      return out;
    }
    case Term::Kind::neg: return ~eval_semantic(t->child(), cap);
    case Term::Kind::conj:
      return eval_semantic(t->left(), cap) & eval_semantic(t->right(), cap);
    case Term::Kind::disj:
      return eval_semantic(t->left(), cap) | eval_semantic(t->right(), cap);
  }
  return Bits(width);
}

SemanticValue eval_semantic(const Dnf& d, int cap) {
  std::size_t width = semantic_width(d.base, cap);
  Bits out(width);
  for (const auto& c : d.clauses)
    for (std::size_t f = 0; f < width; ++f) {
      if (f & ~c.box) continue;
      bool hit = true;
      for (std::uint64_t b : c.diamonds)
        if ((f & b) == 0) {
          hit = false;
          break;
        }
      if (hit) out.set(f);
    }
  return out;
}

SemanticValue eval_semantic(const Cnf& c, int cap) {
  std::size_t width = semantic_width(c.base, cap);
  Bits out = Bits::ones(width);
  for (const auto& j : c.conjuncts)
    for (std::size_t f = 0; f < width; ++f) {
      if (f & j.diamond) continue;
      bool boxed = false;
      for (std::uint64_t b : j.boxes)
        if ((f & ~b) == 0) {
          boxed = true;
          break;
        }
      if (!boxed) out.set(f, false);
    }
  return out;
}

Dnf semantic_to_dnf(const SemanticValue& v, const Algebra& base) {
  if (v.size() != (std::size_t{1} << base.atom_count()))
    throw ValidationError("semantic value width does not match the base");
  std::vector<DnfClause> clauses;
  for (std::size_t f = 0; f < v.size(); ++f) {
    if (!v.test(f)) continue;
    DnfClause c{f, {}};
    for (int i = 0; i < base.atom_count(); ++i)
      if ((f >> i) & 1) c.diamonds.push_back(std::uint64_t{1} << i);
    clauses.push_back(std::move(c));
  }
  return Dnf{base, canonicalize(std::move(clauses))};
}

Cnf semantic_to_cnf(const SemanticValue& v, const Algebra& base) {
  return dual_cnf(semantic_to_dnf(~v, base));
}

TermPtr semantic_term(const SemanticValue& v, const Algebra& base) {
  return dnf_term(semantic_to_dnf(v, base));
}

// --- order -----------------------------------------------------------------

bool clause_conjunct_leq(const DnfClause& i, const CnfConjunct& j) {
  for (std::uint64_t d : j.boxes)
    if ((i.box & ~d) == 0) return true;
  for (std::uint64_t b : i.diamonds)
    if ((b & ~j.diamond) == 0) return true;
  return false;
}

bool nf_leq(const Dnf& x, const Cnf& y) {
  for (const auto& i : x.clauses)
    for (const auto& j : y.conjuncts)
      if (!clause_conjunct_leq(i, j)) return false;
  return true;
}

bool term_leq(const TermPtr& x, const TermPtr& y) {
  require_same_algebra(x->base(), y->base());
  return nf_leq(to_dnf(x), to_cnf(y));
}

bool term_equal(const TermPtr& x, const TermPtr& y) {
  return term_leq(x, y) && term_leq(y, x);
}

// --- canonical tables ------------------------------------------------------

const NfTables& nf_tables(int atom_count) {
  if (atom_count < 0 || atom_count > 3)
    throw CapExceeded("normal-form tables exist for at most 3 atoms");
  static std::array<NfTables, 4> cache;
  static std::array<std::once_flag, 4> once;
  std::call_once(once[atom_count], [atom_count] {
    NfTables t;
    t.base = Algebra::with_size(atom_count, "p");
    std::size_t points = std::size_t{1} << atom_count;
    std::size_t count = std::size_t{1} << points;
    t.dnfs.reserve(count);
    t.cnfs.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
      SemanticValue v = Bits::from_mask(points, mask);
      t.dnfs.push_back(semantic_to_dnf(v, t.base));
      t.cnfs.push_back(semantic_to_cnf(v, t.base));
    }
    std::map<DnfClause, int> clause_index;
    std::map<CnfConjunct, int> conjunct_index;
    t.clause_ids.resize(count);
    t.conjunct_ids.resize(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
      for (const auto& c : t.dnfs[mask].clauses) {
        auto [it, fresh] =
            clause_index.emplace(c, static_cast<int>(t.clause_pool.size()));
        if (fresh) t.clause_pool.push_back(c);
        t.clause_ids[mask].push_back(it->second);
      }
      for (const auto& j : t.cnfs[mask].conjuncts) {
        auto [it, fresh] =
            conjunct_index.emplace(j, static_cast<int>(t.conjunct_pool.size()));
        if (fresh) t.conjunct_pool.push_back(j);
        t.conjunct_ids[mask].push_back(it->second);
      }
    }
    t.conjunct_sets.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
      Bits set(t.conjunct_pool.size());
      for (int id : t.conjunct_ids[mask]) set.set(id);
      t.conjunct_sets.push_back(std::move(set));
    }
    cache[atom_count] = std::move(t);
  });
  return cache[atom_count];
}

}  // namespace dualvik
