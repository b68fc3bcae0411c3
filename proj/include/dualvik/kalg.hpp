#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "dualvik/bits.hpp"
#include "dualvik/boolalg.hpp"
#include "dualvik/config.hpp"

namespace dualvik {

// A term of the free modal construction over a base algebra: boolean
// combinations of box/diamond generators. Terms are immutable trees; equality
// of the algebra's elements is decided by the normal-form order procedure,
// never by tree comparison.
class Term;
using TermPtr = std::shared_ptr<const Term>;

class Term {
public:
  enum class Kind { bot, top, box, diamond, neg, conj, disj };

  Kind kind() const { return kind_; }
  const Algebra& base() const { return base_; }
  const Element& generator() const;     // box/diamond only
  const TermPtr& child() const;         // neg only
  const TermPtr& left() const;          // conj/disj
  const TermPtr& right() const;

private:
  friend TermPtr t_bot(const Algebra&);
  friend TermPtr t_top(const Algebra&);
  friend TermPtr t_box(const Element&);
  friend TermPtr t_dia(const Element&);
  friend TermPtr t_not(const TermPtr&);
  friend TermPtr t_and(const TermPtr&, const TermPtr&);
  friend TermPtr t_or(const TermPtr&, const TermPtr&);

  Term(Kind kind, Algebra base) : kind_(kind), base_(std::move(base)) {}

  Kind kind_;
  Algebra base_;
  std::shared_ptr<const Element> gen_;
  TermPtr left_, right_;
};

TermPtr t_bot(const Algebra& base);
TermPtr t_top(const Algebra& base);
TermPtr t_box(const Element& generator);
TermPtr t_dia(const Element& generator);
TermPtr t_not(const TermPtr& t);
TermPtr t_and(const TermPtr& l, const TermPtr& r);
TermPtr t_or(const TermPtr& l, const TermPtr& r);

// Grammar: 0 | 1 | box(<elem>) | dia(<elem>) | !t | t & t | t "|" t | (t),
// precedence ! > & > |; <elem> is a boolean expression over atom names and
// 0/1 with the same operators. Throws ParseError with a byte position.
TermPtr parse_term(std::string_view text, const Algebra& base);

std::string render_term(const TermPtr& t);

// Disjunctive normal form: a join of clauses box(a) & dia(b1) & ... & dia(bn)
// with every diamond nonzero and below the clause box. Pure-diamond clauses
// carry box = 1; a box-0 clause has no diamonds. The empty join is 0.
struct DnfClause {
  std::uint64_t box;
  std::vector<std::uint64_t> diamonds;  // sorted ascending, deduplicated

  bool operator==(const DnfClause& o) const {
    return box == o.box && diamonds == o.diamonds;
  }
  bool operator<(const DnfClause& o) const {
    return box != o.box ? box < o.box : diamonds < o.diamonds;
  }
};

struct Dnf {
  Algebra base;
  std::vector<DnfClause> clauses;  // sorted, absorption-pruned
};

// Conjunctive normal form: a meet of conjuncts dia(c) | box(d1) | ... with
// every box below 1 and above the conjunct diamond. Pure-box conjuncts carry
// diamond = 0. The empty meet is 1.
struct CnfConjunct {
  std::uint64_t diamond;
  std::vector<std::uint64_t> boxes;

  bool operator==(const CnfConjunct& o) const {
    return diamond == o.diamond && boxes == o.boxes;
  }
  bool operator<(const CnfConjunct& o) const {
    return diamond != o.diamond ? diamond < o.diamond : boxes < o.boxes;
  }
};

struct Cnf {
  Algebra base;
  std::vector<CnfConjunct> conjuncts;
};

Dnf to_dnf(const TermPtr& t);
Cnf to_cnf(const TermPtr& t);

// De Morgan duals: negate every component.
Cnf dual_cnf(const Dnf& d);
Dnf dual_dnf(const Cnf& c);

TermPtr dnf_term(const Dnf& d);
TermPtr cnf_term(const Cnf& c);
std::string render_dnf(const Dnf& d);
std::string render_cnf(const Cnf& c);

// The semantic domain: sets of subsets of the atom set, one bit per subset,
// indexed by the binary encoding of the subset. Reserved for oracles; the
// production order path is the normal-form criterion.
using SemanticValue = Bits;

SemanticValue eval_semantic(const TermPtr& t, int cap = Caps{}.vietoris);
SemanticValue eval_semantic(const Dnf& d, int cap = Caps{}.vietoris);
SemanticValue eval_semantic(const Cnf& c, int cap = Caps{}.vietoris);

// Any normal forms of the given semantic value (clause per member subset and
// its dual); used to realize arbitrary K-elements as terms.
Dnf semantic_to_dnf(const SemanticValue& v, const Algebra& base);
Cnf semantic_to_cnf(const SemanticValue& v, const Algebra& base);
TermPtr semantic_term(const SemanticValue& v, const Algebra& base);

// Order decision procedure: x <= y iff for every DNF clause of x and CNF
// conjunct of y, some conjunct box dominates the clause box or some clause
// diamond sits below the conjunct diamond.
bool clause_conjunct_leq(const DnfClause& i, const CnfConjunct& j);
bool nf_leq(const Dnf& x, const Cnf& y);
bool term_leq(const TermPtr& x, const TermPtr& y);
bool term_equal(const TermPtr& x, const TermPtr& y);

// Canonical normal-form tables for every K-element over an n-atom base,
// indexed by semantic bitmask; cached per atom count. n <= 3. The clause and
// conjunct pools deduplicate across elements so bulk decisions can memoize
// per distinct pair.
struct NfTables {
  Algebra base;                 // canonical n-atom base ("p0", "p1", ...)
  std::vector<Dnf> dnfs;        // index = semantic mask
  std::vector<Cnf> cnfs;
  std::vector<DnfClause> clause_pool;
  std::vector<CnfConjunct> conjunct_pool;
  std::vector<std::vector<int>> clause_ids;    // per mask, into clause_pool
  std::vector<std::vector<int>> conjunct_ids;  // per mask, into conjunct_pool
  std::vector<Bits> conjunct_sets;             // per mask, over conjunct_pool
};

const NfTables& nf_tables(int atom_count);

}  // namespace dualvik
