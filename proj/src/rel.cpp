#include "dualvik/rel.hpp"

#include <string>

namespace dualvik {

Relation::Relation(Algebra source, Algebra target)
    : source_(std::move(source)), target_(std::move(target)),
      matrix_(source_.atom_count(), target_.atom_count()) {}

Relation::Relation(Algebra source, Algebra target, BitMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)),
      matrix_(std::move(matrix)) {
  if (matrix_.rows() != static_cast<std::size_t>(source_.atom_count()) ||
      matrix_.cols() != static_cast<std::size_t>(target_.atom_count()))
    throw ValidationError("relation matrix shape does not match its carriers");
}

Relation identity_relation(const Algebra& x) {
  Relation r(x, x);
  for (int i = 0; i < x.atom_count(); ++i) r.add(i, i);
  return r;
}

Relation empty_relation(const Algebra& x, const Algebra& y) {
  return Relation(x, y);
}

Relation full_relation(const Algebra& x, const Algebra& y) {
  Relation r(x, y);
  for (int i = 0; i < x.atom_count(); ++i)
    for (int j = 0; j < y.atom_count(); ++j) r.add(i, j);
  return r;
}

Relation from_pairs(const Algebra& x, const Algebra& y,
                    const std::vector<std::pair<int, int>>& pairs) {
  Relation r(x, y);
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= x.atom_count() || j < 0 || j >= y.atom_count())
      throw ValidationError("relation pair (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") out of range");
    r.add(i, j);
  }
  return r;
}

Relation compose(const Relation& second, const Relation& first) {
  if (first.target() != second.source())
    throw ValidationError("composition carrier mismatch");
  int nx = first.source().atom_count();
  int nz = second.target().atom_count();
  int ny = first.target().atom_count();
  Relation out(first.source(), second.target());
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y)
      if (first.holds(x, y))
        for (int z = 0; z < nz; ++z)
          if (second.holds(y, z)) out.add(x, z);
  return out;
}

Relation dagger(const Relation& r) {
  return Relation(r.target(), r.source(), r.matrix().transpose());
}

Relation rel_union(const Relation& a, const Relation& b) {
  if (a.source() != b.source() || a.target() != b.target())
    throw ValidationError("relation carrier mismatch");
  Relation out(a.source(), a.target());
  for (int i = 0; i < a.source().atom_count(); ++i)
    for (int j = 0; j < a.target().atom_count(); ++j)
      if (a.holds(i, j) || b.holds(i, j)) out.add(i, j);
  return out;
}

Relation rel_intersect(const Relation& a, const Relation& b) {
  if (a.source() != b.source() || a.target() != b.target())
    throw ValidationError("relation carrier mismatch");
  Relation out(a.source(), a.target());
  for (int i = 0; i < a.source().atom_count(); ++i)
    for (int j = 0; j < a.target().atom_count(); ++j)
      if (a.holds(i, j) && b.holds(i, j)) out.add(i, j);
  return out;
}

bool rel_subset(const Relation& a, const Relation& b) {
  if (a.source() != b.source() || a.target() != b.target())
    throw ValidationError("relation carrier mismatch");
  for (int i = 0; i < a.source().atom_count(); ++i)
    for (int j = 0; j < a.target().atom_count(); ++j)
      if (a.holds(i, j) && !b.holds(i, j)) return false;
  return true;
}

Bits image(const Relation& r, const Bits& xs) {
  if (xs.size() != static_cast<std::size_t>(r.source().atom_count()))
    throw ValidationError("image argument width mismatch");
  Bits out(r.target().atom_count());
  for (std::size_t x = 0; x < xs.size(); ++x)
    if (xs.test(x)) r.matrix().or_row_into(x, out);
  return out;
}

Bits preimage(const Relation& r, const Bits& ys) {
  if (ys.size() != static_cast<std::size_t>(r.target().atom_count()))
    throw ValidationError("preimage argument width mismatch");
  Bits out(r.source().atom_count());
  for (int x = 0; x < r.source().atom_count(); ++x)
    for (int y = 0; y < r.target().atom_count(); ++y)
      if (r.holds(x, y) && ys.test(y)) {
        out.set(x);
        break;
      }
  return out;
}

std::uint64_t image64(const Relation& r, std::uint64_t xs) {
  return image(r, Bits::from_mask(r.source().atom_count(), xs)).low64();
}

std::uint64_t preimage64(const Relation& r, std::uint64_t ys) {
  return preimage(r, Bits::from_mask(r.target().atom_count(), ys)).low64();
}

bool is_equivalence(const Relation& r) {
  if (r.source() != r.target()) return false;
  int n = r.source().atom_count();
  for (int i = 0; i < n; ++i)
    if (!r.holds(i, i)) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (r.holds(i, j) != r.holds(j, i)) return false;
      if (!r.holds(i, j)) continue;
      for (int k = 0; k < n; ++k)
        if (r.holds(j, k) && !r.holds(i, k)) return false;
    }
  return true;
}

namespace {

void check_vietoris_cap(const Algebra& x, int cap) {
  if (x.atom_count() > cap)
    throw CapExceeded("Vietoris construction capped at " + std::to_string(cap) +
                      " points, got " + std::to_string(x.atom_count()));
}

}  // namespace

std::vector<VietorisPoint> vietoris_points(const Algebra& x, int cap) {
  check_vietoris_cap(x, cap);
  std::uint64_t count = std::uint64_t{1} << x.atom_count();
  std::vector<VietorisPoint> out;
  out.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) out.push_back({s});
  return out;
}

Algebra vietoris_algebra(const Algebra& x, int cap) {
  check_vietoris_cap(x, cap);
  std::uint64_t count = std::uint64_t{1} << x.atom_count();
  std::vector<std::string> names;
  names.reserve(count);
  for (std::uint64_t s = 0; s < count; ++s) {
    std::string name = "{";
    for (int i = 0; i < x.atom_count(); ++i) {
      if (!((s >> i) & 1)) continue;
      if (name.size() > 1) name += ",";
      name += x.atom_name(i);
    }
    name += "}";
    names.push_back(std::move(name));
  }
  return Algebra(std::move(names));
}

Relation lift_box(const Relation& r, int cap) {
  check_vietoris_cap(r.source(), cap);
  check_vietoris_cap(r.target(), cap);
  std::uint64_t nf = std::uint64_t{1} << r.source().atom_count();
  std::uint64_t ng = std::uint64_t{1} << r.target().atom_count();
  Relation out(vietoris_algebra(r.source(), cap), vietoris_algebra(r.target(), cap));
  for (std::uint64_t f = 0; f < nf; ++f) {
    std::uint64_t img = image64(r, f);
    for (std::uint64_t g = 0; g < ng; ++g)
      if ((g & ~img) == 0) out.add(static_cast<int>(f), static_cast<int>(g));
  }
  return out;
}

Relation lift_diamond(const Relation& r, int cap) {
  check_vietoris_cap(r.source(), cap);
  check_vietoris_cap(r.target(), cap);
  std::uint64_t nf = std::uint64_t{1} << r.source().atom_count();
  std::uint64_t ng = std::uint64_t{1} << r.target().atom_count();
  Relation out(vietoris_algebra(r.source(), cap), vietoris_algebra(r.target(), cap));
  for (std::uint64_t g = 0; g < ng; ++g) {
    std::uint64_t pre = preimage64(r, g);
    for (std::uint64_t f = 0; f < nf; ++f)
      if ((f & ~pre) == 0) out.add(static_cast<int>(f), static_cast<int>(g));
  }
  return out;
}

Relation lift_em(const Relation& r, int cap) {
  return rel_intersect(lift_box(r, cap), lift_diamond(r, cap));
}

QuotientResult quotient(const Relation& equivalence) {
  if (!is_equivalence(equivalence))
    throw ValidationError("quotient requires an equivalence relation");
  const Algebra& x = equivalence.source();
  int n = x.atom_count();
  std::vector<int> class_of(n, -1);
  std::vector<std::string> class_names;
  int next = 0;
  for (int i = 0; i < n; ++i) {
    if (class_of[i] >= 0) continue;
    for (int j = i; j < n; ++j)
      if (equivalence.holds(i, j)) class_of[j] = next;
    class_names.push_back("[" + x.atom_name(i) + "]");
    ++next;
  }
  Algebra classes(std::move(class_names));
  Relation projection(x, classes);
  for (int i = 0; i < n; ++i) projection.add(i, class_of[i]);
  return {std::move(classes), std::move(projection), std::move(class_of)};
}

}  // namespace dualvik
