#include "tempo/rewrite.hpp"

#include <map>
#include <mutex>

namespace tempo {

namespace {

/// The constraints are linear in the field symbols and homogeneous in
/// (field sector, total derivative order), so normalization is exact
/// Gaussian elimination on each finite symbol block:
///
///   sector phi:        d^g (lap phi) = 0
///   sector g1..g3:     d^g (lap g_i) = 0,  d^g (d_j g_j) = 0
///   sector h../htr:    d^g (lap h)   = 0,  d^g (d_j h_{ij} + (1/2) d_i h) = 0
///
/// The reduced row echelon form gives a substitution for every pivot symbol
/// in terms of non-pivot symbols; applying it once is a fixed point. This is
/// the completion of the three oriented rules: mixed consequences such as
/// d3(div g) - lap g3 = 0 reduce to zero as well.

enum class Sector { phi, g, h };

/// The trace definition couples phi to the h components, so with it enabled
/// they reduce as one block.
Sector sector_of(FieldBase b, const RewriteRuleSet& rules) {
  switch (b) {
    case FieldBase::phi:
      return rules.trace_definition ? Sector::h : Sector::phi;
    case FieldBase::g1:
    case FieldBase::g2:
    case FieldBase::g3: return Sector::g;
    default: return Sector::h;
  }
}

/// Pivot preference: eliminate x3-heavy symbols and late bases first, so the
/// survivors match the hand orientation (g3, h_{i3} and double-d3 symbols
/// disappear; the trace symbol h is kept).
int base_rank(FieldBase b) {
  switch (b) {
    case FieldBase::htr: return 0;
    case FieldBase::phi: return 1;
    case FieldBase::g1: return 1;
    case FieldBase::g2: return 2;
    case FieldBase::g3: return 3;
    case FieldBase::h11: return 1;
    case FieldBase::h12: return 2;
    case FieldBase::h22: return 3;
    case FieldBase::h13: return 4;
    case FieldBase::h23: return 5;
    case FieldBase::h33: return 6;
  }
  return 0;
}

bool priority_less(const FieldSymbol& a, const FieldSymbol& b) {
  if (a.deriv[2] != b.deriv[2]) return a.deriv[2] < b.deriv[2];
  int ra = base_rank(a.base), rb = base_rank(b.base);
  if (ra != rb) return ra < rb;
  if (a.deriv[1] != b.deriv[1]) return a.deriv[1] < b.deriv[1];
  if (a.deriv[0] != b.deriv[0]) return a.deriv[0] < b.deriv[0];
  return a.base < b.base;
}

struct PriorityLess {
  bool operator()(const FieldSymbol& a, const FieldSymbol& b) const {
    return priority_less(a, b);
  }
};

/// Sparse row over the symbol block; keyed highest-priority-first so
/// begin() is the candidate pivot.
using Row = std::map<FieldSymbol, Rational, decltype([](const FieldSymbol& a,
                                                        const FieldSymbol& b) {
  return priority_less(b, a);
})>;

void add_scaled(Row& into, const Row& what, const Rational& c) {
  for (const auto& [sym, v] : what) {
    Rational& slot = into[sym];
    slot += v * c;
    if (slot.is_zero()) into.erase(sym);
  }
}

std::vector<MultiIndex> monomials(int order) {
  std::vector<MultiIndex> out;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; b + a <= order; ++b)
      out.push_back({std::uint8_t(order - a - b), std::uint8_t(b),
                     std::uint8_t(a)});
  return out;
}

MultiIndex plus(MultiIndex m, int axis, int count = 1) {
  m[axis] = std::uint8_t(m[axis] + count);
  return m;
}

std::vector<FieldBase> sector_bases(Sector s, const RewriteRuleSet& rules) {
  switch (s) {
    case Sector::phi: return {FieldBase::phi};
    case Sector::g: return {FieldBase::g1, FieldBase::g2, FieldBase::g3};
    case Sector::h: {
      std::vector<FieldBase> bases = {FieldBase::h11, FieldBase::h12,
                                      FieldBase::h13, FieldBase::h22,
                                      FieldBase::h23, FieldBase::h33,
                                      FieldBase::htr};
      if (rules.trace_definition) bases.push_back(FieldBase::phi);
      return bases;
    }
  }
  return {};
}

/// Substitution table for one (sector, order, rules) block:
/// pivot symbol -> linear combination of non-pivot symbols.
using Subs = std::map<FieldSymbol, std::vector<std::pair<Rational, FieldSymbol>>>;

Subs build_block(Sector sec, int order, const RewriteRuleSet& rules) {
  std::vector<Row> rows;

  if (rules.laplacian && order >= 2) {
    for (FieldBase b : sector_bases(sec, rules))
      for (const MultiIndex& g : monomials(order - 2)) {
        Row r;
        for (int axis = 0; axis < 3; ++axis)
          r[{b, plus(g, axis, 2)}] += Rational(1);
        rows.push_back(std::move(r));
      }
  }
  if (sec == Sector::g && rules.divergence && order >= 1) {
    const FieldBase gs[3] = {FieldBase::g1, FieldBase::g2, FieldBase::g3};
    for (const MultiIndex& g : monomials(order - 1)) {
      Row r;
      for (int axis = 0; axis < 3; ++axis) r[{gs[axis], plus(g, axis)}] += Rational(1);
      rows.push_back(std::move(r));
    }
  }
  if (sec == Sector::h && rules.trace && order >= 1) {
    for (int i = 1; i <= 3; ++i)
      for (const MultiIndex& g : monomials(order - 1)) {
        Row r;
        for (int j = 1; j <= 3; ++j)
          r[{h_component(i, j), plus(g, j - 1)}] += Rational(1);
        r[{FieldBase::htr, plus(g, i - 1)}] += Rational(1, 2);
        rows.push_back(std::move(r));
      }
  }
  if (sec == Sector::h && rules.trace_definition) {
    // h - 2 phi + h11 + h22 + h33 = 0 and all its derivatives.
    for (const MultiIndex& g : monomials(order)) {
      Row r;
      r[{FieldBase::htr, g}] += Rational(1);
      r[{FieldBase::phi, g}] += Rational(-2);
      r[{FieldBase::h11, g}] += Rational(1);
      r[{FieldBase::h22, g}] += Rational(1);
      r[{FieldBase::h33, g}] += Rational(1);
      rows.push_back(std::move(r));
    }
  }

  // Forward elimination with pivots on the highest-priority symbol.
  std::map<FieldSymbol, Row, PriorityLess> pivots;
  for (Row& r : rows) {
    for (bool reduced = true; reduced && !r.empty();) {
      reduced = false;
      auto lead = r.begin();
      auto hit = pivots.find(lead->first);
      if (hit != pivots.end()) {
        add_scaled(r, hit->second, -lead->second);
        reduced = true;
      }
    }
    if (r.empty()) continue;
    auto lead = r.begin();
    Rational inv = Rational(1) / lead->second;
    Row norm;
    for (const auto& [sym, v] : r) norm[sym] = v * inv;
    pivots.emplace(lead->first, std::move(norm));
  }

  // Back substitution: make every pivot row pivot-free on the right.
  for (auto it = pivots.begin(); it != pivots.end(); ++it) {
    Row& r = it->second;
    for (bool again = true; again;) {
      again = false;
      for (const auto& [sym, v] : r) {
        if (sym == it->first) continue;
        auto hit = pivots.find(sym);
        if (hit != pivots.end()) {
          add_scaled(r, hit->second, -v);
          again = true;
          break;
        }
      }
    }
  }

  Subs subs;
  for (const auto& [piv, row] : pivots) {
    std::vector<std::pair<Rational, FieldSymbol>> rhs;
    for (const auto& [sym, v] : row)
      if (!(sym == piv)) rhs.emplace_back(-v, sym);
    subs[piv] = std::move(rhs);
  }
  return subs;
}

struct BlockKey {
  int sector;
  int order;
  int flags;
  auto operator<=>(const BlockKey&) const = default;
};

const Subs& block_for(Sector sec, int order, const RewriteRuleSet& rules) {
  static std::map<BlockKey, Subs> cache;
  static std::mutex mu;
  BlockKey key{int(sec), order,
               (rules.laplacian ? 1 : 0) | (rules.divergence ? 2 : 0) |
                   (rules.trace ? 4 : 0) | (rules.trace_definition ? 8 : 0)};
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, build_block(sec, order, rules)).first;
  return it->second;
}

}  // namespace

OperatorExpr apply_rewrites(const OperatorExpr& e, const RewriteRuleSet& rules,
                            const Truncation& tr) {
  if (!rules.laplacian && !rules.divergence && !rules.trace &&
      !rules.trace_definition)
    return e;

  std::vector<OperatorTerm> work(e.terms().begin(), e.terms().end());
  std::vector<OperatorTerm> next;

  // Substitute one field symbol at a time; replacement symbols are never
  // pivots, so each field needs at most one pass.
  bool changed = true;
  int guard = 0;
  while (changed) {
    if (++guard > 16)
      throw std::logic_error("apply_rewrites failed to reach a fixed point");
    changed = false;
    next.clear();
    for (const auto& t : work) {
      std::size_t hit = t.fields.size();
      const std::vector<std::pair<Rational, FieldSymbol>>* rhs = nullptr;
      for (std::size_t k = 0; k < t.fields.size(); ++k) {
        const FieldSymbol& f = t.fields[k];
        const Subs& subs =
            block_for(sector_of(f.base, rules), f.deriv_order(), rules);
        auto found = subs.find(f);
        if (found != subs.end()) {
          hit = k;
          rhs = &found->second;
          break;
        }
      }
      if (hit == t.fields.size()) {
        next.push_back(t);
        continue;
      }
      changed = true;
      for (const auto& [c, sym] : *rhs) {
        OperatorTerm nt = t;
        nt.coeff = t.coeff * GaussianRational(c);
        nt.fields[hit] = sym;
        next.push_back(std::move(nt));
      }
    }
    std::swap(work, next);
  }
  return OperatorExpr::from_terms(std::move(work), tr);
}

}  // namespace tempo
