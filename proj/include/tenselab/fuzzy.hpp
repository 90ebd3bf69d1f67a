#pragma once

// Fuzzy sets U → H over a finite Heyting algebra H and the four modal operators a fuzzy relation
// R : U × U → H induces on them.

#include <optional>
#include <string>
#include <vector>

#include "tenselab/algebra.hpp"
#include "tenselab/lattice.hpp"

namespace tenselab {

using FuzzySet = std::vector<Element>;                   // indexed by universe position
using FuzzyRelation = std::vector<std::vector<Element>>;  // r[x][y] = R(x, y)

enum class FuzzyOp { Dia, Box, BDia, BBox };

inline const char* fuzzy_op_name(FuzzyOp op) {
  switch (op) {
    case FuzzyOp::Dia: return "dia";
    case FuzzyOp::Box: return "box";
    case FuzzyOp::BDia: return "bdia";
    case FuzzyOp::BBox: return "bbox";
  }
  return "?";
}

/// ◇φ(x) = ⋁_y R(x,y) ∧ φ(y), □φ(x) = ⋀_y R(x,y) → φ(y); the past forms use R(y,x).
inline FuzzySet fuzzy_op(const HeytingAlgebra& h, const FuzzyRelation& r, FuzzyOp which, const FuzzySet& phi) {
  const std::size_t n = phi.size();
  FuzzySet out(n);
  for (std::size_t x = 0; x < n; ++x) {
    const bool exists = which == FuzzyOp::Dia || which == FuzzyOp::BDia;
    const bool past = which == FuzzyOp::BDia || which == FuzzyOp::BBox;
    Element acc = exists ? h.bottom() : h.top();
    for (std::size_t y = 0; y < n; ++y) {
      const Element rel = past ? r[y][x] : r[x][y];
      acc = exists ? h.join(acc, h.meet(rel, phi[y])) : h.meet(acc, h.imp(rel, phi[y]));
    }
    out[x] = acc;
  }
  return out;
}

inline constexpr std::size_t kDefaultFuzzyCap = 64;

struct FuzzyAlgebra {
  HeytingAlgebra values;
  std::vector<std::string> universe;
  FuzzyRelation relation;
  AlgebraWithOps algebra;
  std::vector<FuzzySet> carrier;  // carrier[e] is the fuzzy set named by element e

  Element index(const FuzzySet& phi) const {
    Element e = 0;
    for (Element v : phi) e = e * static_cast<Element>(values.size()) + v;
    return e;
  }
  FuzzySet apply(FuzzyOp op, const FuzzySet& phi) const { return fuzzy_op(values, relation, op, phi); }
};

inline std::string fuzzy_set_name(const HeytingAlgebra& h, const FuzzySet& phi) {
  std::string s = "(";
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (i) s += ",";
    s += h.name(phi[i]);
  }
  return s + ")";
}

/// The algebra H^U ordered pointwise, with carrier index = the grades read as base-|H| digits.
inline FuzzyAlgebra build_fuzzy_algebra(const HeytingAlgebra& h, std::vector<std::string> universe, FuzzyRelation r,
                                        std::size_t cap = kDefaultFuzzyCap) {
  const std::size_t k = universe.size(), m = h.size();
  if (r.size() != k) throw AlgebraError(AlgebraError::Kind::TableSize, "fuzzy relation does not match the universe");
  for (const auto& row : r) {
    if (row.size() != k) throw AlgebraError(AlgebraError::Kind::TableSize, "fuzzy relation does not match the universe");
    for (Element v : row)
      if (v >= m) throw AlgebraError(AlgebraError::Kind::IndexOutOfRange, "fuzzy relation grade outside the algebra");
  }
  std::size_t size = 1;
  for (std::size_t i = 0; i < k; ++i) {
    size *= m;
    if (size > cap) {
      throw AlgebraError(AlgebraError::Kind::CapExceeded,
                         "fuzzy algebra would have more than " + std::to_string(cap) + " elements");
    }
  }
  FuzzyAlgebra out{h, std::move(universe), std::move(r), {}, {}};
  for (std::size_t e = 0; e < size; ++e) {
    FuzzySet phi(k);
    std::size_t rest = e;
    for (std::size_t i = k; i-- > 0;) {
      phi[i] = static_cast<Element>(rest % m);
      rest /= m;
    }
    out.carrier.push_back(std::move(phi));
  }
  std::vector<std::string> names;
  Relation leq(size);
  for (std::size_t i = 0; i < size; ++i) {
    names.push_back(fuzzy_set_name(h, out.carrier[i]));
    for (std::size_t j = 0; j < size; ++j) {
      bool below = true;
      for (std::size_t u = 0; u < k && below; ++u) below = h.leq(out.carrier[i][u], out.carrier[j][u]);
      if (below) leq.add(i, j);
    }
  }
  OperatorTables t{UnaryTable(size), UnaryTable(size), UnaryTable(size), UnaryTable(size)};
  for (std::size_t e = 0; e < size; ++e) {
    t.dia[e] = out.index(out.apply(FuzzyOp::Dia, out.carrier[e]));
    t.box[e] = out.index(out.apply(FuzzyOp::Box, out.carrier[e]));
    t.bdia[e] = out.index(out.apply(FuzzyOp::BDia, out.carrier[e]));
    t.bbox[e] = out.index(out.apply(FuzzyOp::BBox, out.carrier[e]));
  }
  out.algebra = AlgebraWithOps(HeytingAlgebra::from_matrix(std::move(names), leq), std::move(t), "fuzzy algebra");
  return out;
}

/// Every fuzzy relation on a k-element universe, grades enumerated as base-|H| digits row by row.
template <class Visit>
bool for_each_fuzzy_relation(const HeytingAlgebra& h, std::size_t k, Visit&& visit) {
  const std::size_t cells = k * k, m = h.size();
  std::vector<std::size_t> digit(cells, 0);
  FuzzyRelation r(k, std::vector<Element>(k, 0));
  while (true) {
    for (std::size_t c = 0; c < cells; ++c) r[c / k][c % k] = static_cast<Element>(digit[c]);
    if (!visit(static_cast<const FuzzyRelation&>(r))) return false;
    std::size_t c = cells;
    while (true) {
      if (c == 0) return true;
      --c;
      if (++digit[c] < m) break;
      digit[c] = 0;
    }
  }
}

struct DeMorganFailure {
  FuzzyAlgebra fuzzy;
  FuzzySet phi;
  FuzzySet dia;              // ◇φ
  FuzzySet not_box_not;      // ¬□¬φ
};

/// First fuzzy set φ with ◇φ(x) ≠ ¬□¬φ(x) at every x, scanning relations and then fuzzy sets in carrier order.
inline std::optional<DeMorganFailure> find_de_morgan_failure(const HeytingAlgebra& h, std::size_t universe_size,
                                                             std::size_t cap = kDefaultFuzzyCap) {
  std::vector<std::string> universe;
  for (std::size_t i = 0; i < universe_size; ++i) universe.push_back("u" + std::to_string(i));
  std::optional<DeMorganFailure> found;
  for_each_fuzzy_relation(h, universe_size, [&](const FuzzyRelation& r) {
    FuzzyAlgebra fa = build_fuzzy_algebra(h, universe, r, cap);
    for (const FuzzySet& phi : fa.carrier) {
      FuzzySet neg_phi(phi.size());
      for (std::size_t i = 0; i < phi.size(); ++i) neg_phi[i] = h.neg(phi[i]);
      const FuzzySet dia = fa.apply(FuzzyOp::Dia, phi);
      FuzzySet nbn = fa.apply(FuzzyOp::Box, neg_phi);
      for (Element& v : nbn) v = h.neg(v);
      bool everywhere = true;
      for (std::size_t i = 0; i < phi.size() && everywhere; ++i) everywhere = dia[i] != nbn[i];
      if (everywhere) {
        found = DeMorganFailure{fa, phi, dia, nbn};
        return false;
      }
    }
    return true;
  });
  return found;
}

}  // namespace tenselab
