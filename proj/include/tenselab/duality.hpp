#pragma once

// Canonical frames of finite H2GC+FS-algebras, complex algebras of IK-frames, and the embedding
// h(x) = { F | x ∈ F } between them.

#include <algorithm>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "tenselab/algebra.hpp"
#include "tenselab/frames.hpp"
#include "tenselab/lattice.hpp"

namespace tenselab {

class DualityError : public std::runtime_error {
 public:
  enum class Kind { NotAnH2GCFSAlgebra, NotAnIKFrame };

  DualityError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// A prime filter as a set of algebra elements.
using PrimeFilter = Subset;

inline bool is_prime_filter(const HeytingAlgebra& h, Subset f) {
  if (f.empty() || f.contains(h.bottom())) return false;
  const std::size_t n = h.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!f.contains(a)) continue;
    if (!h.up(a).subset_of(f)) return false;
    for (std::size_t b = 0; b < n; ++b)
      if (f.contains(b) && !f.contains(h.meet(a, b))) return false;
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b)
      if (f.contains(h.join(a, b)) && !f.contains(a) && !f.contains(b)) return false;
  return true;
}

/// Every filter of a finite lattice is principal, so only the sets ↑a need testing. Sorted by bit pattern.
inline std::vector<PrimeFilter> prime_filters(const HeytingAlgebra& h) {
  std::vector<PrimeFilter> out;
  for (Element a = 0; a < h.size(); ++a)
    if (is_prime_filter(h, h.up(a))) out.push_back(h.up(a));
  std::sort(out.begin(), out.end());
  return out;
}

/// { x | table[x] ∈ f }
inline Subset preimage(const UnaryTable& table, Subset f) {
  Subset out;
  for (std::size_t x = 0; x < table.size(); ++x)
    if (f.contains(table[x])) out.insert(x);
  return out;
}

/// F Rc G iff □⁻¹F ⊆ G ⊆ ◇⁻¹F
inline Relation canonical_relation(const AlgebraWithOps& a, const std::vector<PrimeFilter>& xs) {
  Relation rc(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Subset lo = preimage(a.ops().box, xs[i]), hi = preimage(a.ops().dia, xs[i]);
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (lo.subset_of(xs[j]) && xs[j].subset_of(hi)) rc.add(i, j);
  }
  return rc;
}

/// F Rc G iff ■⁻¹G ⊆ F ⊆ ⧫⁻¹G
inline Relation canonical_relation_past(const AlgebraWithOps& a, const std::vector<PrimeFilter>& xs) {
  Relation rc(xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const Subset lo = preimage(a.ops().bbox, xs[j]), hi = preimage(a.ops().bdia, xs[j]);
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (lo.subset_of(xs[i]) && xs[i].subset_of(hi)) rc.add(i, j);
  }
  return rc;
}

inline std::string filter_name(const HeytingAlgebra& h, PrimeFilter f) {
  for (Element a : f.members())
    if (h.up(a) == f) return "↑" + h.name(a);
  return subset_name(h.names(), f);
}

struct CanonicalFrame {
  std::vector<PrimeFilter> filters;
  Frame frame;
  Relation rc_past;  // the same relation computed from ■ and ⧫
  IkFrameReport ik;

  bool characterisations_agree() const { return frame.r() == rc_past; }
};

inline CanonicalFrame canonical_frame(const AlgebraWithOps& a) {
  if (!a.report().all_green()) {
    throw DualityError(DualityError::Kind::NotAnH2GCFSAlgebra, "algebra '" + a.name() + "' is not an H2GC+FS-algebra");
  }
  CanonicalFrame out;
  out.filters = prime_filters(a.base());
  const std::size_t n = out.filters.size();
  Relation inclusion(n);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(filter_name(a.base(), out.filters[i]));
    for (std::size_t j = 0; j < n; ++j)
      if (out.filters[i].subset_of(out.filters[j])) inclusion.add(i, j);
  }
  out.frame = Frame(std::move(names), std::move(inclusion), canonical_relation(a, out.filters));
  out.rc_past = canonical_relation_past(a, out.filters);
  out.ik = check_ik_frame(out.frame);
  return out;
}

struct ComplexAlgebra {
  AlgebraWithOps algebra;
  std::vector<Subset> carrier;  // carrier[e] is the up-set of worlds named by element e
};

namespace detail {

inline Subset exists_image(const Relation& rel, Subset a) {
  Subset out;
  for (std::size_t x = 0; x < rel.size(); ++x)
    if (!(rel.row(x) & a).empty()) out.insert(x);
  return out;
}

inline Subset forall_image(const Relation& rel, Subset a) {
  Subset out;
  for (std::size_t x = 0; x < rel.size(); ++x)
    if (rel.row(x).subset_of(a)) out.insert(x);
  return out;
}

}  // namespace detail

/// ◇ᶜA = {x | ∃y x R y ∈ A}, □ᶜA = {x | x (≤∘R) y ⇒ y ∈ A}, ⧫ᶜA = {x | ∃y A ∋ y R x}, ■ᶜA = {x | y (R∘≥) x ⇒ y ∈ A}
inline ComplexAlgebra complex_algebra(const Frame& f) {
  const IkFrameReport rep = check_ik_frame(f);
  if (!rep.ik()) throw DualityError(DualityError::Kind::NotAnIKFrame, "frame is not an IK-frame");
  UpsetAlgebra ua = upset_algebra(f.poset());
  const Relation r_inv = f.r().inverse();
  const std::size_t m = ua.carrier.size();
  OperatorTables t{UnaryTable(m), UnaryTable(m), UnaryTable(m), UnaryTable(m)};
  const auto locate = [&](Subset s) {
    auto e = index_of(ua.carrier, s);
    if (!e) throw DualityError(DualityError::Kind::NotAnIKFrame, "modal image " + subset_name(f.names(), s) + " is not an up-set");
    return *e;
  };
  for (Element e = 0; e < m; ++e) {
    const Subset a = ua.carrier[e];
    t.dia[e] = locate(detail::exists_image(f.r(), a));
    t.box[e] = locate(detail::forall_image(f.leq_r(), a));
    t.bdia[e] = locate(detail::exists_image(r_inv, a));
    t.bbox[e] = locate(detail::forall_image(f.r_geq_inverse(), a));
  }
  return {AlgebraWithOps(std::move(ua.algebra), std::move(t), "complex algebra"), std::move(ua.carrier)};
}

/// h(x): the prime filters containing x
inline Subset preimage_filters(const std::vector<PrimeFilter>& xs, Element x) {
  Subset out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i].contains(x)) out.insert(i);
  return out;
}

struct KeyLemmaWitness {
  std::size_t formula_index = 0;
  Valuation valuation;
  std::size_t filter = 0;
};

struct KeyLemmaReport {
  bool holds = true;
  std::size_t checks = 0;
  std::optional<KeyLemmaWitness> witness;
};

/// F ⊨c A iff v(A) ∈ F, for every formula, every valuation over its variables and every prime filter.
inline KeyLemmaReport key_lemma_check(const AlgebraWithOps& a, const CanonicalFrame& cf, const std::vector<Formula>& corpus,
                                      std::size_t var_cap = kDefaultVariableCap) {
  KeyLemmaReport rep;
  const FrameEvaluator ev(cf.frame);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const CompiledFormula c = compile(corpus[i]);
    if (c.variables.size() > var_cap) {
      throw AlgebraError(AlgebraError::Kind::CapExceeded, "formula has more than " + std::to_string(var_cap) + " variables");
    }
    std::vector<Element> stack;
    std::vector<Subset> world_slots(c.variables.size()), world_stack;
    bool stop = false;
    for_each_assignment(a.base(), c.variables.size(), [&](std::span<const Element> slots) {
      for (std::size_t k = 0; k < slots.size(); ++k) world_slots[k] = preimage_filters(cf.filters, slots[k]);
      const Element value = evaluate_compiled(a, c, slots, stack);
      const Subset truth = ev.run(c, world_slots, world_stack);
      ++rep.checks;
      for (std::size_t w = 0; w < cf.filters.size(); ++w) {
        if (truth.contains(w) != cf.filters[w].contains(value)) {
          Valuation v;
          for (std::size_t k = 0; k < slots.size(); ++k) v[c.variables[k]] = slots[k];
          rep.holds = false;
          rep.witness = KeyLemmaWitness{i, std::move(v), w};
          stop = true;
          return false;
        }
      }
      return true;
    });
    if (stop) break;
  }
  return rep;
}

struct EmbeddingReport {
  bool degenerate = false;  // the one-element algebra has no prime filters
  CanonicalFrame canonical;
  std::optional<ComplexAlgebra> complex;
  std::vector<Subset> h;
  bool injective = true;
  bool surjective = true;
  bool ik_frame = true;
  bool characterisations_agree = true;
  bool connection_below = true;  // F (⊆∘Rc) G iff F ⊆ ⧫⁻¹G
  bool connection_above = true;  // F (Rc∘⊇) G iff ■⁻¹G ⊆ F
  std::vector<std::string> preserves_failures;  // operation names where h fails to commute
  KeyLemmaReport key_lemma;

  bool homomorphism() const { return preserves_failures.empty(); }
  bool embedding() const { return injective && homomorphism(); }
  bool all_green() const {
    return embedding() && surjective && ik_frame && characterisations_agree && connection_below && connection_above && key_lemma.holds;
  }
};

inline std::vector<Formula> default_key_lemma_corpus() {
  std::vector<Formula> out;
  for (const char* s : {"p", "F p", "G p", "P p", "H p", "p -> q", "~p", "F p & G q", "G (p | q)", "H F p", "P ~p -> ~G p"})
    out.push_back(parse_formula(s));
  return out;
}

inline EmbeddingReport embedding_check(const AlgebraWithOps& a, const std::vector<Formula>& corpus = default_key_lemma_corpus()) {
  EmbeddingReport rep;
  rep.canonical = canonical_frame(a);
  const CanonicalFrame& cf = rep.canonical;
  const HeytingAlgebra& h = a.base();
  const std::size_t nf = cf.filters.size();
  if (nf == 0) {
    rep.degenerate = true;
    return rep;
  }
  rep.ik_frame = cf.ik.ik();
  rep.characterisations_agree = cf.characterisations_agree();

  const Relation& rc = cf.frame.r();
  const Relation below = cf.frame.leq().compose(rc);
  const Relation above = rc.compose(cf.frame.geq());
  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = 0; j < nf; ++j) {
      if (below.has(i, j) != cf.filters[i].subset_of(preimage(a.ops().bdia, cf.filters[j]))) rep.connection_below = false;
      if (above.has(i, j) != preimage(a.ops().bbox, cf.filters[j]).subset_of(cf.filters[i])) rep.connection_above = false;
    }
  if (!rep.ik_frame) return rep;

  rep.complex = complex_algebra(cf.frame);
  const ComplexAlgebra& c = *rep.complex;
  for (Element x = 0; x < h.size(); ++x) rep.h.push_back(preimage_filters(cf.filters, x));
  std::vector<Element> image(h.size());
  std::vector<bool> hit(c.carrier.size(), false);
  for (Element x = 0; x < h.size(); ++x) {
    auto e = index_of(c.carrier, rep.h[x]);
    image[x] = *e;  // h(x) is always an up-set of filters
    if (hit[*e]) rep.injective = false;
    hit[*e] = true;
  }
  for (bool b : hit)
    if (!b) rep.surjective = false;

  const HeytingAlgebra& ch = c.algebra.base();
  const auto note = [&](const char* op, bool ok) {
    if (!ok && std::find(rep.preserves_failures.begin(), rep.preserves_failures.end(), op) == rep.preserves_failures.end())
      rep.preserves_failures.push_back(op);
  };
  note("0", image[h.bottom()] == ch.bottom());
  note("1", image[h.top()] == ch.top());
  for (Element x = 0; x < h.size(); ++x) {
    note("dia", image[a.dia(x)] == c.algebra.dia(image[x]));
    note("box", image[a.box(x)] == c.algebra.box(image[x]));
    note("bdia", image[a.bdia(x)] == c.algebra.bdia(image[x]));
    note("bbox", image[a.bbox(x)] == c.algebra.bbox(image[x]));
    for (Element y = 0; y < h.size(); ++y) {
      note("join", image[h.join(x, y)] == ch.join(image[x], image[y]));
      note("meet", image[h.meet(x, y)] == ch.meet(image[x], image[y]));
      note("imp", image[h.imp(x, y)] == ch.imp(image[x], image[y]));
    }
  }
  rep.key_lemma = key_lemma_check(a, cf, corpus);
  return rep;
}

}  // namespace tenselab
