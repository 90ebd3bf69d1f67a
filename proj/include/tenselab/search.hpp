#pragma once

// Exhaustive desk-scale searches over enumerated algebras and frames: countermodels, separating
// structures for law sets, and conservativity of modal expansions.

#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tenselab/algebra.hpp"
#include "tenselab/frames.hpp"
#include "tenselab/lattice.hpp"

namespace tenselab {

class SearchError : public std::runtime_error {
 public:
  enum class Kind { BadBounds, ModalOperatorPresent, TooManyVariables };
  SearchError(Kind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct SearchBounds {
  std::size_t max_size = 5;
  std::size_t max_frame = 4;
  std::size_t max_vars = 3;
  std::size_t max_gc_pairs = 0;  // 0 = all
  double seconds = 300;

  void validate() const {
    if (max_size == 0 || max_frame == 0 || max_vars == 0 || seconds <= 0)
      throw SearchError(SearchError::Kind::BadBounds, "search bounds must be positive");
    if (max_size > 7) throw SearchError(SearchError::Kind::BadBounds, "algebra search is limited to 7 elements");
    if (max_frame > 4) throw SearchError(SearchError::Kind::BadBounds, "frame search is limited to 4 worlds");
  }
};

/// Parses "size=5,frames=4,vars=3,pairs=0,seconds=300"; missing keys keep their defaults.
inline SearchBounds parse_bounds(const std::string& text, SearchBounds b = {}) {
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SearchError(SearchError::Kind::BadBounds, "bound '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      if (key == "seconds") {
        b.seconds = std::stod(value, &used);
      } else {
        const unsigned long v = std::stoul(value, &used);
        if (key == "size") b.max_size = v;
        else if (key == "frames") b.max_frame = v;
        else if (key == "vars") b.max_vars = v;
        else if (key == "pairs") b.max_gc_pairs = v;
        else throw SearchError(SearchError::Kind::BadBounds, "unknown bound '" + key + "'");
      }
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw SearchError(SearchError::Kind::BadBounds, "bad value for '" + key + "': " + value);
    }
  }
  b.validate();
  return b;
}

enum class SearchStatus { Found, Exhausted, Timeout };

inline const char* search_status_name(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::Exhausted: return "exhausted";
    case SearchStatus::Timeout: return "timeout";
  }
  return "?";
}

struct Verdict {
  SearchStatus status = SearchStatus::Exhausted;
  std::optional<AlgebraWithOps> algebra;
  Valuation valuation;
  Element value = 0;
  std::optional<Frame> frame;
  WorldValuation world_valuation;
  std::size_t world = 0;
  std::string detail;
  std::uint64_t structures_scanned = 0;

  bool found() const { return status == SearchStatus::Found; }
};

namespace detail {

class Deadline {
 public:
  explicit Deadline(double seconds)
      : end_(std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                     std::chrono::duration<double>(seconds))) {}
  bool passed() const { return std::chrono::steady_clock::now() > end_; }

 private:
  std::chrono::steady_clock::time_point end_;
};

}  // namespace detail

/// Visits every algebra (H, f, p) with H a Heyting algebra of at most `max_size` elements up to
/// isomorphism and f, p GC pairs (future, past) in table order. Stops when visit returns false.
template <class Visit>
bool for_each_gc_algebra(std::size_t max_size, std::size_t max_pairs, Visit&& visit) {
  for (const HeytingAlgebra& h : enumerate_heyting(max_size, true)) {
    auto pairs = enumerate_gc_pairs(h);
    if (max_pairs && pairs.size() > max_pairs) pairs.resize(max_pairs);
    for (const auto& f : pairs)
      for (const auto& p : pairs)
        if (!visit(attach_ops(h, tables_from_pairs(f, p)))) return false;
  }
  return true;
}

/// All H2GC+FS-algebras (every core law) up to `max_size` elements.
inline std::vector<AlgebraWithOps> enumerate_h2gcfs_algebras(std::size_t max_size) {
  std::vector<AlgebraWithOps> out;
  for_each_gc_algebra(max_size, 0, [&](AlgebraWithOps a) {
    if (a.report().all_green()) out.push_back(std::move(a));
    return true;
  });
  return out;
}

inline void require_variables(const Formula& f, std::size_t cap) {
  const auto n = variables_of(f).size();
  if (n > cap)
    throw SearchError(SearchError::Kind::TooManyVariables,
                      "formula has " + std::to_string(n) + " variables; bound is " + std::to_string(cap));
}

/// First algebra satisfying `laws_required` on which f fails, in enumeration order.
inline Verdict find_algebra_countermodel(const Formula& f, const std::vector<Law>& laws_required, const SearchBounds& bounds = {}) {
  bounds.validate();
  require_variables(f, bounds.max_vars);
  Verdict v;
  detail::Deadline deadline(bounds.seconds);
  for_each_gc_algebra(bounds.max_size, bounds.max_gc_pairs, [&](AlgebraWithOps a) {
    if (deadline.passed()) {
      v.status = SearchStatus::Timeout;
      return false;
    }
    ++v.structures_scanned;
    if (!a.report().holds_all(laws_required)) return true;
    const ValidityResult r = algebra_validity(a, f, bounds.max_vars);
    if (r.valid) return true;
    v.status = SearchStatus::Found;
    v.valuation = r.countervaluation;
    v.value = r.value;
    v.algebra = std::move(a);
    return false;
  });
  return v;
}

/// First frame (IK-frames only when `ik_only`) with a persistent valuation and world refuting f.
inline Verdict find_frame_countermodel(const Formula& f, const SearchBounds& bounds = {}, bool ik_only = true) {
  bounds.validate();
  require_variables(f, bounds.max_vars);
  Verdict v;
  detail::Deadline deadline(bounds.seconds);
  for (std::size_t n = 1; n <= bounds.max_frame && !v.found() && v.status != SearchStatus::Timeout; ++n) {
    for_each_frame(n, ik_only, true, [&](const Frame& fr) {
      if (deadline.passed()) {
        v.status = SearchStatus::Timeout;
        return false;
      }
      ++v.structures_scanned;
      const FrameValidityResult r = frame_validity(fr, f, bounds.max_frame, bounds.max_vars);
      if (r.valid) return true;
      v.status = SearchStatus::Found;
      v.frame = fr;
      v.world_valuation = r.valuation;
      v.world = r.world;
      return false;
    });
  }
  return v;
}

/// Searches algebras satisfying `base` where one law set holds and the other fails.
/// With `both_directions` false only "A holds, B fails" counts.
inline Verdict test_law_equivalence(const std::vector<Law>& a_laws, const std::vector<Law>& b_laws, const SearchBounds& bounds = {},
                                    bool both_directions = true, const std::vector<Law>& base = gc_laws()) {
  bounds.validate();
  Verdict v;
  detail::Deadline deadline(bounds.seconds);
  for_each_gc_algebra(bounds.max_size, bounds.max_gc_pairs, [&](AlgebraWithOps a) {
    if (deadline.passed()) {
      v.status = SearchStatus::Timeout;
      return false;
    }
    ++v.structures_scanned;
    const LawReport& r = a.report();
    if (!r.holds_all(base)) return true;
    const bool ha = r.holds_all(a_laws), hb = r.holds_all(b_laws);
    if (ha && !hb) {
      v.detail = "first law set holds, second fails";
    } else if (both_directions && hb && !ha) {
      v.detail = "second law set holds, first fails";
    } else {
      return true;
    }
    v.status = SearchStatus::Found;
    v.algebra = std::move(a);
    return false;
  });
  return v;
}

struct ConservativityVerdict {
  Verdict verdict;  // found = an algebra where the two validity checks disagree
  std::uint64_t algebras_checked = 0;
  std::vector<std::string> failing;  // algebras (by element names) refuting f
};

/// Compares validity of a propositional formula in each Heyting algebra and in its identity-operator expansion.
inline ConservativityVerdict conservativity_check(const Formula& f, const SearchBounds& bounds = {}) {
  bounds.validate();
  if (f.has_modality())
    throw SearchError(SearchError::Kind::ModalOperatorPresent, "conservativity needs a formula without modal operators");
  require_variables(f, bounds.max_vars);
  ConservativityVerdict out;
  detail::Deadline deadline(bounds.seconds);
  for (const HeytingAlgebra& h : enumerate_heyting(bounds.max_size, true)) {
    if (deadline.passed()) {
      out.verdict.status = SearchStatus::Timeout;
      break;
    }
    ++out.algebras_checked;
    ++out.verdict.structures_scanned;
    const ValidityResult base = propositional_validity(h, f, bounds.max_vars);
    const AlgebraWithOps expansion = with_identity_ops(h);
    const ValidityResult expanded = algebra_validity(expansion, f, bounds.max_vars);
    if (!base.valid) {
      std::string names;
      for (std::size_t i = 0; i < h.size(); ++i) names += (i ? "," : "") + h.name(static_cast<Element>(i));
      out.failing.push_back("{" + names + "}");
    }
    if (base.valid != expanded.valid) {
      out.verdict.status = SearchStatus::Found;
      out.verdict.algebra = expansion;
      out.verdict.valuation = base.valid ? expanded.countervaluation : base.countervaluation;
      out.verdict.detail = base.valid ? "valid in the base algebra only" : "valid in the expansion only";
      break;
    }
  }
  return out;
}

}  // namespace tenselab
