#pragma once

#include <string>
#include <vector>

#include "ebltl/error.hpp"
#include "ebltl/formula.hpp"
#include "ebltl/ltl/trace.hpp"
#include "ebltl/refine/renaming.hpp"

namespace ebltl::preserve {

using refine::RenamingMap;

/// trans_h: each atom [x] becomes the disjunction of its preimages under h,
/// in sorted order. No preimage gives `!true`.
inline Formula translate_formula(const Formula& phi, const RenamingMap& h) {
  using K = Formula::Kind;
  switch (phi.kind()) {
    case K::True:
      return phi;
    case K::Atom:
      return atom_disjunction(h.preimage(phi.event()));
    case K::Not:
      return Formula::negation(translate_formula(phi.operand(), h));
    case K::Finally:
      return Formula::finally(translate_formula(phi.operand(), h));
    case K::Globally:
      return Formula::globally(translate_formula(phi.operand(), h));
    case K::Or:
      return Formula::disjunction(translate_formula(phi.lhs(), h), translate_formula(phi.rhs(), h));
    case K::And:
      return Formula::conjunction(translate_formula(phi.lhs(), h),
                                  translate_formula(phi.rhs(), h));
    case K::Until:
      return Formula::until(translate_formula(phi.lhs(), h), translate_formula(phi.rhs(), h));
  }
  return phi;
}

/// h_tot: h plus the identity on concrete events outside its domain. The
/// abstract alphabet grows by those events.
inline RenamingMap complete_renaming(const RenamingMap& h) {
  RenamingMap t = h;
  for (const auto& e : h.concrete_alphabet)
    if (!t.defined(e)) {
      t.forward[e] = e;
      t.abstract_alphabet.insert(e);
    }
  return t;
}

/// Pointwise image of a trace.
inline ltl::Trace map_trace(const RenamingMap& h, const ltl::Trace& u) {
  auto image = [&](const std::vector<std::string>& w) {
    std::vector<std::string> out;
    out.reserve(w.size());
    for (const auto& e : w) {
      auto x = h.apply(e);
      if (!x) throw Error("event '" + e + "' is outside the domain of the renaming");
      out.push_back(*x);
    }
    return out;
  };
  ltl::Trace t = u;
  t.prefix = image(u.prefix);
  t.cycle = image(u.cycle);
  return t;
}

}  // namespace ebltl::preserve
