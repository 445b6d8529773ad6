#include "quantization/separable.hpp"

namespace hyps {

namespace {

Decomposition as_mixed(const Expr& e) { return {{}, {e}}; }

Decomposition expand(const Expr& e, std::size_t cap) {
  if (e.is_zero()) return {};
  if (!e.depends_on_any_xi()) return {{{e, Expr::constant(1.0)}}, {}};
  if (!e.depends_on_any_x()) return {{{Expr::constant(1.0), e}}, {}};
  switch (e.kind()) {
    case NodeKind::kSum: {
      Decomposition d;
      for (const auto& c : e.children()) {
        Decomposition sub = expand(c, cap);
        d.terms.insert(d.terms.end(), sub.terms.begin(), sub.terms.end());
        d.mixed.insert(d.mixed.end(), sub.mixed.begin(), sub.mixed.end());
      }
      if (d.terms.size() > cap) return as_mixed(e);
      return d;
    }
    case NodeKind::kProduct:
    case NodeKind::kPower: {
      std::vector<Expr> factors;
      if (e.kind() == NodeKind::kProduct) {
        factors = e.children();
      } else {
        factors.assign(static_cast<std::size_t>(e.exponent()), e.children()[0]);
      }
      std::vector<SeparableTerm> acc{{Expr::constant(1.0), Expr::constant(1.0)}};
      for (const auto& f : factors) {
        Decomposition sub = expand(f, cap);
        if (!sub.mixed.empty()) return as_mixed(e);
        std::vector<SeparableTerm> next;
        for (const auto& a : acc) {
          for (const auto& b : sub.terms) next.push_back({a.fx * b.fx, a.gxi * b.gxi});
        }
        if (next.size() > cap) return as_mixed(e);
        acc = std::move(next);
      }
      return {acc, {}};
    }
    default:
      return as_mixed(e);
  }
}

}  // namespace

Decomposition decompose(const Expr& e, std::size_t max_terms) { return expand(e, max_terms); }

}  // namespace hyps
