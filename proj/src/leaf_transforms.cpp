#include "pcirc/leaf_transforms.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "pcirc/division_elim.hpp"
#include "pcirc/errors.hpp"

namespace pcirc {

namespace {

void require_tag(const Circuit& c, Semantics kind, const char* op) {
  if (c.semantics().kind != kind)
    throw semantics_mismatch(std::string(op) + " expects semantics " +
                             semantics_name({kind, 0}) + ", got " +
                             semantics_name(c.semantics()));
  if (c.has_divisions())
    throw semantics_mismatch(std::string(op) + " expects a division-free circuit");
}

/// Rebuild with bar leaves mapped through `bar_image`; plain leaves unchanged.
Circuit map_bar_leaves(const Circuit& c, SemanticsTag out_tag,
                       const std::function<NodeId(CircuitBuilder&, int)>& bar_image) {
  CircuitBuilder b;
  Rebuilder rb(c, b, [&](CircuitBuilder& bb, const VarRef& ref) {
    if (ref.pol == Polarity::bar) return bar_image(bb, ref.index);
    return bb.var(ref);
  });
  return b.finish(rb.copy(c.root()), c.var_count(), out_tag);
}

/// Rebuild with plain leaves x_i := a + b*x_i and an optional root scale.
Circuit affine_plain_leaves(const Circuit& c, SemanticsTag out_tag, const Rational& a,
                            const Rational& b, const Rational& scale) {
  CircuitBuilder builder;
  Rebuilder rb(c, builder, [&](CircuitBuilder& bb, const VarRef& ref) {
    if (ref.pol == Polarity::bar)
      throw polarity_error("unexpected bar leaf in a single-polarity circuit");
    NodeId one = bb.constant(Rational(1));
    return bb.sum({{a, one}, {b, bb.var(ref)}});
  });
  NodeId root = rb.copy(c.root());
  if (!scale.is_one()) root = builder.product({builder.constant(scale), root});
  return builder.finish(root, c.var_count(), out_tag);
}

}  // namespace

Circuit network_to_generating(const Circuit& c) {
  require_tag(c, Semantics::network, "network_to_generating");
  return map_bar_leaves(c, tag_generating(),
                        [](CircuitBuilder& b, int) { return b.constant(Rational(1)); });
}

Circuit network_to_likelihood(const Circuit& c) {
  require_tag(c, Semantics::network, "network_to_likelihood");
  return map_bar_leaves(c, tag_likelihood(), [](CircuitBuilder& b, int i) {
    return b.sum({{Rational(1), b.constant(Rational(1))}, {Rational(-1), b.var(plain_var(i))}});
  });
}

Circuit fourier_ind_collapse(const Circuit& c, CollapseMode mode) {
  require_tag(c, Semantics::fourier_ind, "fourier_ind_collapse");
  if (mode == CollapseMode::to_pm)
    return map_bar_leaves(c, tag_likelihood_pm(),
                          [](CircuitBuilder& b, int) { return b.constant(Rational(1)); });
  return map_bar_leaves(c, tag_fourier(), [](CircuitBuilder& b, int i) {
    return b.sum({{Rational(1), b.constant(Rational(1))}, {Rational(-1), b.var(plain_var(i))}});
  });
}

Circuit domain_swap(const Circuit& c, SwapDirection dir) {
  if (c.has_divisions()) throw semantics_mismatch("domain_swap expects a division-free circuit");
  SemanticsTag tag = c.semantics();
  if (dir == SwapDirection::infer) {
    if (tag.kind == Semantics::likelihood)
      dir = SwapDirection::to_pm_domain;
    else if (tag.kind == Semantics::likelihood_pm)
      dir = SwapDirection::to_01_domain;
    else
      throw semantics_mismatch("domain_swap cannot infer a direction for semantics " +
                               semantics_name(tag));
  }
  SemanticsTag out = tag;
  if (tag.kind == Semantics::likelihood && dir == SwapDirection::to_pm_domain)
    out = tag_likelihood_pm();
  else if (tag.kind == Semantics::likelihood_pm && dir == SwapDirection::to_01_domain)
    out = tag_likelihood();
  else if (tag.kind == Semantics::raw)
    out = tag_raw();
  else
    throw semantics_mismatch("domain_swap direction does not match semantics " +
                             semantics_name(tag));
  if (dir == SwapDirection::to_pm_domain)
    return affine_plain_leaves(c, out, Rational(1, 2), Rational(-1, 2), Rational(1));
  return affine_plain_leaves(c, out, Rational(1), Rational(-2), Rational(1));
}

Circuit generating_to_fourier(const Circuit& c) {
  require_tag(c, Semantics::generating, "generating_to_fourier");
  return affine_plain_leaves(c, tag_fourier(), Rational(1), Rational(-2),
                             Rational::pow2(-c.var_count()));
}

Circuit fourier_to_generating(const Circuit& c) {
  require_tag(c, Semantics::fourier, "fourier_to_generating");
  return affine_plain_leaves(c, tag_generating(), Rational(1, 2), Rational(-1, 2),
                             Rational::pow2(c.var_count()));
}

/* --- the twelve-edge graph ------------------------------------------------ */

namespace {

struct EdgeInfo {
  Semantics src;
  Semantics dst;
  bool starred;
};

constexpr std::array<EdgeInfo, 13> edge_table = {{
    {Semantics::raw, Semantics::raw, false},  // unused slot 0
    {Semantics::generating, Semantics::network, true},
    {Semantics::network, Semantics::generating, false},
    {Semantics::network, Semantics::likelihood, false},
    {Semantics::likelihood, Semantics::network, true},
    {Semantics::likelihood, Semantics::likelihood_pm, false},
    {Semantics::likelihood_pm, Semantics::likelihood, false},
    {Semantics::likelihood_pm, Semantics::fourier_ind, true},
    {Semantics::fourier_ind, Semantics::likelihood_pm, false},
    {Semantics::fourier_ind, Semantics::fourier, false},
    {Semantics::fourier, Semantics::fourier_ind, true},
    {Semantics::fourier, Semantics::generating, false},
    {Semantics::generating, Semantics::fourier, false},
}};

void check_edge_number(int edge) {
  if (edge < 1 || edge > 12) throw error("edge number must be in 1..12");
}

}  // namespace

SemanticsTag edge_source(int edge) {
  check_edge_number(edge);
  return {edge_table[edge].src, 0};
}

SemanticsTag edge_target(int edge) {
  check_edge_number(edge);
  return {edge_table[edge].dst, 0};
}

bool edge_is_starred(int edge) {
  check_edge_number(edge);
  return edge_table[edge].starred;
}

Circuit apply_edge(const Circuit& c, int edge) {
  check_edge_number(edge);
  switch (edge) {
    case 1:
    case 4:
    case 7:
    case 10: return edge_transform(c, edge);
    case 2: return network_to_generating(c);
    case 3: return network_to_likelihood(c);
    case 5: return domain_swap(c, SwapDirection::to_pm_domain);
    case 6: return domain_swap(c, SwapDirection::to_01_domain);
    case 8: return fourier_ind_collapse(c, CollapseMode::to_pm);
    case 9: return fourier_ind_collapse(c, CollapseMode::to_fourier);
    case 11: return fourier_to_generating(c);
    default: return generating_to_fourier(c);
  }
}

Route plan_route(const SemanticsTag& from, const SemanticsTag& to, RouteObjective objective) {
  if (!from.distribution_tag() || !to.distribution_tag())
    throw semantics_mismatch("routes are planned between the six distribution semantics");
  if (from == to) return {};
  // Starred edges cost 16 under min_size, so routes trade up to 15 leaf
  // rewrites against one division elimination. Positive costs mean an optimal
  // route is simple; with six vertices of out-degree two, exhaustive search is
  // exact and ties break lexicographically on the edge sequence.
  auto cost = [&](int edge) {
    if (objective == RouteObjective::min_edges) return int64_t{1};
    return edge_is_starred(edge) ? int64_t{16} : int64_t{1};
  };
  Route best;
  int64_t best_cost = INT64_MAX;
  Route path;
  std::array<bool, 8> visited{};
  auto dfs = [&](auto&& self, Semantics at, int64_t so_far) -> void {
    if (at == to.kind) {
      if (so_far < best_cost || (so_far == best_cost && path < best)) {
        best_cost = so_far;
        best = path;
      }
      return;
    }
    for (int e = 1; e <= 12; ++e) {
      if (edge_table[e].src != at) continue;
      Semantics next = edge_table[e].dst;
      if (visited[static_cast<int>(next)]) continue;
      visited[static_cast<int>(next)] = true;
      path.push_back(e);
      self(self, next, so_far + cost(e));
      path.pop_back();
      visited[static_cast<int>(next)] = false;
    }
  };
  visited[static_cast<int>(from.kind)] = true;
  dfs(dfs, from.kind, 0);
  return best;
}

Circuit apply_route(const Circuit& c, const Route& route) {
  Circuit out = c;
  for (int e : route) out = apply_edge(out, e);
  return out;
}

std::string route_str(const Route& route) {
  std::string s;
  for (std::size_t i = 0; i < route.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(route[i]);
  }
  return s;
}

std::optional<Route> parse_route(const std::string& text) {
  Route route;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t pos = 0;
      int e = std::stoi(part, &pos);
      if (pos != part.size() || e < 1 || e > 12) return std::nullopt;
      route.push_back(e);
    } catch (const std::logic_error&) {
      return std::nullopt;
    }
  }
  if (route.empty() && !text.empty()) return std::nullopt;
  return route;
}

}  // namespace pcirc
