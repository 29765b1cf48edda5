#pragma once

#include <vector>

#include "pcirc/circuit.hpp"

/*!
  Transformations between the six polynomial encodings that only rewrite
  leaves and/or append one scaling node at the root, plus a route planner
  over the full twelve-edge transformation graph:

    1: generating    -> network        (division elimination, O(s n^2))
    2: network       -> generating     (bar leaves := 1)
    3: network       -> likelihood     (bar leaves := 1 - x)
    4: likelihood    -> network        (division elimination, O(s n^2))
    5: likelihood    -> likelihood_pm  (x := (1 - x)/2)
    6: likelihood_pm -> likelihood     (x := 1 - 2x)
    7: likelihood_pm -> fourier_ind    (division elimination, O(s n^2))
    8: fourier_ind   -> likelihood_pm  (bar leaves := 1)
    9: fourier_ind   -> fourier        (bar leaves := 1 - x)
   10: fourier       -> fourier_ind    (division elimination, O(s n^2))
   11: fourier       -> generating     (x := (1 - x)/2, root scaled by 2^n)
   12: generating    -> fourier        (x := 1 - 2x, root scaled by 2^-n)

  Edges 1, 4, 7, 10 live in division_elim.hpp; apply_edge() dispatches to them.
*/

namespace pcirc {

Circuit network_to_generating(const Circuit& c);  // edge 2
Circuit network_to_likelihood(const Circuit& c);  // edge 3

enum class SwapDirection { infer, to_pm_domain, to_01_domain };

/// Edges 5 and 6: the {0,1} <-> {-1,1} domain swap. Direction is inferred
/// from the tag for likelihood/likelihood_pm inputs; raw circuits need an
/// explicit direction and stay raw.
Circuit domain_swap(const Circuit& c, SwapDirection dir = SwapDirection::infer);

Circuit generating_to_fourier(const Circuit& c);  // edge 12
Circuit fourier_to_generating(const Circuit& c);  // edge 11

enum class CollapseMode { to_pm, to_fourier };

/// Edges 8 and 9: drop the indicator pair of a fourier_ind circuit.
Circuit fourier_ind_collapse(const Circuit& c, CollapseMode mode);

/// Executes one Fig-style transformation edge (1..12), checking the source tag.
Circuit apply_edge(const Circuit& c, int edge);

SemanticsTag edge_source(int edge);
SemanticsTag edge_target(int edge);
bool edge_is_starred(int edge);  // the four division-elimination edges

using Route = std::vector<int>;

enum class RouteObjective { min_size, min_edges };

/// Shortest route between two distribution tags over the twelve-edge graph.
/// min_size treats the starred edges as expensive; ties break toward smaller
/// edge numbers. The graph is strongly connected, so a route always exists.
Route plan_route(const SemanticsTag& from, const SemanticsTag& to,
                 RouteObjective objective = RouteObjective::min_size);

Circuit apply_route(const Circuit& c, const Route& route);

std::string route_str(const Route& route);
std::optional<Route> parse_route(const std::string& text);

}  // namespace pcirc
