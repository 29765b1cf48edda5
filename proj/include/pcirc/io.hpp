#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "pcirc/circuit.hpp"

/*!
  Line-oriented `.pcirc` text format (UTF-8, '#' starts a comment):

    pcirc 1
    semantics <likelihood|network|generating|likelihood_pm|fourier|fourier_ind|
               categorical_generating k=<int>|raw>
    vars <n>
    n<id> const <rational>
    n<id> var x<i>
    n<id> var ~x<i>
    n<id> sum <w>:n<id> ...
    n<id> mul n<id> ...
    n<id> div n<id> n<id>
    output n<id>

  Rationals are "p/q", integers, or decimal literals, parsed exactly. Children
  must be defined before use. Serialization is canonical: nodes in topological
  order of first use, ids dense, rationals in lowest terms.
*/

namespace pcirc {

std::optional<SemanticsTag> parse_semantics(const std::string& text);

Circuit read_pcirc(std::istream& in, BuildOptions opts = {});
Circuit read_pcirc_file(const std::string& path, BuildOptions opts = {});
Circuit read_pcirc_string(const std::string& text, BuildOptions opts = {});

void write_pcirc(std::ostream& out, const Circuit& c);
void write_pcirc_file(const std::string& path, const Circuit& c);
std::string to_pcirc(const Circuit& c);

}  // namespace pcirc
