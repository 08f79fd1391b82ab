#pragma once

#include "sara/pgm/model.hpp"

#include <iosfwd>
#include <string>

namespace sara::pgm {

// Text serialization of a QueryInstance. Line-oriented sections:
//
//   nodes <N>
//   edge <a> <b>                 (one line per exploration edge)
//   anchor <index> <value>
//   cpt <index> <parent> <flip>  (flip as an exact fraction, e.g. 1/10)
//   target <index> <value>
//   path <i1> <i2> ...           (one line per correct path)
//
// Blank lines and lines starting with '#' are ignored.

std::string serialize_instance(const QueryInstance& instance);
QueryInstance parse_instance(const std::string& text);

QueryInstance load_instance(const std::string& path);
void save_instance(const QueryInstance& instance, const std::string& path);

/// The frozen canonical instance: nodes {1,2,3,4}, edges {1-2, 1-3, 2-4},
/// anchor 1 with X1=1, flip 1/10 per edge, target (4, 1), correct path 1-2-4.
QueryInstance canonical_instance();

}  // namespace sara::pgm
