// Shared test fixtures.
#pragma once

#include <string>

#include "e2rc/protograph.hpp"

namespace fixtures {

// Published 8x16 mother protograph: 8 systematic columns, one degree-3
// parity column carried over from the starting graph, seven degree-2 parity
// columns added by check-splitting.
inline const char* kProtographOneText =
    "8 16\n"
    "3 1 1 0 1 0 0 1 0 0 0 0 1 0 0 0\n"
    "2 1 0 1 0 0 1 0 1 1 1 0 1 0 0 0\n"
    "3 1 0 0 0 0 1 0 1 0 1 0 0 0 1 0\n"
    "2 1 1 0 1 1 0 0 0 0 0 0 0 0 1 0\n"
    "3 1 0 0 1 1 0 1 0 0 0 0 0 1 0 0\n"
    "2 1 0 1 0 0 1 0 0 1 0 1 0 1 0 0\n"
    "3 1 0 1 0 0 0 1 0 0 0 1 0 0 0 1\n"
    "2 1 1 0 0 1 0 0 1 0 0 0 0 0 0 1\n"
    "s s s s s s s s p p p p p p p p\n"
    "0 0 0 0 0 0 0 0 0 0 0 0 0 0 0 0\n";

inline e2rc::Protograph protograph_one() {
  return e2rc::protograph_from_text(kProtographOneText);
}

// Starting graph behind the family: one check, nine variables with
// multiplicities {20, 8, 3, 3, 3, 3, 3, 3, 3}; the last degree-3 column is
// the high-rate parity node.
inline e2rc::Protograph starting_protograph() {
  e2rc::Protograph g;
  g.base = {{20, 8, 3, 3, 3, 3, 3, 3, 3}};
  g.roles.assign(9, e2rc::VarRole::Systematic);
  g.roles[8] = e2rc::VarRole::ParityOld;
  g.punctured.assign(9, 0);
  return g;
}

}  // namespace fixtures
