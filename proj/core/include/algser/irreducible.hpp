#pragma once

#include <algser/tower.hpp>

namespace algser {

// Irreducibility policy for monic step polynomials: decide what we can,
// search what we can bound, carry the rest as declared certificates.
//   - degree 1 is proved outright
//   - a pure p-power shape Y^(p^e) - c is decided through p-th root
//     extraction where the tower supports it: a root yields a factor, a
//     certified miss yields proved, an undecidable tower yields declared
//   - degree <= 4 gets an exhaustive factor search and comes back checked:
//     the search is complete over finite towers and over rational constants
//     at depth zero, and falls back to a bounded syntactic candidate pool
//     elsewhere
//   - degree > 4 comes back declared, and downstream verdicts carry the
//     condition
// Throws ReducibleWitness naming the factor when one is found, and
// BadInseparableShape for malformed inseparable-tagged polynomials.
IrredStatus certify_irreducible(TowerPtr below, const UPoly& minpoly, StepKind kind);

// Certify, tag and adjoin in one call; inseparable heights are read off the
// polynomial degree.
TowerPtr adjoin_certified(TowerPtr below, const std::string& gen, UPoly minpoly, StepKind kind);

}  // namespace algser
