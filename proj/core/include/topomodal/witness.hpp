// witness.hpp - parametric formula families separating finite from
// global satisfiability
//
// witness_tangle(n) produces the finite stage of a set whose every
// finite subset is satisfiable while the whole set is not: along a
// growing chain, p0 holds now, each p_i forces a reachable p_{i+1},
// even stages carry q and odd stages carry ~q, yet no infinite path
// may alternate q forever, which is exactly what ~<t>{q,~q} forbids.
// The returned chain model makes the stage true at its first world.
//
// witness_derivative(n) plays the same game against the derivative
// operator over cantor space: q must meet n+1 pairwise distinct
// points (the first point with q and p_i but no earlier p_j), while
// A~<d>q keeps q crowd-free.  Finitely many points never accumulate,
// so every finite stage is globally true in the returned symbolic
// model, but no set can be infinite and accumulation-free there.

#pragma once

#include <string>
#include <vector>

#include "topomodal/formula.hpp"
#include "topomodal/kripke.hpp"
#include "topomodal/region.hpp"

namespace topomodal {

struct TangleWitness {
    std::vector<FormulaPtr> sigma;
    KripkeModel model;
    std::string designated;  // world satisfying every member of sigma
};

// Stage n: { ~<t>{q,~q}, p0 } + { A(p_i -> <>p_{i+1}) : i < n }
//        + { A(p_i -> q) : even i <= n } + { A(p_i -> ~q) : odd i <= n }
// over the chain 0 <= 1 <= ... <= n with h(p_i) = {i}, h(q) = evens.
// Throws std::invalid_argument on n < 0.
TangleWitness witness_tangle(int n);

struct DerivativeWitness {
    std::vector<FormulaPtr> sigma;
    SymbolicModel model;
    BasePoint point;  // x0; every member of sigma is global anyway
};

// Stage n: { E(q & p_i & ~p_0 & ... & ~p_{i-1}) : i <= n } + { A ~<d>q }
// over cantor space with h(p_i) = {x_i}, h(q) = {x_0..x_n} for the
// distinct points x_i = 0^i 1^w.  Throws std::invalid_argument on
// n < 0.
DerivativeWitness witness_derivative(int n);

}  // namespace topomodal
