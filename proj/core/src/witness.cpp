#include "topomodal/witness.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <utility>

namespace topomodal {

namespace {

std::string p_name(int i) { return "p" + std::to_string(i); }

}  // namespace

TangleWitness witness_tangle(int n) {
    if (n < 0) throw std::invalid_argument("witness stage must be non-negative");

    std::vector<std::string> worlds;
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i <= n; ++i) {
        worlds.push_back(std::to_string(i));
        for (int j = i; j <= n; ++j) edges.emplace_back(std::to_string(i), std::to_string(j));
    }
    std::map<std::string, std::set<std::string>> val;
    for (int i = 0; i <= n; ++i) {
        val[p_name(i)] = {std::to_string(i)};
        if (i % 2 == 0) val["q"].insert(std::to_string(i));
    }
    KripkeModel model(KripkeFrame(std::move(worlds), edges), val);

    FormulaPtr q = make_atom("q");
    std::vector<FormulaPtr> sigma;
    sigma.push_back(make_neg(make_tangle({q, make_neg(q)})));
    sigma.push_back(make_atom(p_name(0)));
    for (int i = 0; i < n; ++i) {
        sigma.push_back(make_univ(
            make_imp(make_atom(p_name(i)), make_diamond(make_atom(p_name(i + 1))))));
    }
    for (int i = 0; i <= n; ++i) {
        FormulaPtr head = i % 2 == 0 ? q : make_neg(q);
        sigma.push_back(make_univ(make_imp(make_atom(p_name(i)), head)));
    }
    return {std::move(sigma), std::move(model), "0"};
}

DerivativeWitness witness_derivative(int n) {
    if (n < 0) throw std::invalid_argument("witness stage must be non-negative");

    std::vector<BasePoint> pts;
    for (int i = 0; i <= n; ++i) {
        pts.push_back(make_point(SpaceId::Cantor, Stem(static_cast<std::size_t>(i), 0), {1}));
    }
    std::map<std::string, Region> h;
    Region q_region = Region::empty(SpaceId::Cantor);
    for (int i = 0; i <= n; ++i) {
        Region single = Region::single_point(pts[static_cast<std::size_t>(i)]);
        h.emplace(p_name(i), single);
        q_region = region_combine(q_region, single, SetOp::Union);
    }
    h.emplace("q", std::move(q_region));
    SymbolicModel model(SpaceId::Cantor, std::move(h));

    std::vector<FormulaPtr> sigma;
    for (int i = 0; i <= n; ++i) {
        std::vector<FormulaPtr> parts{make_atom("q"), make_atom(p_name(i))};
        for (int j = 0; j < i; ++j) parts.push_back(make_neg(make_atom(p_name(j))));
        sigma.push_back(make_exists(make_big_and(parts)));
    }
    sigma.push_back(make_univ(make_neg(make_deriv(make_atom("q")))));
    return {std::move(sigma), std::move(model), pts.front()};
}

}  // namespace topomodal
