// Microbenchmarks for the evaluators and the symbolic region engine.

#include <benchmark/benchmark.h>

#include <random>

#include "topomodal/alexandrov.hpp"
#include "topomodal/formula.hpp"
#include "topomodal/kripke.hpp"
#include "topomodal/realize.hpp"
#include "topomodal/region.hpp"

namespace {

using namespace topomodal;

KripkeModel ladder_model(int n) {
    std::vector<std::string> w;
    std::vector<std::pair<std::string, std::string>> e;
    for (int i = 0; i < n; ++i) w.push_back("w" + std::to_string(i));
    for (int i = 0; i < n; ++i) {
        e.emplace_back(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>((i + 1) % n)]);
        if (i + 2 < n) e.emplace_back(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(i + 2)]);
    }
    std::map<std::string, std::set<std::string>> val;
    for (int i = 0; i < n; i += 2) val["p"].insert(w[static_cast<std::size_t>(i)]);
    for (int i = 1; i < n; i += 3) val["q"].insert(w[static_cast<std::size_t>(i)]);
    return KripkeModel(KripkeFrame(w, e), val);
}

void bench_eval_kripke(benchmark::State& state) {
    KripkeModel m = ladder_model(static_cast<int>(state.range(0)));
    FormulaPtr f = parse("[]([]p -> <>(q & [!=]p)) & <c 3> (p | q)");
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_kripke(m, f));
    }
}
BENCHMARK(bench_eval_kripke)->Arg(16)->Arg(64)->Arg(256);

void bench_tangle_lasso(benchmark::State& state) {
    KripkeModel m = ladder_model(static_cast<int>(state.range(0)));
    std::vector<FormulaPtr> delta{parse("p"), parse("q")};
    for (auto _ : state) {
        benchmark::DoNotOptimize(tangle_lasso(m, delta));
    }
}
BENCHMARK(bench_tangle_lasso)->Arg(16)->Arg(64)->Arg(256);

void bench_finite_topo(benchmark::State& state) {
    // power-of-two generated space
    int n = static_cast<int>(state.range(0));
    std::vector<std::string> pts;
    for (int i = 0; i < n; ++i) pts.push_back("x" + std::to_string(i));
    std::vector<std::vector<std::string>> family;
    for (int b = 0; b < 4; ++b) {
        std::vector<std::string> s;
        for (int i = 0; i < n; ++i) {
            if (i & (1 << b)) s.push_back(pts[static_cast<std::size_t>(i)]);
        }
        family.push_back(s);
    }
    std::map<std::string, std::vector<std::string>> val;
    for (int i = 0; i < n; i += 3) val["p"].push_back(pts[static_cast<std::size_t>(i)]);
    FiniteModel m(build_space_from_family(pts, family), val);
    FormulaPtr f = parse("[](<>p -> [d]~p) & <t>{p, ~p}");
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_finite_topo(m, f));
    }
}
BENCHMARK(bench_finite_topo)->Arg(16)->Arg(32);

// Region with `cyls` pseudo-random cylinders plus a carved cylinder and
// two exceptional points; mirrors what the evaluator produces mid-formula.
Region seeded_region(SpaceId sp, int cyls, unsigned seed) {
    std::mt19937 rng(seed);
    const Sym top = sp == SpaceId::Cantor ? 1 : 3;
    auto stem = [&](int len) {
        Stem s;
        for (int i = 0; i < len; ++i)
            s.push_back(std::uniform_int_distribution<Sym>(0, top)(rng));
        return s;
    };
    std::vector<Stem> cylinders;
    for (int i = 0; i < cyls; ++i) cylinders.push_back(stem(1 + i % 6));
    Stem outer = stem(2);
    Stem inner = outer;
    inner.push_back(0);
    BasePoint plus = make_point(sp, stem(4), {top});
    BasePoint minus = make_point(sp, stem(3), {0});
    return Region::assemble(sp, cylinders, {{outer, {inner}}}, {plus}, {minus});
}

void bench_region_combine(benchmark::State& state) {
    int cyls = static_cast<int>(state.range(0));
    Region a = seeded_region(SpaceId::Cantor, cyls, 11);
    Region b = seeded_region(SpaceId::Cantor, cyls, 23);
    for (auto _ : state) {
        benchmark::DoNotOptimize(region_combine(a, b, SetOp::Intersect));
        benchmark::DoNotOptimize(region_combine(a, b, SetOp::Union));
    }
}
BENCHMARK(bench_region_combine)->Arg(4)->Arg(16)->Arg(64);

void bench_region_deriv(benchmark::State& state) {
    int cyls = static_cast<int>(state.range(0));
    Region a = seeded_region(SpaceId::Baire, cyls, 37);
    for (auto _ : state) {
        benchmark::DoNotOptimize(region_topo_operator(a, TopoOp::Deriv));
    }
}
BENCHMARK(bench_region_deriv)->Arg(4)->Arg(16)->Arg(64);

void bench_eval_symbolic(benchmark::State& state) {
    std::map<std::string, Region> h{{"p", seeded_region(SpaceId::Cantor, 8, 5)},
                                    {"q", seeded_region(SpaceId::Cantor, 8, 7)}};
    SymbolicModel m(SpaceId::Cantor, h);
    FormulaPtr f = parse("[](p -> <d>q) & <t>{p, ~q} & <c 2>(p & q)");
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_symbolic(m, f));
    }
}
BENCHMARK(bench_eval_symbolic);

void bench_realize(benchmark::State& state) {
    // complete 3-world frame: the widest branching a realization meets
    std::vector<std::string> w{"a", "b", "c"};
    std::vector<std::pair<std::string, std::string>> e;
    for (const auto& u : w)
        for (const auto& v : w) e.emplace_back(u, v);
    KripkeModel m(KripkeFrame(w, e), {{"p", {"a"}}, {"q", {"b", "c"}}});
    int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(realize_model(m, "a", depth));
    }
}
BENCHMARK(bench_realize)->Arg(3)->Arg(5)->Arg(7);

void bench_eval_realized(benchmark::State& state) {
    std::vector<std::string> w{"a", "b", "c"};
    std::vector<std::pair<std::string, std::string>> e;
    for (const auto& u : w)
        for (const auto& v : w) e.emplace_back(u, v);
    KripkeModel m(KripkeFrame(w, e), {{"p", {"a"}}, {"q", {"b", "c"}}});
    RealizedStructure rs = realize_model(m, "a", 5);
    FormulaPtr f = parse("[d](p -> A(q | [d]p))");
    BasePoint x = rs.node(rs.root_of(1)).boundary.sample_point();
    for (auto _ : state) {
        benchmark::DoNotOptimize(eval_realized(rs, f, x));
    }
}
BENCHMARK(bench_eval_realized);

}  // namespace

BENCHMARK_MAIN();
