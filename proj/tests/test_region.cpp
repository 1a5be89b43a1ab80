#include "doctest.h"

#include <random>
#include <stdexcept>

#include "support.hpp"
#include "topomodal/formula.hpp"
#include "topomodal/region.hpp"

using namespace topomodal;
using testsupport::candidate_members;
using testsupport::gen_point;
using testsupport::gen_region;
using testsupport::in_closure_oracle;
using testsupport::in_deriv_oracle;
using testsupport::probe_bound;
using testsupport::sample_points;
using testsupport::truncate_point;

namespace {

const SpaceId kSpaces[] = {SpaceId::Cantor, SpaceId::Baire};

BasePoint pt(SpaceId sp, std::vector<Sym> prefix, std::vector<Sym> period) {
    return make_point(sp, std::move(prefix), std::move(period));
}

Region cyl(SpaceId sp, const Stem& s) { return Region::cylinder(sp, s); }

bool subset(const Region& a, const Region& b) {
    return region_combine(a, b, SetOp::Union) == b;
}

}  // namespace

TEST_SUITE_BEGIN("region");

TEST_CASE("point canonicalization is presentation independent") {
    std::mt19937 rng(9);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 200; ++i) {
            BasePoint a = gen_point(rng, sp);
            // same sequence, different presentations
            std::vector<Sym> longer_prefix = a.prefix;
            longer_prefix.insert(longer_prefix.end(), a.period.begin(), a.period.end());
            BasePoint b = make_point(sp, longer_prefix, a.period);
            std::vector<Sym> doubled = a.period;
            doubled.insert(doubled.end(), a.period.begin(), a.period.end());
            BasePoint c = make_point(sp, a.prefix, doubled);
            std::vector<Sym> rot = a.period;
            std::vector<Sym> shift_prefix = a.prefix;
            shift_prefix.push_back(rot.front());
            rot.erase(rot.begin());
            rot.push_back(shift_prefix.back());
            BasePoint d = make_point(sp, shift_prefix, rot);
            CHECK(a == b);
            CHECK(a == c);
            CHECK(a == d);
            for (std::size_t k = 0; k < 24; ++k) CHECK(point_at(a, k) == point_at(b, k));
        }
    }
    CHECK_THROWS_AS(make_point(SpaceId::Cantor, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_point(SpaceId::Cantor, {2}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(make_point(SpaceId::Cantor, {0}, {2}), std::invalid_argument);
}

TEST_CASE("point order is total and matches equality") {
    std::mt19937 rng(13);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 150; ++i) {
            BasePoint a = gen_point(rng, sp), b = gen_point(rng, sp);
            int ab = point_compare(a, b), ba = point_compare(b, a);
            CHECK(((ab == 0 && ba == 0) || (ab < 0 && ba > 0) || (ab > 0 && ba < 0)));
            CHECK((ab == 0) == (a == b));
        }
    }
}

TEST_CASE("metric on points") {
    BasePoint zeros = pt(SpaceId::Cantor, {}, {0});
    BasePoint zo = pt(SpaceId::Cantor, {0}, {1});
    CHECK(metric_distance(zeros, zeros) == Distance::zero());
    CHECK(metric_distance(zeros, zo) == Distance::pow2(1));
    CHECK(metric_distance(zeros, zo).str() == "1/2");
    CHECK(metric_distance(zeros, pt(SpaceId::Cantor, {}, {1})) == Distance::pow2(0));
    // distances order correctly
    CHECK(Distance::zero() < Distance::pow2(5));
    CHECK(Distance::pow2(5) < Distance::pow2(2));
    CHECK(Distance::pow2(2).approx() == 0.25);
    CHECK_THROWS_AS(metric_distance(zeros, pt(SpaceId::Baire, {}, {0})), std::invalid_argument);
}

TEST_CASE("boolean combinations on frozen examples") {
    Region zero_cyl = cyl(SpaceId::Cantor, {0});
    Region one_cyl = cyl(SpaceId::Cantor, {1});
    CHECK(region_combine(zero_cyl, one_cyl, SetOp::Union) == Region::full(SpaceId::Cantor));
    CHECK(region_combine(Region::empty(SpaceId::Cantor), Region::empty(SpaceId::Cantor),
                         SetOp::Complement) == Region::full(SpaceId::Cantor));

    // ([00] | {0 1^w}) & [0] keeps both parts
    BasePoint p01 = pt(SpaceId::Cantor, {0}, {1});
    Region a = Region::assemble(SpaceId::Cantor, {{0, 0}}, {}, {p01}, {});
    CHECK(region_combine(a, zero_cyl, SetOp::Intersect) == a);

    CHECK_THROWS_AS(region_combine(zero_cyl, Region::full(SpaceId::Baire), SetOp::Union),
                    std::invalid_argument);
    CHECK_THROWS_AS(Region::cylinder(SpaceId::Cantor, {2}), std::invalid_argument);
}

TEST_CASE("membership after boolean combinations matches pointwise logic") {
    std::mt19937 rng(17);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 120; ++i) {
            Region a = gen_region(rng, sp), b = gen_region(rng, sp);
            Region u = region_combine(a, b, SetOp::Union);
            Region n = region_combine(a, b, SetOp::Intersect);
            Region c = region_combine(a, a, SetOp::Complement);
            std::vector<BasePoint> pts = sample_points(rng, a, 4);
            std::vector<BasePoint> more = sample_points(rng, b, 4);
            pts.insert(pts.end(), more.begin(), more.end());
            for (const auto& x : pts) {
                bool ia = a.contains(x), ib = b.contains(x);
                CHECK(u.contains(x) == (ia || ib));
                CHECK(n.contains(x) == (ia && ib));
                CHECK(c.contains(x) == !ia);
            }
        }
    }
}

TEST_CASE("region equality is extensional on samples") {
    // different presentations of the same set compare equal
    Region ab = region_combine(cyl(SpaceId::Cantor, {0, 0}), cyl(SpaceId::Cantor, {0, 1}),
                               SetOp::Union);
    CHECK(ab == cyl(SpaceId::Cantor, {0}));
    Region carved = Region::assemble(SpaceId::Baire, {}, {{{}, {{0}}}}, {}, {});
    Region built = region_combine(Region::full(SpaceId::Baire), cyl(SpaceId::Baire, {0}),
                                  SetOp::Intersect);
    Region compl0 = region_combine(cyl(SpaceId::Baire, {0}), built, SetOp::Complement);
    CHECK(carved == compl0);
}

TEST_CASE("topological operators on frozen examples") {
    const SpaceId sp = SpaceId::Cantor;
    BasePoint x = pt(sp, {1, 0}, {1});
    BasePoint y = pt(sp, {1, 1}, {0});
    Region finite = region_combine(Region::single_point(x), Region::single_point(y), SetOp::Union);
    CHECK(region_topo_operator(finite, TopoOp::Deriv) == Region::empty(sp));
    CHECK(region_topo_operator(finite, TopoOp::Int) == Region::empty(sp));
    CHECK(region_topo_operator(finite, TopoOp::Cl) == finite);

    Region s = cyl(sp, {0, 1});
    CHECK(region_topo_operator(s, TopoOp::Deriv) == s);
    CHECK(region_topo_operator(s, TopoOp::Cl) == s);
    CHECK(region_topo_operator(s, TopoOp::Int) == s);

    // p outside [01]: the union is not open at p, interior drops it
    BasePoint p = pt(sp, {1}, {1});
    Region su = region_combine(s, Region::single_point(p), SetOp::Union);
    CHECK(region_topo_operator(su, TopoOp::Int) == s);
    CHECK(region_topo_operator(su, TopoOp::Cl) == su);

    // removing a point from a cylinder: closure restores it
    Region holed = Region::assemble(sp, {{0}}, {}, {}, {pt(sp, {}, {0})});
    CHECK(region_topo_operator(holed, TopoOp::Cl) == cyl(sp, {0}));
    CHECK(region_topo_operator(holed, TopoOp::Int) == holed);
    CHECK(region_topo_operator(holed, TopoOp::Deriv) == cyl(sp, {0}));
}

TEST_CASE("operator laws on random regions") {
    std::mt19937 rng(23);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 100; ++i) {
            Region a = gen_region(rng, sp), b = gen_region(rng, sp);
            Region cl_a = region_topo_operator(a, TopoOp::Cl);
            Region int_a = region_topo_operator(a, TopoOp::Int);
            Region d_a = region_topo_operator(a, TopoOp::Deriv);
            Region compl_a = region_combine(a, a, SetOp::Complement);

            CHECK(subset(int_a, a));
            CHECK(subset(a, cl_a));
            CHECK(region_topo_operator(cl_a, TopoOp::Cl) == cl_a);
            CHECK(region_topo_operator(int_a, TopoOp::Int) == int_a);
            // cl A = A | <d>A
            CHECK(cl_a == region_combine(a, d_a, SetOp::Union));
            // int A = ~cl~A
            Region dual = region_combine(region_topo_operator(compl_a, TopoOp::Cl),
                                         region_topo_operator(compl_a, TopoOp::Cl),
                                         SetOp::Complement);
            CHECK(int_a == dual);
            // additivity / multiplicativity
            Region un = region_combine(a, b, SetOp::Union);
            CHECK(region_topo_operator(un, TopoOp::Deriv) ==
                  region_combine(d_a, region_topo_operator(b, TopoOp::Deriv), SetOp::Union));
            CHECK(region_topo_operator(un, TopoOp::Cl) ==
                  region_combine(cl_a, region_topo_operator(b, TopoOp::Cl), SetOp::Union));
            Region in = region_combine(a, b, SetOp::Intersect);
            CHECK(region_topo_operator(in, TopoOp::Int) ==
                  region_combine(int_a, region_topo_operator(b, TopoOp::Int), SetOp::Intersect));
        }
    }
}

TEST_CASE("closure and derivative agree with the cylinder-probe oracles") {
    std::mt19937 rng(29);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 60; ++i) {
            Region a = gen_region(rng, sp);
            Region cl_a = region_topo_operator(a, TopoOp::Cl);
            Region d_a = region_topo_operator(a, TopoOp::Deriv);
            for (const auto& x : sample_points(rng, a, 5)) {
                CHECK(cl_a.contains(x) == in_closure_oracle(a, x));
                CHECK(d_a.contains(x) == in_deriv_oracle(a, x));
            }
        }
    }
}

TEST_CASE("no singleton is open; cantor infinite sets accumulate") {
    std::mt19937 rng(31);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 40; ++i) {
            Region one = Region::single_point(gen_point(rng, sp));
            CHECK(region_topo_operator(one, TopoOp::Int) == Region::empty(sp));
        }
    }
    for (int i = 0; i < 60; ++i) {
        Region r = gen_region(rng, SpaceId::Cantor);
        if (region_cardinality(r).kind == Cardinality::Kind::Infinite) {
            CHECK(!region_topo_operator(r, TopoOp::Deriv).is_empty());
        }
    }
}

TEST_CASE("cardinality classes") {
    const SpaceId sp = SpaceId::Cantor;
    CHECK(region_cardinality(Region::empty(sp)).kind == Cardinality::Kind::Empty);

    Region two = region_combine(Region::single_point(pt(sp, {}, {0})),
                                Region::single_point(pt(sp, {}, {1})), SetOp::Union);
    Cardinality c = region_cardinality(two);
    CHECK(c.kind == Cardinality::Kind::Finite);
    CHECK(c.count == 2);

    Region holed = Region::assemble(sp, {{0}}, {}, {}, {pt(sp, {}, {0})});
    CHECK(region_cardinality(holed).kind == Cardinality::Kind::Infinite);
    // exhibit three distinct members
    CHECK(holed.contains(pt(sp, {0, 1}, {0})));
    CHECK(holed.contains(pt(sp, {0, 1, 1}, {0})));
    CHECK(holed.contains(pt(sp, {0}, {1})));
}

TEST_CASE("distance from a point to a region") {
    const SpaceId sp = SpaceId::Cantor;
    BasePoint zeros = pt(sp, {}, {0});
    CHECK(metric_distance(zeros, cyl(sp, {1})) == Distance::pow2(0));
    CHECK(metric_distance(zeros, cyl(sp, {0, 0})) == Distance::zero());
    CHECK(metric_distance(pt(sp, {1}, {0}), cyl(sp, {1, 1})) == Distance::pow2(1));
    // removed point: infimum 0 without attainment
    Region holed = Region::assemble(sp, {{0}}, {}, {}, {zeros});
    CHECK(!holed.contains(zeros));
    CHECK(metric_distance(zeros, holed) == Distance::zero());
    CHECK_THROWS_AS(metric_distance(zeros, Region::empty(sp)), std::domain_error);

    // to a pure point set
    Region pts = region_combine(Region::single_point(pt(sp, {0, 1}, {0})),
                                Region::single_point(pt(sp, {1}, {1})), SetOp::Union);
    CHECK(metric_distance(zeros, pts) == Distance::pow2(1));
}

TEST_CASE("distance to regions matches the probe oracle") {
    std::mt19937 rng(37);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 60; ++i) {
            Region r = gen_region(rng, sp);
            if (r.is_empty()) continue;
            for (const auto& x : sample_points(rng, r, 5)) {
                Distance got = metric_distance(x, r);
                if (in_closure_oracle(r, x)) {
                    CHECK(got == Distance::zero());
                } else {
                    std::size_t kmax = 0;
                    for (std::size_t k = 0; k <= probe_bound(r, x); ++k) {
                        if (!candidate_members(r, truncate_point(x, k), 0).empty()) kmax = k;
                    }
                    CHECK(got == Distance::pow2(static_cast<std::uint32_t>(kmax)));
                }
            }
        }
    }
}

TEST_CASE("symbolic evaluation: global clauses") {
    const SpaceId sp = SpaceId::Cantor;
    SymbolicModel m(sp, {{"p", cyl(sp, {0})}});
    CHECK(eval_symbolic(m, parse("A p")) == Region::empty(sp));
    CHECK(eval_symbolic(m, parse("E p")) == Region::full(sp));
    CHECK(eval_symbolic(m, parse("A (p | ~p)")) == Region::full(sp));
    CHECK(eval_symbolic(m, parse("<c 65535> p")) == Region::full(sp));  // infinite
    CHECK(eval_symbolic(m, parse("[!=]p")) == Region::empty(sp));

    // co-singleton valuation: [!=]q holds exactly at the missing point
    BasePoint x = pt(sp, {0, 1}, {1});
    SymbolicModel m2(sp, {{"q", Region::assemble(sp, {{}}, {}, {}, {x})}});
    CHECK(eval_symbolic(m2, parse("[!=]q")) == Region::single_point(x));
    CHECK(eval_symbolic(m2, parse("A q")) == Region::empty(sp));
    CHECK(eval_symbolic(m2, parse("<c 1> ~q")) == Region::empty(sp));
    CHECK(eval_symbolic(m2, parse("<c 0> ~q")) == Region::full(sp));

    SymbolicModel m3(sp, {{"r", region_combine(Region::single_point(x), Region::single_point(x),
                                               SetOp::Union)}});
    CHECK(eval_symbolic(m3, parse("<c 0> r")) == Region::full(sp));
    CHECK(eval_symbolic(m3, parse("<c 1> r")) == Region::empty(sp));
}

TEST_CASE("symbolic evaluation: modal clauses go through the operators") {
    std::mt19937 rng(41);
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 40; ++i) {
            Region rp = gen_region(rng, sp);
            SymbolicModel m(sp, {{"p", rp}});
            CHECK(eval_symbolic(m, parse("[]p")) == region_topo_operator(rp, TopoOp::Int));
            CHECK(eval_symbolic(m, parse("<>p")) == region_topo_operator(rp, TopoOp::Cl));
            CHECK(eval_symbolic(m, parse("<d>p")) == region_topo_operator(rp, TopoOp::Deriv));
            Region co = region_combine(rp, rp, SetOp::Complement);
            Region dco = region_topo_operator(co, TopoOp::Deriv);
            CHECK(eval_symbolic(m, parse("[d]p")) == region_combine(dco, dco, SetOp::Complement));
        }
    }
}

TEST_CASE("tangle on symbolic models") {
    const SpaceId sp = SpaceId::Cantor;
    SymbolicModel m(sp, {{"q", cyl(sp, {0})}});
    CHECK(eval_symbolic(m, parse("<t>{true}")) == Region::full(sp));
    // cl[0] & cl[1] = [0] & [1] = empty after one step
    CHECK(eval_symbolic(m, parse("<t>{q, ~q}")) == Region::empty(sp));
    CHECK(eval_symbolic(m, parse("<t>{q}")) == cyl(sp, {0}));

    // single removed point: the tangle restores it (closure of the
    // punctured cylinder)
    SymbolicModel m2(sp, {{"q", Region::assemble(sp, {{0}}, {}, {}, {pt(sp, {}, {0})})}});
    CHECK(eval_symbolic(m2, parse("<t>{q}")) == cyl(sp, {0}));
}

TEST_CASE("tangle equals the generated-subalgebra greatest fixpoint") {
    std::mt19937 rng(43);
    for (SpaceId sp : kSpaces) {
        int done = 0;
        for (int attempt = 0; attempt < 200 && done < 25; ++attempt) {
            std::vector<Region> delta;
            int k = std::uniform_int_distribution<int>(1, 2)(rng);
            for (int j = 0; j < k; ++j) delta.push_back(gen_region(rng, sp));

            // split the space into the atoms generated by the members
            // and their exceptional points
            std::vector<Region> pieces{Region::full(sp)};
            auto split_by = [&](const Region& r) {
                std::vector<Region> next;
                for (const auto& piece : pieces) {
                    Region in = region_combine(piece, r, SetOp::Intersect);
                    Region out = region_combine(piece, region_combine(r, r, SetOp::Complement),
                                                SetOp::Intersect);
                    if (!in.is_empty()) next.push_back(in);
                    if (!out.is_empty()) next.push_back(out);
                }
                pieces = next;
            };
            for (const auto& d : delta) {
                split_by(d);
                for (const auto& p : d.plus_points()) split_by(Region::single_point(p));
                for (const auto& p : d.minus_points()) split_by(Region::single_point(p));
            }
            if (pieces.size() > 8) continue;
            ++done;

            Region best = Region::empty(sp);
            for (unsigned mask = 0; mask < (1u << pieces.size()); ++mask) {
                Region s = Region::empty(sp);
                for (std::size_t j = 0; j < pieces.size(); ++j) {
                    if (mask & (1u << j)) s = region_combine(s, pieces[j], SetOp::Union);
                }
                bool post = true;
                for (const auto& d : delta) {
                    Region cut = region_combine(d, s, SetOp::Intersect);
                    if (!subset(s, region_topo_operator(cut, TopoOp::Cl))) {
                        post = false;
                        break;
                    }
                }
                if (post) best = region_combine(best, s, SetOp::Union);
            }

            std::map<std::string, Region> h;
            std::vector<FormulaPtr> names;
            for (std::size_t j = 0; j < delta.size(); ++j) {
                std::string nm = "p" + std::to_string(j);
                h.emplace(nm, delta[j]);
                names.push_back(make_atom(nm));
            }
            SymbolicModel m(sp, std::move(h));
            Region got = eval_symbolic(m, make_tangle(names));
            CHECK(got == best);
            // and the result is a genuine fixpoint
            Region back = Region::full(sp);
            for (const auto& d : delta) {
                Region cut = region_combine(d, got, SetOp::Intersect);
                back = region_combine(back, region_topo_operator(cut, TopoOp::Cl), SetOp::Intersect);
            }
            CHECK(back == got);
        }
        CHECK(done >= 25);
    }
}

TEST_CASE("KD4U schemas evaluate to the full space") {
    std::mt19937 rng(47);
    testsupport::GenOpts opts;
    opts.use_box = false;
    opts.use_tangle = false;
    opts.use_diff = false;
    opts.max_depth = 2;
    for (SpaceId sp : kSpaces) {
        for (int i = 0; i < 40; ++i) {
            SymbolicModel m(sp, {{"p", gen_region(rng, sp)}, {"q", gen_region(rng, sp)}});
            FormulaPtr f = testsupport::gen_formula(rng, opts), g = testsupport::gen_formula(rng, opts);
            auto valid = [&](const FormulaPtr& ax) {
                CHECK(eval_symbolic(m, ax) == Region::full(sp));
            };
            valid(make_imp(make_coderiv(make_imp(f, g)),
                           make_imp(make_coderiv(f), make_coderiv(g))));
            valid(make_deriv(make_top()));
            valid(make_imp(make_coderiv(f), make_coderiv(make_coderiv(f))));
            valid(make_imp(make_univ(f), f));
            valid(make_imp(f, make_univ(make_exists(f))));
            valid(make_imp(make_univ(f), make_univ(make_univ(f))));
            valid(make_imp(make_univ(f), make_coderiv(f)));
        }
    }
}

TEST_CASE("model construction validates spaces") {
    CHECK_THROWS_AS(SymbolicModel(SpaceId::Cantor, {{"p", Region::full(SpaceId::Baire)}}),
                    std::invalid_argument);
}

TEST_SUITE_END();
