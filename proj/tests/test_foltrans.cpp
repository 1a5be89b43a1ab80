#include "doctest.h"

#include <random>
#include <stdexcept>

#include "support.hpp"
#include "topomodal/alexandrov.hpp"
#include "topomodal/foltrans.hpp"
#include "topomodal/formula.hpp"
#include "topomodal/region.hpp"

using namespace topomodal;

namespace {

// random partition topology: opens are exactly the unions of blocks,
// so every minimal neighbourhood is clopen
FiniteModel random_partition_model(std::mt19937& rng, int max_points) {
    const int n = 2 + static_cast<int>(rng() % (max_points - 1));
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
    const int nblocks = 1 + static_cast<int>(rng() % n);
    std::vector<std::vector<std::string>> blocks(nblocks);
    for (int i = 0; i < n; ++i) blocks[rng() % nblocks].push_back(names[i]);
    blocks.erase(std::remove_if(blocks.begin(), blocks.end(),
                                [](const auto& b) { return b.empty(); }),
                 blocks.end());
    FiniteSpace sp = build_space_from_family(names, blocks);
    std::map<std::string, std::vector<std::string>> val;
    for (const char* a : {"p", "q"}) {
        std::vector<std::string> ext;
        for (const auto& w : names)
            if (rng() % 2) ext.push_back(w);
        val[a] = ext;
    }
    return FiniteModel(sp, val);
}

Region cyl(const char* bits) {
    Stem s;
    for (const char* c = bits; *c; ++c) s.push_back(static_cast<Sym>(*c - '0'));
    return Region::cylinder(SpaceId::Cantor, s);
}

BasePoint cpt(const Stem& prefix, const Stem& period) {
    return make_point(SpaceId::Cantor, prefix, period);
}

}  // namespace

TEST_SUITE_BEGIN("foltrans");

TEST_CASE("translation of the core clauses") {
    CHECK(fol_str(standard_translate(parse("[]p"))) ==
          "Es:O0 (x in O0 & Ap:y1 (y1 in O0 -> P_p(y1)))");
    CHECK(fol_str(standard_translate(parse("<c 1>p"))) ==
          "Ep:x0 Ep:x1 (~x0 = x1 & P_p(x0) & P_p(x1))");
    CHECK(standard_translate(parse("true"))->kind == FKind::True);
    CHECK(fol_str(standard_translate(parse("p & ~q"))) == "P_p(x) & ~P_q(x)");

    // universal and difference modalities are rewritten away first
    CHECK(fol_str(standard_translate(parse("A p"))) == "~Ep:x0 ~P_p(x0)");
    CHECK_NOTHROW(standard_translate(parse("[!=]p")));
    CHECK_THROWS_AS(standard_translate(parse("[d]p")), std::invalid_argument);
    CHECK_THROWS_AS(standard_translate(parse("<t>{p}")), std::invalid_argument);
}

TEST_CASE("translations have at most the designated variable free") {
    std::mt19937 rng(101);
    testsupport::GenOpts o;
    o.atoms = {"p", "q"};
    o.max_depth = 3;
    o.use_coderiv = false;
    o.use_tangle = false;
    for (int i = 0; i < 120; ++i) {
        FOLPtr t = standard_translate(testsupport::gen_formula(rng, o), "v");
        for (const auto& name : fol_free_points(t)) CHECK(name == "v");
        CHECK(fol_free_sets(t).empty());
    }
}

TEST_CASE("finite evaluation basics") {
    FiniteSpace sp = build_space_from_family({"a", "b"}, {{"a"}, {"b"}});
    FiniteModel m(sp, {{"p", {"a"}}});
    Lift lift = lift_to_lstructure(m, 0);
    CHECK(lift.clopen_base);
    CHECK(lift.structure.size_sets() == 4);  // discrete: all subsets

    FOLPtr boxp = standard_translate(parse("[]p"));
    Assignment at_a;
    at_a.points["x"] = sp.index_of("a");
    CHECK(eval_fol_finite(lift.structure, boxp, at_a));
    Assignment at_b;
    at_b.points["x"] = sp.index_of("b");
    CHECK(!eval_fol_finite(lift.structure, boxp, at_b));

    CHECK(eval_fol_finite(lift.structure, parse_fol("As:b (b = b)"), {}));
    CHECK(eval_fol_finite(lift.structure, parse_fol("Es:b Ap:x (x in b)"), {}));

    FiniteSpace one = build_space_from_family({"a"}, {});
    Lift single = lift_to_lstructure(FiniteModel(one, {}), 0);
    Assignment at0;
    at0.points["x"] = 0;
    CHECK(!eval_fol_finite(single.structure, standard_translate(parse("<c 1>true")), at0));

    CHECK_THROWS_AS(eval_fol_finite(lift.structure, boxp, {}), std::invalid_argument);
}

TEST_CASE("modal and first-order evaluation agree over clopen-base lifts") {
    std::mt19937 rng(103);
    testsupport::GenOpts o;
    o.atoms = {"p", "q"};
    o.max_depth = 3;
    o.use_coderiv = false;
    o.use_univ = false;
    o.use_diff = false;
    o.use_tangle = false;
    int checked = 0;
    for (int round = 0; round < 30; ++round) {
        FiniteModel m = random_partition_model(rng, 6);
        const int k = static_cast<int>(rng() % m.space.size());
        Lift lift = lift_to_lstructure(m, k);
        REQUIRE(lift.clopen_base);
        for (int j = 0; j < 5; ++j) {
            FormulaPtr f = testsupport::gen_formula(rng, o);
            FOLPtr t = standard_translate(f);
            PointSet truth = eval_finite_topo(m, f);
            for (int a = 0; a < m.space.size(); ++a) {
                Assignment asg;
                asg.points["x"] = a;
                CHECK(eval_fol_finite(lift.structure, t, asg) == (((truth >> a) & 1u) != 0));
                ++checked;
            }
            // the sentence with the constant plugged in tracks the
            // designated point
            CHECK(eval_fol_finite(lift.structure, fol_subst_const_k(t, "x"), {}) ==
                  (((truth >> k) & 1u) != 0));
        }
    }
    CHECK(checked >= 300);
}

TEST_CASE("non-clopen-base lift is flagged and the box equivalence breaks") {
    // two-point space with one open point: clopens are only {} and X
    FiniteSpace sp = build_space_from_family({"a", "b"}, {{"b"}});
    FiniteModel m(sp, {{"p", {"a"}}});
    Lift lift = lift_to_lstructure(m, 0);
    CHECK(!lift.clopen_base);
    REQUIRE(!lift.notes.empty());
    CHECK(lift.notes[0].find("not a base") != std::string::npos);
    CHECK(lift.structure.size_sets() == 4);  // field generated by the opens

    const int a = sp.index_of("a");
    CHECK(((eval_finite_topo(m, parse("[]p")) >> a) & 1u) == 0);  // int {a} is empty
    Assignment asg;
    asg.points["x"] = a;
    // the field contains {a} itself, a non-open witness
    CHECK(eval_fol_finite(lift.structure, standard_translate(parse("[]p")), asg));

    CHECK_THROWS_AS(lift_to_lstructure(m, 5), std::out_of_range);
}

TEST_CASE("structure validation rejects broken algebra tables") {
    FiniteSpace sp = build_space_from_family({"a", "b"}, {{"a"}, {"b"}});
    Lift lift = lift_to_lstructure(FiniteModel(sp, {}), 0);
    LStructure s = lift.structure;
    CHECK_NOTHROW(validate_lstructure(s));

    LStructure bad = s;
    bad.plus_table[1][2] = 0;
    CHECK_THROWS_WITH_AS(validate_lstructure(bad),
                         doctest::Contains("boolean law"), std::invalid_argument);

    bad = s;
    bad.zero = bad.one;
    CHECK_THROWS_AS(validate_lstructure(bad), std::invalid_argument);

    bad = s;
    bad.k = 7;
    CHECK_THROWS_AS(validate_lstructure(bad), std::invalid_argument);
}

TEST_CASE("fol text syntax round-trips") {
    for (const char* text : {
             "As:b As:c (Ap:x (x in b <-> x in c) -> b = c)",
             "Ap:x Ap:y (As:b (x in b <-> y in b) -> x = y)",
             "As:a (a + 0 = a)",
             "As:a (-(-a) = a)",
             "As:b (~b = 0 -> Es:c (~c = 0 & ~c = b & c + b = b))",
             "Es:O0 (k in O0 & Ap:y1 (y1 in O0 -> P_p(y1)))",
             "true",
             "~true | true",
         }) {
        FOLPtr f = parse_fol(text);
        CHECK(fol_str(f) == text);
    }

    // free point variables must be declared
    CHECK_NOTHROW(parse_fol("P_p(x)", {"x"}));
    CHECK_THROWS_AS(parse_fol("P_p(x)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_fol("Ap:x (x in b)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_fol("As:b (b = k)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_fol("Ap:x (x + x = 0)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_fol("Ap:x (Q_p(x))", {"x"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_fol("2 = 2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_fol("Ap:x (x in"), std::invalid_argument);
}

TEST_CASE("emitted theory structure") {
    std::string base = emit_tgood({});
    std::vector<FOLPtr> base_sentences = parse_theory(base);
    CHECK(base_sentences.size() == 13);  // algebra laws + three bridge clauses
    CHECK(base.find("As:b As:c (Ap:x (x in b <-> x in c) -> b = c)") != std::string::npos);
    CHECK(base.find("Ap:x Ap:y (As:b (x in b <-> y in b) -> x = y)") != std::string::npos);
    CHECK(base.find("refinement") == std::string::npos);

    std::string one = emit_tgood({{parse("p")}});
    CHECK(parse_theory(one).size() == 14);
    CHECK(one.find("Es:c0") != std::string::npos);
    CHECK(one.find("Es:c1") == std::string::npos);

    std::string two = emit_tgood({{parse("p"), parse("[]q")}}, {parse("[]p")});
    std::vector<FOLPtr> sentences = parse_theory(two);
    CHECK(sentences.size() == 15);
    CHECK(two.find("Es:c1") != std::string::npos);
    CHECK(two.find("k in") != std::string::npos);  // designated-point fact

    // printing a parsed sentence is a fixpoint
    for (const FOLPtr& f : sentences) {
        std::string printed = fol_str(f);
        CHECK(fol_str(parse_fol(printed)) == printed);
    }

    CHECK_THROWS_AS(emit_tgood({{}}), std::invalid_argument);
}

TEST_CASE("emitted clauses evaluate as the finite checker reports") {
    std::mt19937 rng(107);
    std::vector<FOLPtr> clauses;
    {
        std::vector<FOLPtr> all = parse_theory(emit_tgood({}));
        // the last three sentences are the bridge clauses
        clauses.assign(all.end() - 3, all.end());
    }
    for (int round = 0; round < 10; ++round) {
        FiniteModel m = random_partition_model(rng, 5);
        Lift lift = lift_to_lstructure(m, 0);
        GoodnessReport rep = check_goodness(lift.structure, {});
        CHECK(eval_fol_finite(lift.structure, clauses[0], {}) == rep.representation.holds);
        CHECK(eval_fol_finite(lift.structure, clauses[1], {}) == rep.extensionality.holds);
        CHECK(eval_fol_finite(lift.structure, clauses[2], {}) == rep.separation.holds);
        CHECK(rep.representation.holds);
        CHECK(rep.extensionality.holds);
        // points sharing a partition block are indistinguishable, so
        // separation holds exactly when all blocks are singletons
        bool discrete = true;
        for (int i = 0; i < m.space.size(); ++i)
            discrete = discrete && m.space.min_nbhd(i) == (PointSet{1} << i);
        CHECK(rep.separation.holds == discrete);
        CHECK(!rep.atomless.holds);  // finite algebras have atoms
        CHECK(!rep.good());
    }
}

TEST_CASE("goodness of finite lifts") {
    std::mt19937 rng(109);
    for (int round = 0; round < 8; ++round) {
        FiniteModel m = random_partition_model(rng, 5);
        Lift lift = lift_to_lstructure(m, 0);
        GoodnessReport rep = check_goodness(
            lift.structure, {{parse("p")}, {parse("p"), parse("~p")}, {parse("true")}});
        CHECK(rep.atomless.note.find("atom found") != std::string::npos);
        REQUIRE(rep.refinement.size() == 3);
        for (const auto& cc : rep.refinement) {
            CHECK(cc.holds);
            CHECK(cc.note == "all covered elements refine");
        }
    }

    // duplicate membership masks break extensionality
    FiniteSpace sp = build_space_from_family({"a"}, {});
    LStructure s = lift_to_lstructure(FiniteModel(sp, {}), 0).structure;
    s.membership[0] = s.membership[1];  // both now the full mask
    GoodnessReport rep = check_goodness(s, {});
    CHECK(!rep.extensionality.holds);
    CHECK(!rep.representation.holds);
}

TEST_CASE("goodness of the cantor cylinder algebra") {
    std::mt19937 rng(113);
    SymbolicModel m(SpaceId::Cantor,
                    {{"p", cyl("0")},
                     {"q", region_combine(cyl("01"), cyl("10"), SetOp::Union)}});
    GoodnessReport rep = check_goodness(
        m, {{parse("p")}, {parse("p"), parse("q")}, {parse("p"), parse("~p")}}, 30, rng);
    CHECK(rep.atomless.holds);
    CHECK(rep.representation.holds);
    CHECK(rep.extensionality.holds);
    CHECK(rep.separation.holds);
    REQUIRE(rep.refinement.size() == 3);
    for (const auto& cc : rep.refinement) {
        CHECK(cc.holds);
        CHECK(cc.checked > 0);
    }
    CHECK(rep.good());

    // a punctured valuation makes the box truth set non-clopen; the
    // constructive refinement declines instead of guessing
    Region punctured =
        Region::assemble(SpaceId::Cantor, {{0}}, {}, {}, {cpt({}, {0})});
    SymbolicModel holed(SpaceId::Cantor, {{"p", punctured}});
    GoodnessReport skip = check_goodness(holed, {{parse("p")}}, 10, rng);
    REQUIRE(skip.refinement.size() == 1);
    CHECK(!skip.refinement[0].holds);
    CHECK(skip.refinement[0].note.find("skipped") != std::string::npos);

    SymbolicModel baire(SpaceId::Baire, {});
    CHECK_THROWS_AS(check_goodness(baire, {}, 5, rng), std::invalid_argument);
}

TEST_CASE("forcing at eventually periodic points") {
    SymbolicModel m(SpaceId::Cantor, {{"p", cyl("0")}});
    CHECK(forces_box(m, cpt({}, {0}), parse("[]p")));
    CHECK(forces_box(m, cpt({0}, {1}), parse("[]p")));
    CHECK(!forces_box(m, cpt({}, {1}), parse("[]p")));
    CHECK(forces_box(m, cpt({}, {1}), parse("[]true")));

    // a removed point loses the box even though every neighbourhood
    // still meets the valuation
    Region punctured = Region::assemble(SpaceId::Cantor, {{0}}, {}, {}, {cpt({}, {0})});
    SymbolicModel holed(SpaceId::Cantor, {{"p", punctured}});
    CHECK(!forces_box(holed, cpt({}, {0}), parse("p")));
    CHECK(forces_box(holed, cpt({0, 1}, {0}), parse("p")));

    SymbolicModel baire(SpaceId::Baire, {});
    CHECK_THROWS_AS(forces_box(baire, make_point(SpaceId::Baire, {}, {0}), parse("p")),
                    std::invalid_argument);
    CHECK_THROWS_AS(forces_box(m, cpt({}, {0}), parse("[d]p")), std::invalid_argument);
}

TEST_CASE("forcing equals interior membership") {
    std::mt19937 rng(127);
    testsupport::GenOpts o;
    o.atoms = {"p", "q"};
    o.max_depth = 2;
    o.use_coderiv = false;
    o.use_univ = false;
    o.use_diff = false;
    o.use_tangle = false;
    int agreements = 0;
    for (int round = 0; round < 60; ++round) {
        SymbolicModel m(SpaceId::Cantor,
                        {{"p", testsupport::gen_region(rng, SpaceId::Cantor)},
                         {"q", testsupport::gen_region(rng, SpaceId::Cantor)}});
        for (int j = 0; j < 4; ++j) {
            FormulaPtr f = testsupport::gen_formula(rng, o);
            BasePoint mu = testsupport::gen_point(rng, SpaceId::Cantor);
            Region truth = eval_symbolic(m, f);
            CHECK(forces_box(m, mu, f) ==
                  region_topo_operator(truth, TopoOp::Int).contains(mu));
            // the dual diamond reading is closure membership
            CHECK(!forces_box(m, mu, make_neg(f)) ==
                  region_topo_operator(truth, TopoOp::Cl).contains(mu));
            ++agreements;
        }
    }
    CHECK(agreements == 240);
}

TEST_SUITE_END();
