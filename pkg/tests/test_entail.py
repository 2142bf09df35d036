import random

import pytest

from olsub import (
    Engine,
    Sequent,
    TermUniverse,
    build_clauses,
    check,
    oracle,
    parse_term,
    propagate,
    reconstruct_proof,
    verify_proof,
)
from olsub.cli import sn_tn_terms
from olsub.entail import (
    AXIOM_CUT,
    HYP,
    LEFT_AND,
    ProofTree,
    find_invalid_node,
)
from olsub.errors import NotProvable

from helpers import random_term


def test_hyp_clause_present(u):
    x = u.var("x")
    cs = build_clauses(u, (x, x))
    assert any(c.rule == HYP and not c.body for c in cs.clauses if c.head == Sequent.goal(x, x))


def test_left_and_clauses(u):
    x, y = u.var("x"), u.var("y")
    m = u.meet([x, y])
    cs = build_clauses(u, (m, x))
    head = Sequent.goal(m, x)
    bodies = {
        c.body for c in cs.clauses if c.head == head and c.rule == LEFT_AND
    }
    assert (Sequent.goal(x, x),) in bodies
    assert (Sequent.goal(y, x),) in bodies


def test_axiom_cut_clause_shape(u):
    a, b, c = u.var("A"), u.var("B"), u.var("C")
    axioms = [(a, b), (b, c)]
    cs = build_clauses(u, (a, c), axioms)
    head = Sequent.goal(a, c)
    cut_bodies = [
        cl.body for cl in cs.clauses if cl.head == head and cl.rule == AXIOM_CUT
    ]
    # canonical instance for axiom (B, C): {A^L,C^R} <- {A^L,B^R}, {C^L,C^R}
    assert (Sequent.goal(a, b), Sequent.goal(c, c)) in cut_bodies


def test_propagate_examples(u):
    x, y = u.var("x"), u.var("y")
    assert propagate(build_clauses(u, (x, x))).provable
    assert not propagate(build_clauses(u, (x, y))).provable
    a, b, c = u.var("A"), u.var("B"), u.var("C")
    assert propagate(build_clauses(u, (a, c), [(a, b), (b, c)])).provable


def test_check_lattice_and_bound_laws(u):
    x, y = u.var("x"), u.var("y")
    assert check(u, u.meet([x, y]), x).provable
    assert check(u, x, u.join([x, y])).provable
    assert check(u, u.bot(), x).provable
    assert check(u, x, u.top()).provable
    assert not check(u, x, y).provable


def test_check_arrow_monotonicity(u):
    u.declare("Arrow", "-+")
    big = parse_term("Arrow(x1 | y1, x2 & y2)", u)
    small = parse_term("Arrow(x1, x2) & Arrow(y1, y2)", u)
    assert check(u, big, small).provable
    assert not check(u, small, big).provable  # no constructor conjunctivity


def test_check_de_morgan_both_ways(u):
    lhs = parse_term("~(x | y)", u)
    rhs = parse_term("~x & ~y", u)
    assert check(u, lhs, rhs).provable
    assert check(u, rhs, lhs).provable


def test_complement_laws_need_replace(u):
    x = u.var("x")
    assert check(u, u.top(), parse_term("x | ~x", u)).provable
    assert check(u, parse_term("x & ~x", u), u.bot()).provable


def test_bound_transitivity_via_axioms(u):
    a, b, c = u.var("A"), u.var("B"), u.var("C")
    axioms = [(a, b), (b, c)]
    assert check(u, a, c, axioms).provable
    assert not check(u, c, a, axioms).provable


def test_bl_mode_restriction(u):
    x, y = u.var("x"), u.var("y")
    assert check(u, u.meet([x, y]), x, mode="bl").provable
    # negated atoms are opaque in bl mode
    assert not check(u, u.top(), u.join([x, u.negvar("x")]), mode="bl").provable
    assert check(u, u.top(), u.join([x, u.negvar("x")]), mode="ol").provable


def test_check_equals_public_propagate_pipeline(u):
    rng = random.Random(21)
    f = u.declare("F", "+")
    g = u.declare("G", "-+")
    for _ in range(60):
        s = random_term(u, rng, 9, ["x", "y", "z"], [f, g])
        t = random_term(u, rng, 9, ["x", "y", "z"], [f, g])
        axioms = [
            (random_term(u, rng, 4, ["x", "y", "z"]), random_term(u, rng, 4, ["x", "y", "z"]))
            for _ in range(rng.randint(0, 2))
        ]
        fast = check(u, s, t, axioms)
        slow = propagate(build_clauses(u, (s, t), axioms))
        assert fast.provable == slow.provable
        assert fast.stats.clauses == slow.stats.clauses


def test_reflexivity_and_transitivity(u):
    rng = random.Random(31)
    f = u.declare("F", "+")
    pool = [random_term(u, rng, 7, ["x", "y"], [f]) for _ in range(40)]
    engine = Engine(u)
    for t in pool:
        assert engine.query(t, t)
    for _ in range(300):
        a, b, c = rng.choice(pool), rng.choice(pool), rng.choice(pool)
        if engine.query(a, b) and engine.query(b, c):
            assert engine.query(a, c)


def test_monotonicity_property(u):
    rng = random.Random(41)
    f = u.declare("F", "+")
    g = u.declare("G", "-+")
    h = u.declare("H", "o")
    pool = [random_term(u, rng, 6, ["x", "y"]) for _ in range(30)]
    engine = Engine(u)
    seen_strict = False
    for _ in range(400):
        s, t = rng.choice(pool), rng.choice(pool)
        if not engine.query(s, t):
            continue
        w = rng.choice(pool)
        assert engine.query(u.app(f, [s]), u.app(f, [t]))
        assert engine.query(u.app(g, [t, s]), u.app(g, [s, t]))
        if not engine.query(t, s):
            seen_strict = True
            # invariant argument requires equivalence in both directions
            assert not engine.query(u.app(h, [s]), u.app(h, [t]))
    assert seen_strict


def test_proof_single_hyp(u):
    x = u.var("x")
    cs = build_clauses(u, (x, x))
    proof = reconstruct_proof(cs)
    assert proof.rule == HYP and not proof.children
    assert verify_proof(u, proof)


def test_proof_commuted_meets(u):
    x, y = u.var("x"), u.var("y")
    cs = build_clauses(u, (u.meet([x, y]), u.meet([y, x])))
    proof = reconstruct_proof(cs)
    assert proof.rule == "RightAnd"
    assert {child.rule for child in proof.children} == {"LeftAnd"}
    assert all(grand.rule == HYP for child in proof.children for grand in child.children)
    assert verify_proof(u, proof)


def test_proof_with_axiom_cut(u):
    a, b, c = u.var("A"), u.var("B"), u.var("C")
    axioms = [(a, b), (b, c)]
    cs = build_clauses(u, (a, c), axioms)
    proof = reconstruct_proof(cs)

    rules = set()

    def collect(node):
        rules.add(node.rule)
        for child in node.children:
            collect(child)

    collect(proof)
    assert AXIOM_CUT in rules
    assert verify_proof(u, proof, axioms)


def test_reconstruct_unprovable_raises(u):
    x, y = u.var("x"), u.var("y")
    cs = build_clauses(u, (x, y))
    with pytest.raises(NotProvable):
        reconstruct_proof(cs)


def test_verify_rejects_wrong_variance_direction(u):
    arrow = u.declare("Arrow", "-+")
    e, b = u.var("e"), u.var("b")
    goal = Sequent.goal(u.app(arrow, [e, b]), u.app(arrow, [e, b]))
    valid = ProofTree(
        goal,
        "F",
        [
            ProofTree(Sequent.goal(e, e), HYP, []),  # contravariant slot
            ProofTree(Sequent.goal(b, b), HYP, []),  # covariant slot
        ],
        "Arrow",
    )
    assert verify_proof(u, valid)
    flipped = ProofTree(
        goal,
        "F",
        [
            ProofTree(Sequent.goal(b, b), HYP, []),  # covariant premise in contra slot
            ProofTree(Sequent.goal(e, e), HYP, []),
        ],
        "Arrow",
    )
    assert not verify_proof(u, flipped)
    assert find_invalid_node(u, flipped) == "root"


def test_verify_rejects_foreign_axiom(u):
    a, b = u.var("A"), u.var("B")
    node = ProofTree(
        Sequent.goal(a, b),
        AXIOM_CUT,
        [
            ProofTree(Sequent.goal(a, a), HYP, []),
            ProofTree(Sequent.goal(b, b), HYP, []),
        ],
        (a, b),
    )
    assert verify_proof(u, node, [(a, b)])
    assert not verify_proof(u, node, [])  # cites an axiom not in the set
    assert not verify_proof(u, node, [(b, a)])


def test_verify_rejects_unknown_rule(u):
    x = u.var("x")
    assert not verify_proof(u, ProofTree(Sequent.goal(x, x), "Magic", []))


def test_clause_count_bound(u):
    # documented bound: clauses <= 16 * n^2 * (1 + |axioms|), n = total problem size
    for n in (8, 16):
        universe = TermUniverse()
        s, t = sn_tn_terms(universe, n)
        verdict = check(universe, s, t)
        total = universe.size(s) + universe.size(t)
        assert verdict.provable
        assert verdict.stats.clauses <= 16 * total * total
        axioms = [(universe.var("X1"), universe.var("X2")), (universe.var("X2"), s)]
        with_axioms = check(universe, s, t, axioms)
        total_ax = total + sum(universe.size(a) + universe.size(b) for a, b in axioms)
        assert with_axioms.stats.clauses <= 16 * total_ax * total_ax * (1 + len(axioms))


def test_stats_shape(u):
    x = u.var("x")
    verdict = check(u, x, x)
    assert verdict.stats.sequents >= 1
    assert verdict.stats.clauses >= 1
    assert verdict.stats.steps >= 0


def test_concurrent_checks_share_a_universe(u):
    import concurrent.futures

    f = u.declare("F", "+")
    rng = random.Random(61)
    pool = [
        (random_term(u, rng, 8, ["x", "y"], [f]), random_term(u, rng, 8, ["x", "y"], [f]))
        for _ in range(80)
    ]
    expected = [check(u, s, t).provable for s, t in pool]
    with concurrent.futures.ThreadPoolExecutor(max_workers=4) as pool_exec:
        got = list(pool_exec.map(lambda st: check(u, st[0], st[1]).provable, pool))
    assert got == expected


def test_agreement_with_saturation_small(u):
    rng = random.Random(17)
    f = u.declare("F", "+")
    g = u.declare("G", "-+")
    for _ in range(150):
        s = random_term(u, rng, 8, ["x", "y"], [f, g])
        t = random_term(u, rng, 8, ["x", "y"], [f, g])
        axioms = (
            [(random_term(u, rng, 4, ["x", "y"]), random_term(u, rng, 4, ["x", "y"]))]
            if rng.random() < 0.5
            else []
        )
        assert check(u, s, t, axioms).provable == oracle.saturates(u, s, t, axioms)
