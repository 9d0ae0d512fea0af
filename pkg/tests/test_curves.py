import random
from fractions import Fraction

import pytest

from curvepull.curves import (
    Curve,
    EntersCycle,
    EventuallyTrivial,
    PullbackError,
    PullbackSystem,
    Unresolved,
    _reduced_words,
)
from curvepull.endo import section_conjugator
from curvepull.mapdef import parse_mapdef
from curvepull.words import Word


def random_reduced(rng, max_len):
    codes = []
    for _ in range(rng.randint(0, max_len)):
        codes.append(rng.choice([c for c in (1, -1, 2, -2) if not codes or c != -codes[-1]]))
    return Word(codes)


def test_canonicalize_strips_axis_powers(rabbit_system, rabbit):
    w = rabbit.word
    assert rabbit_system.canonicalize(0, w("x^3 y")) == Curve(0, w("y"))
    assert rabbit_system.canonicalize(2, w("1")) == Curve(2, Word.identity())
    assert rabbit_system.canonicalize(1, w("y^-1 x")) == Curve(1, w("x"))


def test_canonicalize_two_letter_axis_ties(rabbit_system, rabbit):
    # z * y^-1 reduces to x, so the conjugators y^-1 and x give the same
    # curve; the canonical pick is deterministic
    w = rabbit.word
    a = rabbit_system.canonicalize(2, w("y^-1"))
    b = rabbit_system.canonicalize(2, w("x"))
    assert a == b == Curve(2, w("x"))
    # and the two twists really are the same group element
    assert rabbit_system.twist_word(Curve(2, w("y^-1"))) == rabbit_system.twist_word(
        Curve(2, w("x"))
    )


def test_canonicalize_idempotent(rabbit_system):
    rng = random.Random(20)
    for _ in range(2_000):
        axis = rng.randrange(3)
        c = rabbit_system.canonicalize(axis, random_reduced(rng, 10))
        again = rabbit_system.canonicalize(c.axis, c.conjugator)
        assert again == c


def brute_canonical(system, axis, conjugator):
    """Reference canonical form: scan every axis power in a window wide
    enough to contain all minimal-length coset elements."""
    from curvepull.curves import _lex_key

    u = system.axis_words[axis]
    span = 2 * len(conjugator) // len(u) + 2
    candidates = [u ** k * conjugator for k in range(-span, span + 1)]
    return Curve(axis, min(candidates, key=lambda w: _lex_key(w.codes)))


def test_canonicalize_matches_brute_force(rabbit_system, dendrite_system):
    rng = random.Random(23)
    for system in (rabbit_system, dendrite_system):
        for _ in range(3_000):
            axis = rng.randrange(3)
            conj = random_reduced(rng, 12)
            assert system.canonicalize(axis, conj) == brute_canonical(system, axis, conj)


def test_canonicalize_preserves_twist(rabbit_system):
    rng = random.Random(21)
    for _ in range(2_000):
        axis = rng.randrange(3)
        conj = random_reduced(rng, 10)
        c = rabbit_system.canonicalize(axis, conj)
        assert rabbit_system.twist_word(c) == rabbit_system.twist_word(Curve(axis, conj))


def test_twist_word(rabbit_system, rabbit, dendrite_system, dendrite):
    w = rabbit.word
    assert rabbit_system.twist_word(Curve(0, w("y")), 1) == w("y^-1 x y")
    assert rabbit_system.twist_word(Curve(2, Word.identity()), 2) == w("y^-1 x^-1 y^-1 x^-1")
    with pytest.raises(ValueError):
        rabbit_system.twist_word(Curve(0, Word.identity()), 0)
    w2 = section_conjugator(2)
    b_curve = Curve(1, w2)
    assert dendrite_system.twist_word(b_curve, 1) == ~w2 * dendrite.word("b") * w2


def test_act_examples(rabbit_system, rabbit):
    w = rabbit.word
    x_curve = Curve(0, Word.identity())
    assert rabbit_system.act(w("y"), x_curve) == Curve(0, w("y"))
    assert rabbit_system.act(w("x"), x_curve) == x_curve


def test_pullback_rabbit_axes(rabbit_system):
    steps = [rabbit_system.pullback(Curve(i, Word.identity())) for i in range(3)]
    assert [s.target.axis for s in steps] == [1, 2, 0]
    assert all(s.target.conjugator.is_identity() for s in steps)
    assert [(s.s, s.t) for s in steps] == [(1, 1), (2, 1), (2, 1)]
    assert [s.weight for s in steps] == [Fraction(1), Fraction(1, 2), Fraction(1, 2)]


def test_pullback_dendrite_axes(dendrite_system):
    a_step = dendrite_system.pullback(Curve(0, Word.identity()))
    assert a_step.trivial and a_step.weight == 0 and a_step.t == 0
    b_step = dendrite_system.pullback(Curve(1, Word.identity()))
    assert b_step.target == Curve(2, Word.identity()) and b_step.weight == 1
    c_step = dendrite_system.pullback(Curve(2, Word.identity()))
    assert c_step.target.axis == 0 and c_step.weight == Fraction(1, 2)


def test_pullback_weight_positive_on_enumeration(rabbit_system, dendrite_system):
    for system in (rabbit_system, dendrite_system):
        for curve in system.enumerate_curves(3):
            step = system.pullback(curve)
            if not step.trivial:
                assert step.t >= 1


def test_pullback_twist_linearity(rabbit_system, dendrite_system):
    # psi(twist^(s*k)) equals the target twist to the power t*k
    for system in (rabbit_system, dendrite_system):
        for curve in system.enumerate_curves(4):
            step = system.pullback(curve)
            if step.trivial:
                continue
            for k in (1, 2, 3):
                image = system.psi.apply(system.twist_word(curve, step.s * k))
                assert image == system.twist_word(step.target, step.t * k)


def test_pullback_trivial_powers(rabbit_system, dendrite_system):
    # trivial images stay trivial with the exponent scaled
    for system, axis in ((rabbit_system, 0), (dendrite_system, 0)):
        for curve in system.enumerate_curves(3):
            step = system.pullback(curve)
            if step.trivial:
                image = system.psi.apply(system.twist_word(curve, 2 * step.s))
                assert image.is_identity()


def test_equivariance(rabbit_system, dendrite_system):
    rng = random.Random(22)
    for system in (rabbit_system, dendrite_system):
        psi = system.psi
        checked = 0
        while checked < 500:
            g = random_reduced(rng, 12)
            if not psi.in_domain(g):
                continue
            checked += 1
            curve = system.canonicalize(rng.randrange(3), random_reduced(rng, 6))
            left = system.pullback(system.act(g, curve))
            right = system.pullback(curve)
            assert left.weight == right.weight and left.s == right.s
            if right.trivial:
                assert left.trivial
            else:
                assert left.target == system.act(psi.apply(g), right.target)


def test_orbit_rabbit_three_cycle(rabbit_system):
    result = rabbit_system.orbit(Curve(0, Word.identity()), 100)
    cls = result.classification
    assert isinstance(cls, EntersCycle)
    assert cls.preperiod == 0
    assert [c.axis for c in cls.cycle] == [0, 1, 2]
    assert cls.cycle_weights == (Fraction(1), Fraction(1, 2), Fraction(1, 2))
    assert result.cycle_weight_product == Fraction(1, 4)


def test_orbit_dendrite_chain(dendrite_system):
    result = dendrite_system.orbit(Curve(1, Word.identity()), 100)
    assert isinstance(result.classification, EventuallyTrivial)
    assert result.classification.steps == 3
    axes = [s.target.axis for s in result.steps[:-1]]
    assert axes == [2, 0]


def test_orbit_of_section_conjugates(dendrite_system):
    for n in (1, 2, 5):
        start = Curve(1, section_conjugator(n))
        result = dendrite_system.orbit(start, 100)
        assert isinstance(result.classification, EventuallyTrivial)
        head = result.steps[:n]
        assert all(s.weight == 1 and s.target.axis == 1 for s in head)
        assert head[-1].target == Curve(1, Word.identity())
        assert result.classification.steps == n + 3


def test_orbit_unresolved(rabbit_system):
    result = rabbit_system.orbit(Curve(0, Word.identity()), 1)
    # one step cannot see the cycle close
    assert isinstance(result.classification, Unresolved)
    with pytest.raises(ValueError):
        rabbit_system.orbit(Curve(0, Word.identity()), 0)


def test_enumerate_axis_count(rabbit_system):
    assert len(rabbit_system.enumerate_curves(0)) == 3


def coset_equal(system, c1, c2):
    """Independent curve-equality oracle: conjugators lie in the same
    <axis> coset iff their quotient is a literal axis power."""
    if c1.axis != c2.axis:
        return False
    u = system.axis_words[c1.axis]
    q = c1.conjugator * ~c2.conjugator
    k = 0
    while len(u ** k) <= len(q) + len(u):
        if q == u ** k or q == u ** (-k):
            return True
        k += 1
    return False


def test_enumerate_matches_brute_force(rabbit_system):
    words = list(_reduced_words(2))
    raw = [Curve(axis, w) for axis in range(3) for w in words]
    classes = []
    for c in raw:
        for cls in classes:
            if coset_equal(rabbit_system, cls[0], c):
                cls.append(c)
                break
        else:
            classes.append([c])
    enumerated = rabbit_system.enumerate_curves(2)
    assert len(enumerated) == len(classes)
    # every enumerated curve is canonical and all classes are hit
    for c in enumerated:
        assert rabbit_system.canonicalize(c.axis, c.conjugator) == c
    for cls in classes:
        assert rabbit_system.canonicalize(cls[0].axis, cls[0].conjugator) in enumerated


def test_enumerate_l1_count(rabbit_system):
    # 15 raw pairs collapse to 10 canonical curves
    assert len(rabbit_system.enumerate_curves(1)) == 10


def test_non_twist_image_raises():
    # a malformed user map whose b-image is not conjugate into any axis
    text = """\
map broken
gen a parity 1
gen b parity 0
axis c = b^-1 a^-1
schreier a a -> 1
schreier b -> a a b
schreier a^-1 b a -> b
"""
    system = PullbackSystem(parse_mapdef(text))
    with pytest.raises(PullbackError, match="not conjugate"):
        system.pullback(Curve(1, Word.identity()))


def test_parse_and_format_curve(rabbit_system):
    c = rabbit_system.parse_curve("z^(x y^-1)")
    assert c.axis == 2
    assert rabbit_system.parse_curve(rabbit_system.format_curve(c)) == c
    assert rabbit_system.format_curve(Curve(0, Word.identity())) == "x"
    assert rabbit_system.parse_curve("  y ^ ( x )  ") == Curve(1, rabbit_system.mapdef.word("x"))
    with pytest.raises(ValueError, match="unknown axis"):
        rabbit_system.parse_curve("q")
    with pytest.raises(ValueError, match="bad curve expression"):
        rabbit_system.parse_curve("z^(x")


def test_curve_grammar_spec_example(dendrite_system):
    c = dendrite_system.parse_curve("b^(a b^-1 a^-1 b^-1 a)")
    assert c == dendrite_system.canonicalize(1, section_conjugator(2))
