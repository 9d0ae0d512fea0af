"""Simple closed curves on the 4-punctured sphere as twist conjugates.

A curve is (axis, conjugator): the twist about it is axis^conjugator.
Conjugators that differ by a power of the axis word give the same twist,
so the stored conjugator is the minimal-length representative of its
coset under the cyclic group on the axis, with a fixed lexicographic
tie-break.  Equality of curves is then equality of fields.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

from .endo import VirtualEndo
from .mapdef import MapDefinition
from .words import Word, cyclic_reduce, parse_word, primitive_root


class PullbackError(ValueError):
    """The image of a twist is not a twist conjugate; valid map data never
    produces this, malformed user maps can."""


@dataclass(frozen=True)
class Curve:
    axis: int  # index into the map's three axes
    conjugator: Word


@dataclass(frozen=True)
class PullbackStep:
    """One application of the pullback relation.

    ``s`` is the minimal power in {1, 2} with twist^s liftable, ``t`` the
    exponent of the image twist (0 for a trivial image), and the weight
    is the exact transition coefficient t/s.
    """

    target: Curve | None
    s: int
    t: int
    weight: Fraction

    @property
    def trivial(self) -> bool:
        return self.target is None


@dataclass(frozen=True)
class EventuallyTrivial:
    steps: int
    kind = "trivial"


@dataclass(frozen=True)
class EntersCycle:
    preperiod: int
    cycle: tuple[Curve, ...]
    cycle_weights: tuple[Fraction, ...]
    kind = "cycle"

    @property
    def weight_product(self) -> Fraction:
        out = Fraction(1)
        for w in self.cycle_weights:
            out *= w
        return out


@dataclass(frozen=True)
class Unresolved:
    max_steps: int
    kind = "unresolved"


Classification = Union[EventuallyTrivial, EntersCycle, Unresolved]


@dataclass(frozen=True)
class OrbitResult:
    start: Curve
    steps: tuple[PullbackStep, ...]
    classification: Classification

    @property
    def cycle_weight_product(self) -> Fraction | None:
        if isinstance(self.classification, EntersCycle):
            return self.classification.weight_product
        return None


def _lex_key(codes: tuple[int, ...]) -> tuple:
    # Letter order x < x^-1 < y < y^-1; shorter words first.
    return (len(codes), tuple((abs(c), c < 0) for c in codes))


def _power_prefix(codes: tuple[int, ...], block: tuple[int, ...]) -> int:
    """Longest common prefix of a word with block repeated forever."""
    m = len(block)
    i = 0
    n = len(codes)
    while i < n and codes[i] == block[i % m]:
        i += 1
    return i


_CURVE_RE = re.compile(r"^\s*(\S+?)\s*(?:\^\s*\(\s*(.*?)\s*\)\s*)?$")


class PullbackSystem:
    """Curve dynamics for one map: a map definition plus its transducer."""

    def __init__(self, mapdef: MapDefinition, psi: VirtualEndo | None = None):
        self.mapdef = mapdef
        self.psi = psi if psi is not None else mapdef.endomorphism()
        self.axis_words = mapdef.axis_words
        # Rotations of each axis word and its inverse, with the rotating
        # prefix, for matching primitive roots to axes.
        self._rotations: dict[tuple[int, ...], tuple[int, Word]] = {}
        for i, aw in enumerate(self.axis_words):
            for w in (aw, ~aw):
                codes = w.codes
                for j in range(len(codes)):
                    rot = codes[j:] + codes[:j]
                    self._rotations.setdefault(rot, (i, Word(codes[:j], _reduced=True)))

    @classmethod
    def for_map(cls, mapdef: MapDefinition) -> "PullbackSystem":
        return cls(mapdef)

    # -- canonical form ------------------------------------------------------

    def canonicalize(self, axis: int, conjugator: Word) -> Curve:
        """Quotient out axis powers: the minimal-length element of
        <axis> * conjugator, ties broken lexicographically.

        The length of axis^k * conjugator is V-shaped in k: the boundary
        cancellation is exactly min(k*|axis|, prefix agreement with the
        axis power), so only the integers beside the valley can attain
        the minimum.
        """
        u = self.axis_words[axis]
        w = conjugator
        m = len(u)
        candidates = {0}
        d = _power_prefix(w.codes, (~u).codes)
        if d:
            candidates.update((d // m - 1, d // m, d // m + 1))
        d = _power_prefix(w.codes, u.codes)
        if d:
            candidates.update((-(d // m) - 1, -(d // m), -(d // m) + 1))
        best = None
        best_key = None
        for k in sorted(candidates):
            cand = u ** k * w
            key = _lex_key(cand.codes)
            if best_key is None or key < best_key:
                best, best_key = cand, key
        return Curve(axis, best)

    def twist_word(self, curve: Curve, n: int = 1) -> Word:
        if n == 0:
            raise ValueError("twist power must be nonzero")
        return (self.axis_words[curve.axis] ** n).conj(curve.conjugator)

    def act(self, g: Word, curve: Curve) -> Curve:
        """Image of the curve under a mapping class acting by conjugation
        of twists (a right action, like all conjugation here)."""
        return self.canonicalize(curve.axis, curve.conjugator * g)

    # -- pullback ------------------------------------------------------------

    def pullback(self, curve: Curve) -> PullbackStep:
        g = self.twist_word(curve, 1)
        s = 1 if self.psi.in_domain(g) else 2
        h = self.psi.apply(g if s == 1 else g * g)
        if h.is_identity():
            return PullbackStep(None, s, 0, Fraction(0))
        core, v = cyclic_reduce(h)
        root, exp = primitive_root(core)
        hit = self._rotations.get(root.codes)
        if hit is None:
            raise PullbackError(
                f"twist image {h.codes!r} is not conjugate into an axis"
            )
        axis, prefix = hit
        target = self.canonicalize(axis, prefix * v)
        return PullbackStep(target, s, exp, Fraction(exp, s))

    def orbit(self, curve: Curve, max_steps: int = 1000) -> OrbitResult:
        if max_steps < 1:
            raise ValueError("max_steps must be positive")
        start = self.canonicalize(curve.axis, curve.conjugator)
        visited: dict[Curve, int] = {start: 0}
        trail = [start]
        steps: list[PullbackStep] = []
        for _ in range(max_steps):
            step = self.pullback(trail[-1])
            steps.append(step)
            if step.target is None:
                return OrbitResult(start, tuple(steps), EventuallyTrivial(len(steps)))
            if step.target in visited:
                j = visited[step.target]
                cls = EntersCycle(
                    preperiod=j,
                    cycle=tuple(trail[j:]),
                    cycle_weights=tuple(st.weight for st in steps[j:]),
                )
                return OrbitResult(start, tuple(steps), cls)
            visited[step.target] = len(trail)
            trail.append(step.target)
        return OrbitResult(start, tuple(steps), Unresolved(max_steps))

    # -- enumeration ---------------------------------------------------------

    def enumerate_curves(self, max_conjugator_length: int) -> list[Curve]:
        """All canonical curves whose conjugator has reduced length at
        most the bound, in a deterministic order."""
        if max_conjugator_length < 0:
            raise ValueError("max_conjugator_length must be >= 0")
        out: list[Curve] = []
        for axis in range(3):
            seen: set[Curve] = set()
            for w in _reduced_words(max_conjugator_length):
                c = self.canonicalize(axis, w)
                if c not in seen:
                    seen.add(c)
                    out.append(c)
        out.sort(key=lambda c: (c.axis, _lex_key(c.conjugator.codes)))
        return out

    # -- parsing and formatting ----------------------------------------------

    def parse_curve(self, text: str) -> Curve:
        m = _CURVE_RE.match(text)
        if not m or "^" in m.group(1):
            raise ValueError(f"bad curve expression {text!r}; expected AXIS or AXIS^(WORD)")
        axis_name, word_text = m.group(1), m.group(2)
        names = self.mapdef.axis_names
        if axis_name not in names:
            raise ValueError(f"unknown axis {axis_name!r}; have {list(names)}")
        conj = Word.identity()
        if word_text:
            conj = parse_word(word_text, self.mapdef.names())
        return self.canonicalize(names.index(axis_name), conj)

    def format_curve(self, curve: Curve) -> str:
        name = self.mapdef.axis_names[curve.axis]
        if curve.conjugator.is_identity():
            return name
        return f"{name}^({self.mapdef.format(curve.conjugator)})"


def _reduced_words(max_length: int) -> Iterator[Word]:
    """All freely reduced words of length <= max_length, shortest first."""
    yield Word.identity()
    layer: list[tuple[int, ...]] = [()]
    for _ in range(max_length):
        nxt: list[tuple[int, ...]] = []
        for codes in layer:
            for c in (1, -1, 2, -2):
                if codes and codes[-1] == -c:
                    continue
                grown = codes + (c,)
                nxt.append(grown)
                yield Word(grown, _reduced=True)
        layer = nxt
