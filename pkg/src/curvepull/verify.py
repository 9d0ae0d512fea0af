"""Verification suites: frozen expected values checked against the engine.

Each suite replays frozen reference identities of the two built-in maps
against the transducer, item by item.  The expected values here are data, not
derived from the code under test, so a corrupted transducer or map file
cannot silently pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import endo
from .curves import PullbackSystem
from .mapdef import MapDefinition
from .words import Word, geodesic_length

# Expected second-iterate values over the rabbit nucleus
# {1, x, x^-1, y, y^-1, z^-1, z}: row element times column element.
NUCLEUS_ORDER = ("1", "x", "x^-1", "y", "y^-1", "z^-1", "z")
NUCLEUS_PAIR_TABLE = {
    "1": ("1", "1", "z^-1", "1", "1", "1", "y"),
    "x": ("1", "z", "1", "1", "1", "1", "y"),
    "x^-1": ("z^-1", "1", "z^-1", "1", "1", "1", "y"),
    "y": ("1", "1", "z^-1", "x", "1", "x", "z^-1"),
    "y^-1": ("1", "x^-1", "y", "1", "1", "1", "y"),
    "z^-1": ("1", "1", "z^-1", "y^-1", "1", "y^-1", "1"),
    "z": ("y", "1", "z^-1", "1", "1", "1", "y"),
}

# Recursion factors of the extension map: psi_hat(prefix * w) equals
# factor * psi_hat(w), keyed by (prefix token, parity of w).
RECURSION_FACTORS = {
    "rabbit": (
        ("x", 0, "y"),
        ("x", 1, "1"),
        ("x^-1", 0, "y^-1"),
        ("x^-1", 1, "1"),
        ("y", 0, "1"),
        ("y", 1, "y^-1 x^-1"),
        ("y^-1", 0, "x y"),
        ("y^-1", 1, "1"),
    ),
    "dendrite": (
        ("a", 0, "1"),
        ("a", 1, "1"),
        ("a^-1", 0, "1"),
        ("a^-1", 1, "1"),
        ("b", 0, "c"),
        ("b", 1, "b"),
        ("b^-1", 0, "c^-1"),
        ("b^-1", 1, "b^-1"),
        ("c", 0, "b^-1"),
        ("c", 1, "c^-1"),
        ("c^-1", 0, "c"),
        ("c^-1", 1, "b"),
    ),
}

SUITE_NAMES = ("table7", "recursions", "prop84", "lemma83")
SUITE_MAPS = {
    "table7": ("rabbit",),
    "recursions": ("rabbit", "dendrite"),
    "prop84": ("dendrite",),
    "lemma83": ("dendrite",),
}


class SuiteError(ValueError):
    """Suite requested for a map it does not apply to."""


@dataclass(frozen=True)
class CheckItem:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    items: list[CheckItem] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for it in self.items if it.ok)

    @property
    def total(self) -> int:
        return len(self.items)

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _require(suite: str, mapdef: MapDefinition) -> None:
    allowed = SUITE_MAPS[suite]
    if mapdef.name not in allowed:
        raise SuiteError(f"suite {suite!r} requires map {' or '.join(allowed)}")


def verify_nucleus_table(mapdef: MapDefinition, psi: endo.VirtualEndo) -> SuiteResult:
    """Recompute the 7x7 double-step table over the nucleus and diff it
    against the frozen expected entries."""
    _require("table7", mapdef)
    elems = {tok: mapdef.word(tok) for tok in NUCLEUS_ORDER}
    computed = endo.pair_table(psi, tuple(elems.values()))
    result = SuiteResult("table7")
    for row_tok in NUCLEUS_ORDER:
        for col_tok, want_tok in zip(NUCLEUS_ORDER, NUCLEUS_PAIR_TABLE[row_tok]):
            got = computed[(elems[row_tok], elems[col_tok])]
            want = elems[want_tok] if want_tok != "1" else Word.identity()
            result.items.append(
                CheckItem(
                    label=f"{row_tok} * {col_tok}",
                    ok=got == want,
                    detail=f"got {mapdef.format(got)}, want {want_tok}",
                )
            )
    return result


def _random_word(rng: random.Random, max_len: int) -> Word:
    length = rng.randint(0, max_len)
    codes: list[int] = []
    for _ in range(length):
        choices = [c for c in (1, -1, 2, -2) if not codes or c != -codes[-1]]
        codes.append(rng.choice(choices))
    return Word(codes, _reduced=True)


def _random_word_with_parity(
    rng: random.Random, parity: endo.ParityHom, want: int, max_len: int
) -> Word:
    while True:
        w = _random_word(rng, max_len)
        if parity.theta(w) == want:
            return w


def verify_recursions(
    mapdef: MapDefinition,
    psi: endo.VirtualEndo,
    samples: int = 200,
    seed: int = 7,
) -> SuiteResult:
    """Check every recursion case psi_hat(prefix*w) = factor * psi_hat(w)
    on random words w of the required coset."""
    _require("recursions", mapdef)
    rng = random.Random(seed)
    cases = RECURSION_FACTORS[mapdef.name]
    result = SuiteResult("recursions")
    for prefix_tok, parity_class, factor_tok in cases:
        prefix = mapdef.word(prefix_tok)
        factor = mapdef.word(factor_tok)
        bad = 0
        for _ in range(samples):
            w = _random_word_with_parity(rng, psi.parity, parity_class, 24)
            if psi.apply_hat(prefix * w) != factor * psi.apply_hat(w):
                bad += 1
        side = "w in H" if parity_class == 0 else "w not in H"
        result.items.append(
            CheckItem(
                label=f"hat({prefix_tok} w) = {factor_tok} hat(w), {side}",
                ok=bad == 0,
                detail=f"{samples - bad}/{samples} random words",
            )
        )
    return result


def verify_section(
    mapdef: MapDefinition,
    psi: endo.VirtualEndo,
    n_max: int = 12,
    samples: int = 200,
    seed: int = 11,
) -> SuiteResult:
    """The section is a right inverse of psi, and conjugating the b-twist
    by w_n makes it survive exactly n pullbacks."""
    _require("prop84", mapdef)
    rng = random.Random(seed)
    result = SuiteResult("prop84")

    bad = 0
    for _ in range(samples):
        w = _random_word(rng, 24)
        if psi.apply(endo.section(w)) != w:
            bad += 1
    result.items.append(
        CheckItem(
            label="psi(section(w)) = w",
            ok=bad == 0,
            detail=f"{samples - bad}/{samples} random words",
        )
    )

    b = mapdef.word("b")
    for n in range(1, n_max + 1):
        wn = endo.section_conjugator(n)
        g = b.conj(wn)
        for _ in range(n):
            g = psi.apply(g)
        result.items.append(
            CheckItem(label=f"psi^{n}(b^(w_{n})) = b", ok=g == b)
        )
    return result


def _min_coset_length(v: Word, axis: Word, blocks: list[Word]) -> int:
    """Shortest length over the coset <axis> * v; representatives of b^v
    differ exactly by leading axis powers."""
    span = 2 * (len(v) + len(axis)) // len(axis) + 2
    cur = axis ** (-span) * v
    best = geodesic_length(cur, blocks)
    for _ in range(2 * span):
        cur = axis * cur
        best = min(best, geodesic_length(cur, blocks))
    return best


def verify_length_decrease(
    mapdef: MapDefinition,
    psi: endo.VirtualEndo,
    samples: int = 2000,
    seed: int = 13,
) -> SuiteResult:
    """Length behavior of the extension map in the 6-letter generating set
    (the two generators plus the derived axis): never increasing, and the
    b-twist conjugator admits a strictly shorter representative after a
    double step off H."""
    _require("lemma83", mapdef)
    rng = random.Random(seed)
    blocks = [mapdef.third_axis]
    b = mapdef.word("b")

    nonincrease_bad = 0
    decrease_bad = 0
    identity_bad = 0
    eligible = 0
    for _ in range(samples):
        w = _random_word(rng, 24)
        hat = psi.apply_hat(w)
        if geodesic_length(hat, blocks) > geodesic_length(w, blocks):
            nonincrease_bad += 1
        if psi.parity.theta(w) == 1 and psi.parity.theta(hat) == 1:
            eligible += 1
            v = psi.apply_hat(hat)
            if psi.apply(psi.apply(b.conj(w))) != b.conj(v):
                identity_bad += 1
            if _min_coset_length(v, b, blocks) >= geodesic_length(w, blocks):
                decrease_bad += 1
    result = SuiteResult("lemma83")
    result.items.append(
        CheckItem(
            label="|hat(w)| <= |w|",
            ok=nonincrease_bad == 0,
            detail=f"{samples - nonincrease_bad}/{samples} random words",
        )
    )
    result.items.append(
        CheckItem(
            label="psi^2(b^w) = b^v with v = hat^2(w)",
            ok=identity_bad == 0,
            detail=f"{eligible - identity_bad}/{eligible} eligible words",
        )
    )
    result.items.append(
        CheckItem(
            label="|v| < |w| when w and hat(w) are both off H",
            ok=decrease_bad == 0,
            detail=f"{eligible - decrease_bad}/{eligible} eligible words",
        )
    )
    return result


def run_suite(
    suite: str,
    mapdef: MapDefinition,
    system: PullbackSystem | None = None,
    *,
    n_max: int = 12,
) -> list[SuiteResult]:
    """Run one named suite, or all suites applicable to the map."""
    system = system or PullbackSystem(mapdef)
    psi = system.psi
    if suite == "all":
        names = [s for s in SUITE_NAMES if mapdef.name in SUITE_MAPS[s]]
        if not names:
            raise SuiteError(f"no verification suites apply to map {mapdef.name!r}")
    else:
        if suite not in SUITE_NAMES:
            raise SuiteError(f"unknown suite {suite!r}; have {SUITE_NAMES + ('all',)}")
        _require(suite, mapdef)
        names = [suite]
    out = []
    for name in names:
        if name == "table7":
            out.append(verify_nucleus_table(mapdef, psi))
        elif name == "recursions":
            out.append(verify_recursions(mapdef, psi))
        elif name == "prop84":
            out.append(verify_section(mapdef, psi, n_max=n_max))
        elif name == "lemma83":
            out.append(verify_length_decrease(mapdef, psi))
    return out
