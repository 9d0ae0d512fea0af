"""Virtual endomorphism on an index-2 subgroup, realized as a transducer.

The domain H is the kernel of a parity homomorphism onto Z/2.  A word is
evaluated letter by letter while tracking the coset state of the prefix
read so far; each (letter, state) pair contributes the image of one
Schreier generator of H.  The homomorphism property is then structural:
the factor decomposition telescopes to the input word.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .words import Word, substitute


class DomainError(ValueError):
    """Raised when a word outside H is fed to the partial endomorphism."""

    def __init__(self, message: str, parity: int):
        super().__init__(message)
        self.parity = parity


@dataclass(frozen=True)
class ParityHom:
    """Per-generator parity bits defining H = ker(theta), plus the coset
    representative t (a generator with bit 1)."""

    bits: tuple[int, int]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"parity bits must be 0/1, got {self.bits}")
        if self.bits == (0, 0):
            raise ValueError("parity is not surjective onto Z/2")

    @property
    def transversal_gen(self) -> int:
        """Index of the generator used as the nontrivial coset representative."""
        return self.bits.index(1)

    def theta(self, w: Word) -> int:
        s = 0
        for c in w.codes:
            s ^= self.bits[abs(c) - 1]
        return s


def schreier_factor(parity: ParityHom, code: int, state: int) -> Word:
    """Rewriting factor contributed by one letter read at a coset state.

    With u_0 = 1 and u_1 = t, the factor is u_s^-1 * letter * u_s' where
    s' is the state after the letter.  A word w in H decomposes as the
    product of its factors; the nontrivial factors over positive letters
    are the Reidemeister-Schreier basis of H for the transversal {1, t}.
    """
    t = Word((parity.transversal_gen + 1,), _reduced=True)
    reps = (Word.identity(), t)
    state_after = state ^ parity.bits[abs(code) - 1]
    return ~reps[state] * Word((code,), _reduced=True) * reps[state_after]


def schreier_basis(parity: ParityHom) -> tuple[Word, ...]:
    """The three nontrivial rewriting factors over positive letters."""
    basis = []
    for code in (1, 2):
        for state in (0, 1):
            f = schreier_factor(parity, code, state)
            if not f.is_identity():
                basis.append(f)
    if len(basis) != 3:
        raise AssertionError(f"expected 3 basis elements, got {basis}")
    return tuple(basis)


@dataclass(frozen=True)
class VirtualEndo:
    """The endomorphism psi: H -> F realized as a two-state transducer.

    ``transitions`` maps (letter code, state) to the output letter codes;
    entries for all eight pairs are derived from the three declared
    Schreier-generator images, so a single source of truth drives both
    evaluation directions.
    """

    parity: ParityHom
    transitions: Mapping[tuple[int, int], tuple[int, ...]]

    @classmethod
    def from_images(cls, parity: ParityHom, images: Mapping[Word, Word]) -> "VirtualEndo":
        basis = schreier_basis(parity)
        if set(images) != set(basis):
            raise ValueError(
                f"images must be declared exactly on the Schreier basis {basis}"
            )
        transitions: dict[tuple[int, int], tuple[int, ...]] = {}
        for code in (1, -1, 2, -2):
            for state in (0, 1):
                f = schreier_factor(parity, code, state)
                if f.is_identity():
                    out = Word.identity()
                elif f in images:
                    out = images[f]
                else:
                    out = ~images[~f]
                transitions[(code, state)] = out.codes
        return cls(parity, transitions)

    def in_domain(self, w: Word) -> bool:
        return self.parity.theta(w) == 0

    def _scan(self, w: Word, state: int) -> Word:
        bits = self.parity.bits
        transitions = self.transitions
        stack: list[int] = []
        for c in w.codes:
            for o in transitions[(c, state)]:
                if stack and stack[-1] == -o:
                    stack.pop()
                else:
                    stack.append(o)
            state ^= bits[abs(c) - 1]
        return Word(stack, _reduced=True)

    def apply(self, w: Word) -> Word:
        """psi(w) for w in H; raises DomainError otherwise."""
        parity = self.parity.theta(w)
        if parity:
            raise DomainError("word is not in the domain of the endomorphism", parity)
        return self._scan(w, 0)

    def apply_hat(self, w: Word) -> Word:
        """The coset-corrected extension: psi(w) on H, psi(t^-1 w) off it.

        The factor contributed by t^-1 at state 0 is trivial, so this is
        exactly a scan started in the coset state of w.
        """
        return self._scan(w, self.parity.theta(w))


@dataclass(frozen=True)
class HatOrbit:
    words: tuple[Word, ...]
    reason: str  # "absorbed", "repeated", or "max_steps"

    @property
    def final(self) -> Word:
        return self.words[-1]


def hat_orbit(
    psi: VirtualEndo,
    w: Word,
    max_steps: int,
    nucleus: frozenset[Word] | None = None,
) -> HatOrbit:
    """Iterate the extension map, recording the trajectory.

    Stops when the value lands in the nucleus (checked from the second
    iterate on, mirroring the two-step absorption that the nucleus is
    closed under), when a value repeats, or after max_steps.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    traj = [w]
    seen = {w}
    for step in range(1, max_steps + 1):
        v = psi.apply_hat(traj[-1])
        traj.append(v)
        if nucleus is not None and step >= 2 and v in nucleus:
            return HatOrbit(tuple(traj), "absorbed")
        if v in seen:
            return HatOrbit(tuple(traj), "repeated")
        seen.add(v)
    return HatOrbit(tuple(traj), "max_steps")


def pair_table(psi: VirtualEndo, elements: Sequence[Word]) -> dict[tuple[Word, Word], Word]:
    """Second iterate of the extension map on all products a*b."""
    return {
        (a, b): psi.apply_hat(psi.apply_hat(a * b))
        for a in elements
        for b in elements
    }


def verify_contraction_closure(psi: VirtualEndo, nucleus: Iterable[Word]) -> bool:
    """True iff the second iterate maps every pairwise product back into
    the nucleus; this is the machine-checked core of contraction."""
    elems = tuple(nucleus)
    nuc = frozenset(elems)
    return all(v in nuc for v in pair_table(psi, elems).values())


# -- section of the z^2+i endomorphism ---------------------------------------

# Substitution images for the right inverse of psi on the dendrite map
# (generators a=index 0, b=index 1): a -> b^-1 a^-1 b^-1 a, b -> a^-1 b a.
_SECTION_IMAGES: dict[int, Word] = {
    0: Word((-2, -1, -2, 1), _reduced=True),
    1: Word((-1, 2, 1), _reduced=True),
}


def section(w: Word) -> Word:
    """Right inverse of the dendrite endomorphism: psi(section(w)) == w."""
    return substitute(w, _SECTION_IMAGES)


def section_conjugator(n: int) -> Word:
    """Conjugator w_n whose b-twist survives n pullbacks:
    w_n = a * section(a) * ... * section^(n-1)(a)."""
    if n < 1:
        raise ValueError("n must be positive")
    a = Word((1,), _reduced=True)
    out = a
    term = a
    for _ in range(n - 1):
        term = section(term)
        out = out * term
    return out
