"""Exact word algebra in a rank-2 free group.

A letter is a nonzero int: ``+1``/``-1`` for the first generator and its
inverse, ``+2``/``-2`` for the second.  A :class:`Word` is an immutable,
freely reduced tuple of letters; the empty word is the identity.  Because
every word is reduced at construction, equality of group elements is
literal equality of tuples.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping, NamedTuple


class Letter(NamedTuple):
    """A single generator or inverse generator."""

    gen: int  # generator index, 0 or 1
    sign: int  # +1 or -1

    def code(self) -> int:
        return (self.gen + 1) * self.sign


def letter(gen: int, sign: int) -> int:
    """Encode (generator index, sign) as a letter code."""
    if gen not in (0, 1):
        raise ValueError(f"generator index must be 0 or 1, got {gen}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return (gen + 1) * sign


def decode(code: int) -> Letter:
    if code == 0 or abs(code) > 2:
        raise ValueError(f"bad letter code {code}")
    return Letter(abs(code) - 1, 1 if code > 0 else -1)


def _reduce_codes(codes: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for c in codes:
        if stack and stack[-1] == -c:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


class Word:
    """A freely reduced word; the group operation is ``*``.

    Words compare and hash by their letter tuple, so they can be used as
    dict keys and set members.  ``~w`` is the inverse, ``w ** n`` the
    n-th power, ``u.conj(w)`` the conjugate w^-1 * u * w.
    """

    __slots__ = ("codes",)

    def __init__(self, codes: Iterable[int] = (), *, _reduced: bool = False):
        if _reduced:
            self.codes = tuple(codes)
        else:
            codes = tuple(codes)
            for c in codes:
                if c == 0 or abs(c) > 2:
                    raise ValueError(f"bad letter code {c}")
            self.codes = _reduce_codes(codes)

    @classmethod
    def from_letters(cls, letters: Iterable[Letter]) -> "Word":
        return cls(l.code() for l in letters)

    @classmethod
    def identity(cls) -> "Word":
        return _IDENTITY

    def letters(self) -> tuple[Letter, ...]:
        return tuple(decode(c) for c in self.codes)

    def is_identity(self) -> bool:
        return not self.codes

    def __len__(self) -> int:
        return len(self.codes)

    def __iter__(self) -> Iterator[int]:
        return iter(self.codes)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Word) and self.codes == other.codes

    def __hash__(self) -> int:
        return hash(self.codes)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if not self.codes:
            return other
        if not other.codes:
            return self
        return Word(self.codes + other.codes)

    def __invert__(self) -> "Word":
        return Word(tuple(-c for c in reversed(self.codes)), _reduced=True)

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return _IDENTITY
        base = self if n > 0 else ~self
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def conj(self, w: "Word") -> "Word":
        return ~w * self * w

    def __repr__(self) -> str:
        return f"Word({self.codes!r})"


_IDENTITY = Word((), _reduced=True)


class CyclicWord(Word):
    """A cyclically reduced word, standing for a conjugacy class.

    Equality stays literal; use :func:`conjugacy_equal` to compare up to
    rotation.
    """

    __slots__ = ()

    def __init__(self, codes: Iterable[int] = (), *, _reduced: bool = False):
        super().__init__(codes, _reduced=_reduced)
        if len(self.codes) >= 2 and self.codes[0] == -self.codes[-1]:
            raise ValueError(f"not cyclically reduced: {self.codes}")

    def rotations(self) -> list[tuple[int, ...]]:
        c = self.codes
        return [c[i:] + c[:i] for i in range(max(len(c), 1))]


# -- module-level operations ---------------------------------------------------------


def reduce(raw: Iterable[int | Letter]) -> Word:
    """Freely reduce a raw sequence of letters or letter codes."""
    return Word(c.code() if isinstance(c, Letter) else c for c in raw)


def mul(u: Word, v: Word) -> Word:
    return u * v


def inv(u: Word) -> Word:
    return ~u


def conj(u: Word, w: Word) -> Word:
    """Conjugation as a right action: u^w = w^-1 u w."""
    return u.conj(w)


def cyclic_reduce(u: Word) -> tuple[CyclicWord, Word]:
    """Split u as core^conjugator with the core cyclically reduced.

    Returns (core, conjugator) with ``conj(core, conjugator) == u``
    exactly.  The identity has no core and is rejected.
    """
    if u.is_identity():
        raise ValueError("trivial element has no cyclic reduction")
    codes = u.codes
    i, j = 0, len(codes)
    while j - i >= 2 and codes[i] == -codes[j - 1]:
        i += 1
        j -= 1
    core = CyclicWord(codes[i:j], _reduced=True)
    # u = p * core * p^-1 with p the stripped prefix, so u = core^(p^-1).
    conjugator = ~Word(codes[:i], _reduced=True)
    return core, conjugator


def primitive_root(c: CyclicWord) -> tuple[CyclicWord, int]:
    """Write a cyclically reduced word as root**exp with exp maximal."""
    n = len(c)
    if n == 0:
        raise ValueError("empty cyclic word has no primitive root")
    codes = c.codes
    for d in range(1, n + 1):
        if n % d:
            continue
        if codes[:d] * (n // d) == codes:
            return CyclicWord(codes[:d], _reduced=True), n // d
    raise AssertionError("unreachable: every word is its own root")


def conjugacy_equal(u: Word, v: Word) -> bool:
    """True iff u and v are conjugate, i.e. their cores are rotations."""
    if u.is_identity() or v.is_identity():
        return u.is_identity() and v.is_identity()
    cu, _ = cyclic_reduce(u)
    cv, _ = cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    doubled = cv.codes + cv.codes
    m = len(cu.codes)
    return any(doubled[i : i + m] == cu.codes for i in range(m))


def substitute(u: Word, images: Mapping[int, Word]) -> Word:
    """Apply the endomorphism sending generator index g to images[g]."""
    out: list[int] = []
    for c in u.codes:
        img = images[abs(c) - 1]
        out.extend(img.codes if c > 0 else (~img).codes)
    return Word(out)


def geodesic_length(u: Word, extra_blocks: Iterable[Word] = ()) -> int:
    """Word length of u over the four letters plus the given extra generators.

    Each extra generator must be a reduced word of length at most 2; its
    inverse is included automatically.  With such blocks a geodesic
    spelling never cancels across a block boundary (any cancelling
    adjacent pair collapses to at most one block), so the length is the
    minimum block count over literal factorizations of the reduced word.
    """
    blocks: set[tuple[int, ...]] = set()
    for b in extra_blocks:
        if len(b) > 2:
            raise ValueError("extra generators longer than 2 letters are not supported")
        if len(b) == 2:
            blocks.add(b.codes)
            blocks.add((~b).codes)
    codes = u.codes
    n = len(codes)
    dp = [0] * (n + 1)
    for i in range(1, n + 1):
        best = dp[i - 1] + 1
        if i >= 2 and codes[i - 2 : i] in blocks:
            best = min(best, dp[i - 2] + 1)
        dp[i] = best
    return dp[n]


# -- word literals -----------------------------------------------------------


class WordSyntaxError(ValueError):
    """Raised for malformed word literals; carries the bad token."""

    def __init__(self, message: str, token: str | None = None):
        super().__init__(message)
        self.token = token


def parse_word(text: str, names: Mapping[str, Word]) -> Word:
    """Parse a word literal: whitespace-separated NAME or NAME^INT tokens.

    ``1`` denotes the identity.  ``names`` maps each accepted token name
    to its expansion, so derived names parse transparently.
    """
    out = Word.identity()
    for token in text.split():
        if token == "1":
            continue
        name, caret, exp_text = token.partition("^")
        if name not in names:
            raise WordSyntaxError(f"unknown generator name {name!r}", token=token)
        if caret:
            try:
                exp = int(exp_text)
            except ValueError:
                raise WordSyntaxError(
                    f"bad exponent {exp_text!r} in token {token!r}", token=token
                ) from None
            if exp == 0:
                raise WordSyntaxError(f"zero exponent in token {token!r}", token=token)
        else:
            exp = 1
        out = out * names[name] ** exp
    return out


def format_word(u: Word, gen_names: tuple[str, str]) -> str:
    """Render a word with one token per letter; the identity prints as 1."""
    if u.is_identity():
        return "1"
    parts = []
    for c in u.codes:
        name = gen_names[abs(c) - 1]
        parts.append(name if c > 0 else f"{name}^-1")
    return " ".join(parts)
