"""Words and explicit automorphisms of finite-rank free groups.

Letters are nonzero integers: ``k`` is the k-th generator and ``-k`` its
inverse, with ``1 <= k <= rank``.  Words reduce freely on construction, so
every :class:`Word` in circulation is reduced; relators and curve classes
are additionally cyclically reduced where they are declared as such.

All values are immutable and every operation is pure, so shared use from
multiple threads is safe.

>>> w = Word(2, (1, 2, -2, 1))
>>> w.letters
(1, 1)
>>> invert(w).letters
(-1, -1)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .matrices import IntegerMatrix, determinant

__all__ = [
    "Word",
    "FreeAutomorphism",
    "letter",
    "letter_index",
    "letter_sign",
    "free_reduce",
    "cyclic_reduce",
    "invert",
    "letter_inverse",
    "apply",
    "compose",
    "canonical_cyclic",
    "identity_automorphism",
    "automorphism",
    "invert_all",
    "flip_letters",
    "relabel",
    "block_automorphism",
    "parse_word",
    "format_word",
]


def letter(index: int, sign: int) -> int:
    """Encode a signed generator as a single nonzero integer."""
    if index < 1:
        raise ValueError("generator index must be >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return index * sign


def letter_index(lt: int) -> int:
    return abs(lt)


def letter_sign(lt: int) -> int:
    return 1 if lt > 0 else -1


def _reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for lt in letters:
        if stack and stack[-1] == -lt:
            stack.pop()
        else:
            stack.append(lt)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word in the free group of the given rank."""

    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be non-negative")
        letters = tuple(self.letters)
        for lt in letters:
            if not isinstance(lt, int) or lt == 0 or abs(lt) > self.rank:
                raise ValueError(f"letter {lt!r} is not valid in rank {self.rank}")
        object.__setattr__(self, "letters", _reduce(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __repr__(self) -> str:
        return f"Word({self.rank}, {format_word(self)!r})"

    def __mul__(self, other: "Word") -> "Word":
        if self.rank != other.rank:
            raise ValueError("rank mismatch in word product")
        return Word(self.rank, self.letters + other.letters)

    def __pow__(self, n: int) -> "Word":
        if n < 0:
            return self.inverse() ** (-n)
        out = Word(self.rank)
        for _ in range(n):
            out = out * self
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return Word(self.rank, tuple(-lt for lt in reversed(self.letters)))

    def letter_inverse(self) -> "Word":
        """Flip the sign of every letter, keeping the order."""
        return Word(self.rank, tuple(-lt for lt in self.letters))

    def cyclic_reduce(self) -> "Word":
        letters = list(self.letters)
        while len(letters) >= 2 and letters[0] == -letters[-1]:
            letters = letters[1:-1]
        return Word(self.rank, tuple(letters))

    def exponent_sums(self) -> tuple[int, ...]:
        sums = [0] * self.rank
        for lt in self.letters:
            sums[abs(lt) - 1] += letter_sign(lt)
        return tuple(sums)

    def shift(self, offset: int, new_rank: int) -> "Word":
        """Re-express the word with all generator indices shifted up."""
        return Word(new_rank, tuple(lt + offset if lt > 0 else lt - offset
                                    for lt in self.letters))

    def relabeled(self, mapping: Mapping[int, int], new_rank: int) -> "Word":
        return Word(new_rank, tuple(letter_sign(lt) * mapping[abs(lt)]
                                    for lt in self.letters))


def free_reduce(w: Word) -> Word:
    """Return the freely reduced form of ``w`` (a no-op for Word values,
    which reduce on construction; idempotent by definition)."""
    return Word(w.rank, w.letters)


def cyclic_reduce(w: Word) -> Word:
    return w.cyclic_reduce()


def invert(w: Word) -> Word:
    return w.inverse()


def letter_inverse(w: Word) -> Word:
    return w.letter_inverse()


def canonical_cyclic(w: Word) -> Word:
    """Canonical representative of the conjugacy class of ``w`` and its
    inverse: the least rotation of either, in tuple order."""
    base = w.cyclic_reduce()
    if base.is_identity():
        return base
    candidates = []
    for word in (base.letters, base.inverse().letters):
        for i in range(len(word)):
            candidates.append(word[i:] + word[:i])
    return Word(w.rank, min(candidates))


def _apply_images(images: tuple[Word, ...], w: Word, rank: int) -> Word:
    out: list[int] = []
    for lt in w.letters:
        img = images[abs(lt) - 1]
        out.extend(img.letters if lt > 0 else img.inverse().letters)
    return Word(rank, tuple(out))


@dataclass(frozen=True)
class FreeAutomorphism:
    """An automorphism given by generator images.

    Validity is checked through the abelianized matrix, whose determinant
    must be +-1; this is necessary but not sufficient, so an automorphism
    built elsewhere is trusted at the caller's risk (``provenance`` records
    whether it came from a construction in this package or from a user).
    When the generator images of the inverse are known they are carried
    along, which keeps inversion available without ever searching for it.
    """

    rank: int
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] | None = None
    provenance: str = field(default="user", compare=False)

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise ValueError("need one image per generator")
        for img in self.images:
            if img.rank != self.rank:
                raise ValueError("image rank mismatch")
        mat = IntegerMatrix.from_rows([img.exponent_sums() for img in self.images],
                                      self.rank)
        if determinant(mat) not in (1, -1):
            raise ValueError("abelianized determinant is not +-1; not an automorphism")
        if self.inverse_images is not None:
            if len(self.inverse_images) != self.rank:
                raise ValueError("need one inverse image per generator")
            for k in range(self.rank):
                back = _apply_images(self.images, self.inverse_images[k], self.rank)
                if back.letters != (k + 1,):
                    raise ValueError("declared inverse does not invert the automorphism")

    def __call__(self, w: Word) -> Word:
        return apply(self, w)

    def inverse(self) -> "FreeAutomorphism":
        if self.inverse_images is None:
            raise ValueError("inverse images were not tracked for this automorphism")
        return FreeAutomorphism(self.rank, self.inverse_images, self.images,
                                self.provenance)

    def is_identity(self) -> bool:
        return all(img.letters == (k + 1,) for k, img in enumerate(self.images))


def apply(phi: FreeAutomorphism, w: Word) -> Word:
    """Image of ``w`` under the substitution homomorphism, freely reduced."""
    if phi.rank != w.rank:
        raise ValueError("rank mismatch between automorphism and word")
    return _apply_images(phi.images, w, phi.rank)


def compose(phi: FreeAutomorphism, psi: FreeAutomorphism) -> FreeAutomorphism:
    """The automorphism sending w to phi(psi(w))."""
    if phi.rank != psi.rank:
        raise ValueError("rank mismatch in composition")
    images = tuple(apply(phi, img) for img in psi.images)
    inverse = None
    if phi.inverse_images is not None and psi.inverse_images is not None:
        inverse = tuple(_apply_images(psi.inverse_images, img, phi.rank)
                        for img in phi.inverse_images)
    provenance = "built-in" if phi.provenance == psi.provenance == "built-in" else "user"
    return FreeAutomorphism(phi.rank, images, inverse, provenance)


def identity_automorphism(rank: int) -> FreeAutomorphism:
    images = tuple(Word(rank, (k + 1,)) for k in range(rank))
    return FreeAutomorphism(rank, images, images, "built-in")


def automorphism(rank: int,
                 images: Mapping[int, Iterable[int]],
                 inverse: Mapping[int, Iterable[int]] | None = None,
                 provenance: str = "built-in") -> FreeAutomorphism:
    """Build an automorphism from sparse generator images.

    Generators absent from ``images`` map to themselves; the same default
    applies to ``inverse`` when given.
    """
    imgs = list(identity_automorphism(rank).images)
    for gen, lts in images.items():
        imgs[gen - 1] = Word(rank, tuple(lts))
    inv = None
    if inverse is not None:
        inv_list = list(identity_automorphism(rank).images)
        for gen, lts in inverse.items():
            inv_list[gen - 1] = Word(rank, tuple(lts))
        inv = tuple(inv_list)
    return FreeAutomorphism(rank, tuple(imgs), inv, provenance)


def invert_all(rank: int) -> FreeAutomorphism:
    """The involution sending every generator to its inverse."""
    images = tuple(Word(rank, (-(k + 1),)) for k in range(rank))
    return FreeAutomorphism(rank, images, images, "built-in")


def flip_letters(rank: int, gens: Iterable[int]) -> FreeAutomorphism:
    """Invert the listed generators, fixing all others; an involution."""
    flip = set(gens)
    images = tuple(Word(rank, (-(k + 1) if (k + 1) in flip else (k + 1),))
                   for k in range(rank))
    return FreeAutomorphism(rank, images, images, "built-in")


def relabel(rank: int, mapping: Mapping[int, int]) -> FreeAutomorphism:
    """Permute generators: generator k maps to generator mapping[k]."""
    perm = {k: mapping.get(k, k) for k in range(1, rank + 1)}
    if sorted(perm.values()) != list(range(1, rank + 1)):
        raise ValueError("relabeling is not a permutation")
    images = tuple(Word(rank, (perm[k + 1],)) for k in range(rank))
    inv_perm = {v: k for k, v in perm.items()}
    inverse = tuple(Word(rank, (inv_perm[k + 1],)) for k in range(rank))
    return FreeAutomorphism(rank, images, inverse, "built-in")


def block_automorphism(blocks: Iterable[FreeAutomorphism]) -> FreeAutomorphism:
    """Block-diagonal automorphism: each block acts on its own run of
    consecutive generators."""
    blocks = list(blocks)
    rank = sum(b.rank for b in blocks)
    images: list[Word] = []
    inverses: list[Word] | None = []
    offset = 0
    for b in blocks:
        for img in b.images:
            images.append(img.shift(offset, rank))
        if inverses is not None and b.inverse_images is not None:
            for img in b.inverse_images:
                inverses.append(img.shift(offset, rank))
        else:
            inverses = None
        offset += b.rank
    provenance = "built-in" if all(b.provenance == "built-in" for b in blocks) else "user"
    return FreeAutomorphism(rank, tuple(images),
                            tuple(inverses) if inverses is not None else None,
                            provenance)


def format_word(w: Word) -> str:
    """Serialize in the shared word grammar: ``g<k>`` and ``g<k>^-1``
    tokens separated by spaces, with ``1`` for the empty word."""
    if w.is_identity():
        return "1"
    return " ".join(f"g{lt}" if lt > 0 else f"g{-lt}^-1" for lt in w.letters)


def parse_word(text: str, rank: int) -> Word:
    text = text.strip()
    if text == "1" or text == "":
        return Word(rank)
    letters = []
    for token in text.split():
        body = token
        sign = 1
        if token.endswith("^-1"):
            body = token[:-3]
            sign = -1
        if not body.startswith("g"):
            raise ValueError(f"bad word token {token!r}")
        try:
            idx = int(body[1:])
        except ValueError:
            raise ValueError(f"bad word token {token!r}") from None
        if not 1 <= idx <= rank:
            raise ValueError(f"generator g{idx} out of range for rank {rank}")
        letters.append(sign * idx)
    return Word(rank, tuple(letters))
