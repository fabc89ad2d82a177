"""Nielsen moves on generating tuples, orbit enumeration in finite
abelian quotients, and non-isotopy certificates.

The four elementary moves on an ordered tuple (a_1, ..., a_n):

    swap12    exchange a_1 and a_2
    cycle     rotate to (a_2, ..., a_n, a_1)
    invert1   replace a_1 with its inverse
    mult12    replace a_1 with a_1 a_2

Two spine tuples of isotopic sectors are related by these moves, so a
finite quotient in which the images land in different move-orbits rules
the isotopy out.  Failure to separate is never reported as equivalence:
``same_orbit`` needs an explicit move sequence that replays, and
everything else stays ``inconclusive``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct

from .abelian import Element, FiniteAbelianGroup, configured_bound, \
    enumerate_abelian_groups
from .diagrams import DiagramError, MultisectionDiagram, express_against, \
    presentation_of_pair, pi1_of_diagram
from .matrices import IntegerMatrix, determinant, smith_normal_form
from .presentations import (GroupPresentation, abelianization,
                            enumerate_finite_abelian_quotients, tietze_simplify,
                            DEFAULT_TIETZE_BUDGET)
from .words import Word, apply, format_word

MOVES = ("swap12", "cycle", "invert1", "mult12")
DEFAULT_QUOTIENT_BOUND = 100
DEFAULT_SEARCH_NODES = 4000

Tuple_ = tuple[Element, ...]


@dataclass(frozen=True)
class GeneratingTuple:
    group: FiniteAbelianGroup
    elements: tuple[Element, ...]

    def __post_init__(self):
        elements = tuple(self.group.reduce(e) for e in self.elements)
        object.__setattr__(self, "elements", elements)
        if not self.group.generates(elements):
            raise ValueError("tuple does not generate the group")

    def __len__(self) -> int:
        return len(self.elements)


def _move_elements(group: FiniteAbelianGroup, t: Tuple_, move: str) -> Tuple_:
    n = len(t)
    if move == "swap12":
        if n < 2:
            raise ValueError("swap12 needs at least two entries")
        return (t[1], t[0]) + t[2:]
    if move == "cycle":
        return t[1:] + (t[0],)
    if move == "invert1":
        return (group.neg(t[0]),) + t[1:]
    if move == "mult12":
        if n < 2:
            raise ValueError("mult12 needs at least two entries")
        return (group.add(t[0], t[1]),) + t[1:]
    raise ValueError(f"unknown move {move!r}")


def nielsen_move(t: GeneratingTuple, move: str) -> GeneratingTuple:
    """Apply one elementary move; the result still generates."""
    return GeneratingTuple(t.group, _move_elements(t.group, t.elements, move))


@dataclass(frozen=True)
class OrbitPartition:
    group: FiniteAbelianGroup
    width: int
    orbits: tuple[tuple[Tuple_, tuple[Tuple_, ...]], ...]
    """Pairs (orbit id, sorted members); the id is the least member."""

    @cached_property
    def orbit_of(self) -> dict[Tuple_, Tuple_]:
        out = {}
        for ident, members in self.orbits:
            for m in members:
                out[m] = ident
        return out

    @property
    def tuple_count(self) -> int:
        return sum(len(members) for _, members in self.orbits)


def orbit_enumerate(group: FiniteAbelianGroup, n: int) -> OrbitPartition:
    """Partition all generating n-tuples into move-orbits.

    Deterministic: tuples are swept in lexicographic order and each orbit
    is named by its least member, so parallel or repeated runs agree."""
    if n < 1:
        raise ValueError("tuple length must be positive")
    if group.order ** n > configured_bound():
        raise ValueError("tuple space exceeds the configured bound")
    elements = list(group.elements())
    generating = [t for t in iproduct(elements, repeat=n) if group.generates(t)]
    generating_set = set(generating)
    seen: set[Tuple_] = set()
    orbits = []
    for seed in generating:
        if seed in seen:
            continue
        members = {seed}
        queue = deque([seed])
        while queue:
            current = queue.popleft()
            for move in MOVES:
                if len(current) < 2 and move in ("swap12", "mult12"):
                    continue
                nxt = _move_elements(group, current, move)
                if nxt not in members:
                    if nxt not in generating_set:
                        raise AssertionError("move left the generating set")
                    members.add(nxt)
                    queue.append(nxt)
        seen |= members
        orbits.append((seed, tuple(sorted(members))))
    return OrbitPartition(group, n, tuple(orbits))


def connect_tuples(group: FiniteAbelianGroup, start: Tuple_,
                   target: Tuple_) -> tuple[str, ...] | None:
    """Breadth-first move sequence from one generating tuple to another,
    or None when they lie in different orbits."""
    start = tuple(group.reduce(e) for e in start)
    target = tuple(group.reduce(e) for e in target)
    if start == target:
        return ()
    parents: dict[Tuple_, tuple[Tuple_, str]] = {start: (start, "")}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for move in MOVES:
            if len(current) < 2 and move in ("swap12", "mult12"):
                continue
            nxt = _move_elements(group, current, move)
            if nxt in parents:
                continue
            parents[nxt] = (current, move)
            if nxt == target:
                path = []
                node = nxt
                while node != start:
                    node, move_name = parents[node]
                    path.append(move_name)
                return tuple(reversed(path))
            queue.append(nxt)
    return None


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def determinant_invariant(t: GeneratingTuple) -> tuple[int, ...]:
    """Determinant of the component matrix modulo sign, for n-tuples in
    (Z/p)^n with p prime: constant on move-orbits because every move acts
    by an elementary matrix of determinant +-1."""
    group = t.group
    p = group.invariant_factors[0] if group.invariant_factors else 0
    if not group.invariant_factors or any(d != p for d in group.invariant_factors):
        raise ValueError("determinant invariant needs an elementary abelian group")
    if not _is_prime(p):
        raise ValueError("determinant invariant needs a prime modulus")
    n = group.rank
    if len(t.elements) != n:
        raise ValueError("tuple length must equal the group rank")
    det = determinant(IntegerMatrix.from_rows([list(e) for e in t.elements], n)) % p
    if det == 0:
        raise AssertionError("generating tuple with singular component matrix")
    return tuple(sorted({det, (p - det) % p}))


# ---------------------------------------------------------------------------
# moves on abstract word tuples

WordTuple = tuple[Word, ...]


def _conjugating_word(move: str, rank: int) -> Word | None:
    if not move.startswith("conj "):
        return None
    from .words import parse_word
    return parse_word(move[len("conj "):], rank)


def apply_word_move(t: WordTuple, move: str) -> WordTuple:
    """The four elementary moves plus whole-tuple conjugation by a
    generator (`conj g<k>` / `conj g<k>^-1`), which absorbs base point
    changes; all entries stay freely reduced."""
    n = len(t)
    rank = t[0].rank if t else 0
    conj = _conjugating_word(move, rank)
    if conj is not None:
        return tuple(conj * w * conj.inverse() for w in t)
    if move == "swap12":
        if n < 2:
            raise ValueError("swap12 needs at least two entries")
        return (t[1], t[0]) + t[2:]
    if move == "cycle":
        return t[1:] + (t[0],)
    if move == "invert1":
        return (t[0].inverse(),) + t[1:]
    if move == "mult12":
        if n < 2:
            raise ValueError("mult12 needs at least two entries")
        return (t[0] * t[1],) + t[1:]
    raise ValueError(f"unknown move {move!r}")


def free_tuple_search(t1: WordTuple, t2: WordTuple, rank: int,
                      node_limit: int = DEFAULT_SEARCH_NODES) -> tuple[str, ...] | None:
    """Bounded breadth-first search connecting two word tuples by the
    moves above, compared as freely reduced words."""
    if t1 == t2:
        return ()
    moves = list(MOVES)
    for k in range(1, rank + 1):
        moves.append(f"conj g{k}")
        moves.append(f"conj g{k}^-1")
    limit_len = max(sum(len(w) for w in t1), sum(len(w) for w in t2)) + 4

    def key(t: WordTuple):
        return tuple(w.letters for w in t)

    parents = {key(t1): None}
    queue = deque([t1])
    visited = 1
    while queue and visited < node_limit:
        current = queue.popleft()
        for move in moves:
            if len(current) < 2 and move in ("swap12", "mult12"):
                continue
            nxt = apply_word_move(current, move)
            if sum(len(w) for w in nxt) > limit_len:
                continue
            k = key(nxt)
            if k in parents:
                continue
            parents[k] = (key(current), move)
            visited += 1
            if nxt == t2:
                path = []
                node = k
                while parents[node] is not None:
                    node, move_name = parents[node]
                    path.append(move_name)
                return tuple(reversed(path))
            queue.append(nxt)
    return None


# ---------------------------------------------------------------------------
# spine tuples and certificates


def _spine_from_side(d: MultisectionDiagram, home: int, other: int) -> WordTuple | None:
    system = d.systems[home - 1]
    if system.standardizer is None or system.standardizer.inverse_images is None:
        return None
    result = tietze_simplify(presentation_of_pair(d, home, other))
    if result.presentation.relators:
        return None
    inverse = system.standardizer.inverse()
    out = []
    for dual in result.surviving_generators:
        lt = system.surviving_letters[dual - 1]
        carried = apply(inverse, Word(d.surface.rank, (lt,)))
        out.append(express_against(carried, d.systems[0]))
    return tuple(out)


def spine_tuple(d: MultisectionDiagram, sector: int) -> WordTuple:
    """Generating tuple of the diagram's group carried by the spine of
    one sector, written in the duals of system 1.

    The sector pair must simplify to a free presentation; the surviving
    dual generators are pulled back through the inverse standardizer and
    re-expressed against system 1.  Either interface of the sector may
    serve as the home handlebody: any two free bases of the sector group
    are Nielsen equivalent, so the class of the resulting tuple does not
    depend on the side.
    """
    pairs = d.sector_pairs()
    if not 1 <= sector <= len(pairs):
        raise DiagramError("sector index out of range")
    i, j = pairs[sector - 1]
    tuple_ = _spine_from_side(d, i, j)
    if tuple_ is None:
        tuple_ = _spine_from_side(d, j, i)
    if tuple_ is None:
        raise DiagramError(
            f"sector {sector} is not expressible: no side gives a tracked "
            "standardizer and a free simplification")
    return tuple_


@dataclass(frozen=True)
class NielsenCertificate:
    """Outcome of a tuple comparison, with enough data to replay it.

    ``distinct`` carries a finite quotient, a surjection, and the two
    orbit identifiers that separate the images; ``same_orbit`` carries a
    move sequence connecting the tuples as free words.  ``inconclusive``
    records what was searched and claims nothing.
    """

    verdict: str  # "distinct" | "same_orbit" | "inconclusive"
    presentation: GroupPresentation
    tuple1: WordTuple
    tuple2: WordTuple
    quotient: FiniteAbelianGroup | None = None
    surjection: tuple[Element, ...] | None = None
    image1: Tuple_ | None = None
    image2: Tuple_ | None = None
    orbit_id1: Tuple_ | None = None
    orbit_id2: Tuple_ | None = None
    moves: tuple[str, ...] | None = None
    searched: str = ""

    def replay(self) -> bool:
        """Re-verify the certificate from its own data."""
        if self.verdict == "same_orbit":
            if self.moves is None:
                return False
            current = self.tuple1
            for move in self.moves:
                current = apply_word_move(current, move)
            return current == self.tuple2
        if self.verdict == "distinct":
            if self.quotient is None or self.image1 is None or self.image2 is None:
                return False
            first = connect_tuples(self.quotient, self.image1, self.image2)
            return first is None
        return True


def format_certificate(cert: NielsenCertificate) -> str:
    lines = [f"verdict: {cert.verdict}"]
    lines.append("tuple1: " + "; ".join(format_word(w) for w in cert.tuple1))
    lines.append("tuple2: " + "; ".join(format_word(w) for w in cert.tuple2))
    if cert.quotient is not None:
        lines.append(f"quotient: {cert.quotient.describe()}")
        lines.append("surjection: " + "; ".join(str(v) for v in cert.surjection))
        lines.append(f"image1: {cert.image1}")
        lines.append(f"image2: {cert.image2}")
        lines.append(f"orbit1: {cert.orbit_id1}")
        lines.append(f"orbit2: {cert.orbit_id2}")
    if cert.moves is not None:
        lines.append("moves: " + (" ".join(cert.moves) if cert.moves else "(none)"))
    if cert.searched:
        lines.append(f"searched: {cert.searched}")
    return "\n".join(lines) + "\n"


def _rewrite_word(w: Word, images: tuple[Word, ...], new_rank: int) -> Word:
    out: list[int] = []
    for lt in w.letters:
        img = images[abs(lt) - 1]
        out.extend(img.letters if lt > 0 else img.inverse().letters)
    return Word(new_rank, tuple(out))


def _generates_abelianization(pres: GroupPresentation, t: WordTuple) -> bool:
    rows = [w.exponent_sums() for w in t]
    rows.extend(rel.exponent_sums() for rel in pres.relators)
    snf = smith_normal_form(IntegerMatrix.from_rows(rows, pres.generator_count))
    return snf.rank == pres.generator_count and snf.invariant_factors == ()




def distinguish(pres: GroupPresentation, t1: WordTuple, t2: WordTuple,
                bound: int = DEFAULT_QUOTIENT_BOUND,
                budget: int = DEFAULT_TIETZE_BUDGET,
                search_nodes: int = DEFAULT_SEARCH_NODES) -> NielsenCertificate:
    """Compare two generating tuples of a presented group up to Nielsen
    moves, by mapping them through every finite abelian quotient of order
    at most ``bound``.

    ``distinct`` on the first quotient that separates the images;
    ``same_orbit`` only when a bounded free-word move search connects the
    tuples outright; ``inconclusive`` otherwise.  The presentation is
    Tietze-simplified first and the tuples are rewritten through the
    isomorphism, so certificates are stated in the simplified group.
    """
    if len(t1) != len(t2):
        raise ValueError("tuples must have the same length")
    n = len(t1)
    for w in (*t1, *t2):
        if w.rank != pres.generator_count:
            raise ValueError("tuple entries must live in the presented group")

    simplified = tietze_simplify(pres, budget)
    target = simplified.presentation
    images = simplified.generator_images
    rank = target.generator_count
    r1 = tuple(_rewrite_word(w, images, rank) for w in t1)
    r2 = tuple(_rewrite_word(w, images, rank) for w in t2)

    for t in (r1, r2):
        if not _generates_abelianization(target, t):
            raise ValueError("tuple does not generate the abelianization")

    if r1 == r2:
        return NielsenCertificate("same_orbit", target, r1, r2, moves=(),
                                  searched="tuples equal after rewriting")

    ab = abelianization(target)
    orbit_bound = configured_bound()
    quotients_seen = 0
    surjections_seen = 0
    for group in enumerate_abelian_groups(bound, max_rank=n):
        if ab.free_rank == 0:
            total = 1
            for dd in ab.torsion:
                total *= dd
            if total % group.order != 0:
                continue
        if group.order ** n > orbit_bound:
            continue
        if group.order ** max(rank, 1) > orbit_bound:
            continue
        try:
            surjections = enumerate_finite_abelian_quotients(target, [group])
        except ValueError:
            continue
        if not surjections:
            continue
        quotients_seen += 1
        partition = orbit_enumerate(group, n)
        if len(partition.orbits) < 2:
            surjections_seen += len(surjections)
            continue
        for q in surjections:
            surjections_seen += 1
            img1 = tuple(q.evaluate(w) for w in r1)
            img2 = tuple(q.evaluate(w) for w in r2)
            if not group.generates(img1) or not group.generates(img2):
                continue
            id1 = partition.orbit_of[img1]
            id2 = partition.orbit_of[img2]
            if id1 != id2:
                return NielsenCertificate(
                    "distinct", target, r1, r2, group, q.images, img1, img2,
                    id1, id2,
                    searched=f"{quotients_seen} quotients, "
                             f"{surjections_seen} surjections")
    moves = free_tuple_search(r1, r2, rank, search_nodes)
    searched = (f"{quotients_seen} quotients, {surjections_seen} surjections, "
                f"free search up to {search_nodes} nodes")
    if moves is not None:
        return NielsenCertificate("same_orbit", target, r1, r2, moves=moves,
                                  searched=searched)
    return NielsenCertificate("inconclusive", target, r1, r2, searched=searched)


def flip_check(d: MultisectionDiagram,
               bound: int = DEFAULT_QUOTIENT_BOUND) -> NielsenCertificate:
    """Compare the spine tuples of the two sectors of a bounded
    bisection diagram: a ``distinct`` verdict obstructs any isotopy
    exchanging the sectors."""
    if d.closed or len(d.systems) != 3:
        raise DiagramError("flip check expects a bounded three-system diagram")
    t1 = spine_tuple(d, 1)
    t2 = spine_tuple(d, 2)
    return distinguish(pi1_of_diagram(d), t1, t2, bound)
