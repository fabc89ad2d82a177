"""Diagram-level constructions: product bisections from Heegaard
diagrams, restriction of trisections, doubling, parallel sector
insertion, gluing along boundary handlebodies, capping, and merging.

The central device is the doubled surface.  For an input of genus g the
central surface has genus 2g; its basis splits into side-0 letters
(indices 1..2g, matching the input surface) and side-1 letters (indices
2g+1..4g).  The transport map tau relabels sides and inverts every
letter, which is how a curve travels to the mirror copy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd

from .diagrams import (CutSystem, DiagramError, GeometricHeegaardDiagram,
                       MultisectionDiagram, SurfaceModel, pi1_of_diagram,
                       presentation_of_pair, read_against)
from .presentations import (GroupPresentation, abelianization, tietze_simplify,
                            DEFAULT_TIETZE_BUDGET)
from .words import (FreeAutomorphism, Word, apply, automorphism,
                    block_automorphism, compose, flip_letters, format_word,
                    identity_automorphism, invert_all, relabel)


class MergeRefusedError(DiagramError):
    def __init__(self, message: str, families):
        self.families = families
        super().__init__(message)


class GlueMismatchError(DiagramError):
    def __init__(self, message: str, left, right):
        self.left = left
        self.right = right
        super().__init__(message)


@dataclass(frozen=True)
class DoubledSurfaceContext:
    """Bookkeeping for the genus-2g central surface of a product
    bisection: side split, transport map, and the standard letter runs."""

    input_genus: int

    def __post_init__(self):
        if self.input_genus < 0:
            raise ValueError("genus must be non-negative")

    @property
    def surface(self) -> SurfaceModel:
        return SurfaceModel(2 * self.input_genus)

    @property
    def rank(self) -> int:
        return 4 * self.input_genus

    def side0_a(self, i: int) -> int:
        return 2 * i - 1

    def side0_b(self, i: int) -> int:
        return 2 * i

    def side1_a(self, i: int) -> int:
        return 2 * self.input_genus + 2 * i - 1

    def side1_b(self, i: int) -> int:
        return 2 * self.input_genus + 2 * i

    @cached_property
    def side_swap(self) -> FreeAutomorphism:
        half = 2 * self.input_genus
        mapping = {k: k + half for k in range(1, half + 1)}
        mapping.update({k + half: k for k in range(1, half + 1)})
        return relabel(self.rank, mapping)

    @cached_property
    def transport(self) -> FreeAutomorphism:
        """tau: swap sides and invert every letter.  An involution with
        no fixed letter; on a side-0 word it flips each sign in place."""
        tau = compose(invert_all(self.rank), self.side_swap)
        for k in range(1, self.rank + 1):
            image = apply(tau, apply(tau, Word(self.rank, (k,))))
            if image.letters != (k,):
                raise AssertionError("transport map is not an involution")
            if apply(tau, Word(self.rank, (k,))).letters == (k,):
                raise AssertionError("transport map fixes a letter")
        return tau

    def embed_side0(self, w: Word) -> Word:
        if w.rank != 2 * self.input_genus:
            raise ValueError("word does not live on the input surface")
        return Word(self.rank, w.letters)

    def embed_side1(self, w: Word) -> Word:
        return apply(self.transport, self.embed_side0(w))


def lens_diagram(p: int, q: int) -> GeometricHeegaardDiagram:
    """Genus-1 Heegaard diagram of the lens space with the given coprime
    parameters: the curve winds p times along b and q times along a,
    interleaved by the subtractive Euclidean pattern, and the
    standardizer is the matching chain of elementary substitutions."""
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise ValueError("parameters must be coprime positive integers")
    move_a = automorphism(2, {1: (2, 1)}, {1: (-2, 1)})   # a -> b a
    move_b = automorphism(2, {2: (2, 1)}, {2: (2, -1)})   # b -> b a
    steps = []
    bb, aa = p, q
    while (bb, aa) != (1, 0):
        if bb > aa:
            steps.append(move_a)
            bb -= aa
        else:
            steps.append(move_b)
            aa -= bb
    builder = reduce(compose, steps, identity_automorphism(2))
    curve = apply(builder, Word(2, (2,)))
    sums = curve.exponent_sums()
    if sums != (q, p):
        raise AssertionError("lens curve has wrong winding numbers")
    beta = CutSystem(SurfaceModel(1), (curve.cyclic_reduce(),),
                     builder.inverse(), "beta")
    return GeometricHeegaardDiagram(1, beta, f"lens({p},{q})", (p, q))


def sphere_bundle_sum_diagram(g: int) -> GeometricHeegaardDiagram:
    """Heegaard diagram of the connected sum of g copies of S1 x S2:
    every curve is parallel to the matching a-type letter."""
    surface = SurfaceModel(g)
    curves = tuple(Word(surface.rank, (surface.a_letter(i),))
                   for i in range(1, g + 1))
    beta = CutSystem(surface, curves, identity_automorphism(surface.rank), "beta")
    return GeometricHeegaardDiagram(g, beta, f"#_{g}(S1xS2)", None)


def _alpha_curves(ctx: DoubledSurfaceContext) -> tuple[Word, ...]:
    g = ctx.input_genus
    return tuple(Word(ctx.rank, (ctx.side0_a(i),)) for i in range(1, g + 1)) + \
        tuple(Word(ctx.rank, (ctx.side1_a(i),)) for i in range(1, g + 1))


def _cocore_curves(ctx: DoubledSurfaceContext) -> tuple[Word, ...]:
    g = ctx.input_genus
    return tuple(Word(ctx.rank, (ctx.side0_a(i), -ctx.side1_a(i)))
                 for i in range(1, g + 1)) + \
        tuple(Word(ctx.rank, (ctx.side0_b(i), -ctx.side1_b(i)))
              for i in range(1, g + 1))


def _cocore_standardizer(ctx: DoubledSurfaceContext) -> FreeAutomorphism:
    g = ctx.input_genus
    images = {}
    inverse = {}
    for i in range(1, g + 1):
        images[ctx.side0_a(i)] = (ctx.side0_a(i), ctx.side1_a(i))
        inverse[ctx.side0_a(i)] = (ctx.side0_a(i), -ctx.side1_a(i))
        images[ctx.side0_b(i)] = (ctx.side0_b(i), ctx.side1_b(i))
        inverse[ctx.side0_b(i)] = (ctx.side0_b(i), -ctx.side1_b(i))
    return automorphism(ctx.rank, images, inverse)


def _standard_readings(systems: tuple[CutSystem, ...], closed: bool):
    """Readings cached on every constructed diagram: all sector pairs,
    the boundary pair, and every pair (1, j) feeding pi1."""
    s = len(systems)
    pairs = set()
    for i in range(1, s):
        pairs.add((i, i + 1))
    pairs.add((s, 1))
    for j in range(2, s + 1):
        pairs.add((1, j))
    out = []
    for i, j in sorted(pairs):
        words = tuple(read_against(c, systems[i - 1]) for c in systems[j - 1].curves)
        out.append(((i, j), words))
    return tuple(out)


def bisection_from_heegaard(h: GeometricHeegaardDiagram) -> MultisectionDiagram:
    """The bisection of (punctured 3-manifold) x I, as a bounded diagram
    with three systems on the doubled surface.

    System 1 (alpha) is the a-type basis of both sides; system 2 (beta)
    consists of the doubled cocores a0 a1^-1 and b0 b1^-1; system 3
    (gamma) carries the input curves on side 0 and their transported
    mirrors on side 1.  Claimed sector ranks are (g, g) at central genus
    2g, and the boundary pair presents the double of the input manifold.
    """
    g = h.genus
    ctx = DoubledSurfaceContext(g)
    surface = ctx.surface

    alpha = CutSystem(surface, _alpha_curves(ctx),
                      identity_automorphism(ctx.rank), "alpha")
    beta = CutSystem(surface, _cocore_curves(ctx), _cocore_standardizer(ctx), "beta")

    gamma_curves = tuple(ctx.embed_side0(c) for c in h.beta.curves) + \
        tuple(ctx.embed_side1(c) for c in h.beta.curves)
    sigma0 = block_automorphism([h.beta.standardizer,
                                 identity_automorphism(2 * g)])
    psi = compose(ctx.transport, compose(sigma0, ctx.transport))
    mirrored_std = {s + 2 * g for s in h.beta.standard_letters}
    gamma_std = compose(flip_letters(ctx.rank, mirrored_std),
                        compose(psi, sigma0))
    gamma = CutSystem(surface, gamma_curves, gamma_std, "gamma")

    systems = (alpha, beta, gamma)
    readings = _standard_readings(systems, closed=False)
    diagram = MultisectionDiagram(surface, systems, False, (g, g), readings)

    pair12 = diagram.reading_map[(1, 2)]
    for i in range(g):
        if not pair12[i].is_identity():
            raise AssertionError("doubled a-cocore should read trivially")
    for i in range(g):
        if pair12[g + i].letters != (i + 1, -(g + i + 1)):
            raise AssertionError("doubled b-cocore reading is not x y^-1")
    pair13 = diagram.reading_map[(1, 3)]
    base = h.relators()
    for j in range(g):
        if pair13[j].letters != base[j].letters:
            raise AssertionError("side-0 boundary reading differs from the input")
        mirrored = base[j].letter_inverse().shift(g, 2 * g)
        if pair13[g + j].letters != mirrored.letters:
            raise AssertionError("side-1 boundary reading is not the mirror")
    return diagram


def bisection_from_trisection(t: MultisectionDiagram,
                              drop: int) -> MultisectionDiagram:
    """Forget one sector of a closed three-system diagram: rotate so the
    dropped sector's pair becomes the boundary pair (3, 1)."""
    if not t.closed or len(t.systems) != 3:
        raise DiagramError("input must be a closed diagram with three systems")
    if drop not in (1, 2, 3):
        raise DiagramError("sector index must be 1, 2, or 3")
    order = [((i - drop - 1) % 3) for i in (1, 2, 3)]  # new position - 1 per old
    new_systems = [None, None, None]
    for old, new_idx in zip((1, 2, 3), order):
        new_systems[new_idx] = t.systems[old - 1]
    types = (t.claimed_types[drop % 3], t.claimed_types[(drop + 1) % 3])
    position = {old: new_idx + 1 for old, new_idx in zip((1, 2, 3), order)}
    readings = tuple(((position[i], position[j]), words)
                     for (i, j), words in t.readings)
    return MultisectionDiagram(t.surface, tuple(new_systems), False, types,
                               readings)


def _product_bisection_genus(d: MultisectionDiagram) -> int:
    """Input genus g of a diagram shaped like bisection_from_heegaard
    output (possibly doubled/extended); raises when the shape is absent."""
    if d.surface.genus % 2 != 0:
        raise DiagramError("central genus is odd; not a doubled surface")
    g = d.surface.genus // 2
    ctx = DoubledSurfaceContext(g)
    if tuple(c.letters for c in d.systems[0].curves) != \
            tuple(c.letters for c in _alpha_curves(ctx)):
        raise DiagramError("system 1 is not the doubled a-type basis")
    if tuple(c.letters for c in d.systems[1].curves) != \
            tuple(c.letters for c in _cocore_curves(ctx)):
        raise DiagramError("system 2 is not the doubled cocore system")
    return g


def double_bisection(b: MultisectionDiagram) -> MultisectionDiagram:
    """Close a product bisection by doubling: the fourth system is a
    parallel copy of the cocore system, so the double of the underlying
    4-manifold acquires a four-sector diagram with the same group."""
    if b.closed or len(b.systems) != 3:
        raise DiagramError("input must be a bounded three-system diagram")
    g = _product_bisection_genus(b)
    beta = b.systems[1]
    delta = CutSystem(b.surface, beta.curves, beta.standardizer, "delta")
    systems = b.systems + (delta,)
    readings = _standard_readings(systems, closed=True)
    diagram = MultisectionDiagram(b.surface, systems, True, (g, g, g, g), readings)
    if diagram.reading_map[(1, 4)] != diagram.reading_map[(1, 2)]:
        raise AssertionError("parallel copy must read identically to its source")
    before = abelianization(pi1_of_diagram(b))
    after = abelianization(pi1_of_diagram(diagram))
    if before != after:
        raise AssertionError("doubling changed the group invariants")
    return diagram


def insert_parallel_sectors(d: MultisectionDiagram, position: int,
                            count: int) -> MultisectionDiagram:
    """Insert parallel copies of a product-compatible system.  Each new
    interface pair reads empty words, so every inserted sector has
    handlebody rank equal to the full central genus; the group of the
    diagram does not change."""
    s = len(d.systems)
    if not 1 <= position <= (s if d.closed else s - 1):
        raise DiagramError("position does not index an interior system")
    if count < 0:
        raise DiagramError("count must be non-negative")
    if count == 0:
        return d
    g2 = d.surface.genus
    if g2 % 2 != 0:
        raise DiagramError("central genus is odd; not a doubled surface")
    ctx = DoubledSurfaceContext(g2 // 2)
    base = d.systems[position - 1]
    if tuple(c.letters for c in base.curves) != \
            tuple(c.letters for c in _cocore_curves(ctx)):
        raise DiagramError(
            f"system {position} is not product-compatible (doubled cocores)")

    copies = tuple(CutSystem(d.surface, base.curves, base.standardizer,
                             f"{base.label}_ins{k + 1}")
                   for k in range(count))
    systems = d.systems[:position] + copies + d.systems[position:]
    old_k = d.claimed_types[position - 1]
    types = d.claimed_types[:position - 1] + (g2,) * count + (old_k,) + \
        d.claimed_types[position:]
    readings = _standard_readings(systems, d.closed)
    out = MultisectionDiagram(d.surface, systems, d.closed, types, readings)
    if abelianization(pi1_of_diagram(out)) != abelianization(pi1_of_diagram(d)):
        raise AssertionError("sector insertion changed the group invariants")
    return out


@dataclass(frozen=True)
class GluePlan:
    """m copies of one product bisection, glued end to end along
    alternating boundary handlebodies, starting with the a-type side."""

    base: GeometricHeegaardDiagram
    copies: int
    cap: str | None = None  # None for a bounded result, "auto" to cap off

    def __post_init__(self):
        if self.copies < 1:
            raise ValueError("need at least one copy")
        if self.cap not in (None, "auto"):
            raise ValueError("cap must be None or 'auto'")

    @property
    def interface_labels(self) -> tuple[str, ...]:
        return tuple("H1" if i % 2 == 0 else "H3" for i in range(self.copies - 1))


def glue_bisections(plan: GluePlan) -> MultisectionDiagram:
    """Bounded diagram of the chain of plan.copies product bisections.

    Consecutive copies share their a-type interface, then their mirror
    interface, alternating; the shared system appears once.  The result
    has 2m sectors of rank g on the same genus-2g surface.
    """
    b = bisection_from_heegaard(plan.base)
    g = plan.base.genus
    alpha, beta, gamma = b.systems
    m = plan.copies

    def relabeled(system: CutSystem, label: str) -> CutSystem:
        return CutSystem(system.surface, system.curves, system.standardizer, label)

    systems = [relabeled(gamma, "gamma_1"), relabeled(beta, "beta_1"),
               relabeled(alpha, "alpha_1")]
    gamma_count, alpha_count = 1, 1
    for i in range(2, m + 1):
        systems.append(relabeled(beta, f"beta_{i}"))
        if i % 2 == 0:
            gamma_count += 1
            systems.append(relabeled(gamma, f"gamma_{gamma_count}"))
        else:
            alpha_count += 1
            systems.append(relabeled(alpha, f"alpha_{alpha_count}"))
    systems = tuple(systems)
    types = (g,) * (2 * m)
    readings = _standard_readings(systems, closed=False)
    out = MultisectionDiagram(b.surface, systems, False, types, readings)
    if abelianization(pi1_of_diagram(out)) != abelianization(pi1_of_diagram(b)):
        raise AssertionError("gluing changed the group invariants")
    return out


def boundary_invariants(d: MultisectionDiagram):
    """Abelian invariants of the boundary pair presentation of a bounded
    diagram (system s read against system 1, or the reverse when only
    that direction is readable; the invariants agree)."""
    if d.closed:
        raise DiagramError("closed diagrams have no boundary")
    s = len(d.systems)
    try:
        pres = presentation_of_pair(d, 1, s)
    except DiagramError:
        pres = presentation_of_pair(d, s, 1)
    return abelianization(pres)


def auto_cap(plan: GluePlan) -> MultisectionDiagram:
    """The capping bisection for a glued chain: another copy for an odd
    chain, the trivial-bundle bisection for an even one."""
    if plan.copies % 2 == 1:
        return bisection_from_heegaard(plan.base)
    return bisection_from_heegaard(sphere_bundle_sum_diagram(plan.base.genus))


def cap_off(d1: MultisectionDiagram, d2: MultisectionDiagram) -> MultisectionDiagram:
    """Close a bounded diagram with a bounded three-system cap whose
    boundary matches; the cap's outer systems are identified with the
    boundary systems of the chain by label order, and its middle system
    is spliced in."""
    if d1.closed or d2.closed:
        raise DiagramError("both diagrams must be bounded")
    if len(d2.systems) != 3:
        raise DiagramError("the cap must have exactly three systems")
    if d1.surface != d2.surface:
        raise DiagramError("central surfaces differ")
    left = boundary_invariants(d1)
    right = boundary_invariants(d2)
    if left != right:
        raise GlueMismatchError(
            f"boundary mismatch: {left.describe()} vs {right.describe()}",
            left, right)
    cap_mid = d2.systems[1]
    labels = {sys.label for sys in d1.systems}
    label = cap_mid.label if cap_mid.label not in labels else "beta_cap"
    spliced = CutSystem(d2.surface, cap_mid.curves, cap_mid.standardizer, label)
    systems = d1.systems + (spliced,)
    types = d1.claimed_types + (d2.claimed_types[1], d2.claimed_types[0])
    readings = _standard_readings(systems, closed=True)
    out = MultisectionDiagram(d1.surface, systems, True, types, readings)
    if abelianization(pi1_of_diagram(out)) != abelianization(pi1_of_diagram(d1)):
        raise AssertionError("capping changed the group invariants")
    return out


def merge_adjacent_sectors(d: MultisectionDiagram, interface: int,
                           budget: int = DEFAULT_TIETZE_BUDGET) -> MultisectionDiagram:
    """Remove an interface system, merging its two neighbouring sectors.

    The merge is certified, never silent: the removed system's curves
    must read as empty words or single dual letters against at least one
    neighbour (the parallel-curve condition), and the merged pair must
    simplify to a free presentation, whose rank becomes the merged
    sector's type.

    The group of the diagram is preserved when the removed system is
    parallel to a neighbour (empty readings).  In the single-letter case
    the merged interface pair is a doubled handlebody, the merged rank is
    the full central genus, and the group of the diagram can change;
    compare invariants before and after when that matters.
    """
    s = len(d.systems)
    if d.closed:
        if not 1 <= interface <= s:
            raise DiagramError("interface index out of range")
        prev = interface - 1 if interface > 1 else s
        nxt = interface + 1 if interface < s else 1
    else:
        if not 2 <= interface <= s - 1:
            raise DiagramError("only interior systems of a bounded diagram merge")
        prev, nxt = interface - 1, interface + 1

    families = {}
    for side in (prev, nxt):
        families[side] = tuple(read_against(c, d.systems[side - 1])
                               for c in d.systems[interface - 1].curves)
    if not any(all(len(w) <= 1 for w in fam) for fam in families.values()):
        shown = {side: [format_word(w) for w in fam]
                 for side, fam in families.items()}
        raise MergeRefusedError(
            f"interface {interface} is not parallel into either neighbour: {shown}",
            families)

    merged_words = tuple(read_against(c, d.systems[prev - 1])
                         for c in d.systems[nxt - 1].curves)
    merged_pres = GroupPresentation(d.surface.genus, merged_words)
    simplified = tietze_simplify(merged_pres, budget).presentation
    if simplified.relators:
        raise MergeRefusedError(
            "merged sector does not certify as a handlebody", families)
    merged_k = simplified.generator_count

    keep = [i for i in range(1, s + 1) if i != interface]
    systems = tuple(d.systems[i - 1] for i in keep)

    old_types = dict(zip(d.sector_pairs(), d.claimed_types))
    new_types = []
    count = len(keep)
    limit = count if d.closed else count - 1
    for idx in range(limit):
        a_old = keep[idx]
        b_old = keep[(idx + 1) % count]
        if (a_old, b_old) in old_types:
            new_types.append(old_types[(a_old, b_old)])
        else:
            new_types.append(merged_k)
    readings = _standard_readings(systems, d.closed)
    return MultisectionDiagram(d.surface, systems, d.closed, tuple(new_types),
                               readings)


def genus_bound_report(d: MultisectionDiagram) -> dict[str, object]:
    """Homology lower bound for the genus of any diagram of the same
    4-manifold with the same boundary: the boundary's first homology
    needs at least as many generators as the central genus provides.
    This is a bound, not a Heegaard-genus computation."""
    inv = boundary_invariants(d)
    bound = inv.minimal_generators
    return {
        "boundary_h1_rank": bound,
        "central_genus": d.surface.genus,
        "minimal_genus_certified": bound == d.surface.genus,
    }
