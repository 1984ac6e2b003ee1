"""Formal class expressions on a fixed moduli space and exact test pairings.

A :class:`ClassExpr` is a rational linear combination of decorated terms of
one common codimension on one ambient space: interior psi/kappa monomials,
one-node separating strata, and pushforwards along the irreducible gluing
map.  Pairing against a psi/kappa test monomial evaluates by pulling the
test back to the stratum factors (psi classes route to the factor carrying
their marking, each kappa index distributes to either factor) and splitting
into a product of two correlator-engine integrals with the node exponents
inserted.

Canonical text grammar for rendered terms (stable across releases):

    interior          coeff * psi_1^2 psi_3 kappa_2 kappa_1
    separating        coeff * Delta[g1,g2|{1,2}](psi*1^a, psi*2^b)
    irreducible glue  coeff * iota[g,2](psi*1^a, psi*2^b)

with `1` for the empty monomial and coefficients rendered as num/den.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cache import format_rational
from .engine import CorrelatorEngine, default_engine, is_stable, moduli_dim

ZERO = Fraction(0)


@dataclass(frozen=True)
class AmbientSpace:
    """A stable (g, n) moduli space; dimension 3g - 3 + n."""

    g: int
    n: int

    def __post_init__(self):
        if self.g < 0 or self.n < 0:
            raise ValueError("genus and marking count must be nonnegative")
        if not is_stable(self.g, self.n):
            raise ValueError("unstable moduli space")

    @property
    def dim(self) -> int:
        return moduli_dim(self.g, self.n)


@dataclass(frozen=True)
class TestMonomial:
    """A psi exponent vector plus a kappa partition, used as a pairing probe."""

    __test__ = False  # not a pytest collection target

    psi_exps: tuple[int, ...]
    kappa_parts: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return sum(self.psi_exps) + sum(self.kappa_parts)

    def render(self) -> str:
        pieces = []
        for i, e in enumerate(self.psi_exps, start=1):
            if e == 1:
                pieces.append(f"psi_{i}")
            elif e > 1:
                pieces.append(f"psi_{i}^{e}")
        for b in self.kappa_parts:
            pieces.append(f"kappa_{b}")
        return " ".join(pieces) if pieces else "1"


@dataclass(frozen=True)
class InteriorTerm:
    """A psi/kappa monomial supported on all of the ambient space."""

    psi_exps: tuple[int, ...]
    kappa_parts: tuple[int, ...] = ()

    @property
    def degree(self) -> int:
        return sum(self.psi_exps) + sum(self.kappa_parts)

    def render(self) -> str:
        return TestMonomial(self.psi_exps, self.kappa_parts).render()


@dataclass(frozen=True)
class SeparatingStratum:
    """A one-node separating stratum decorated with node and marking exponents.

    The first factor has genus ``g1`` and carries the markings in
    ``markings1`` (1-based labels); its node branch carries
    psi^{node_exps[0]}.  Kappa decorations never attach to stored strata;
    kappa enters only through test pullback.
    """

    g1: int
    g2: int
    markings1: frozenset[int]
    node_exps: tuple[int, int]
    marking_exps: tuple[int, ...]

    def __post_init__(self):
        if min(self.node_exps) < 0 or any(e < 0 for e in self.marking_exps):
            raise ValueError("negative decoration exponent")
        n = len(self.marking_exps)
        if not all(1 <= i <= n for i in self.markings1):
            raise ValueError("marking label outside the ambient marking set")
        n1 = len(self.markings1)
        if not (is_stable(self.g1, n1 + 1) and is_stable(self.g2, (n - n1) + 1)):
            raise ValueError("unstable glued factor")

    @property
    def degree(self) -> int:
        return 1 + sum(self.node_exps) + sum(self.marking_exps)

    def markings2(self) -> frozenset[int]:
        return frozenset(range(1, len(self.marking_exps) + 1)) - self.markings1

    def swapped(self) -> "SeparatingStratum":
        """The same stratum with the two factors listed in the other order."""
        return SeparatingStratum(
            self.g2,
            self.g1,
            self.markings2(),
            (self.node_exps[1], self.node_exps[0]),
            self.marking_exps,
        )

    def render(self) -> str:
        labels = "{" + ",".join(str(i) for i in sorted(self.markings1)) + "}"
        a, b = self.node_exps
        body = f"Delta[{self.g1},{self.g2}|{labels}](psi*1^{a}, psi*2^{b})"
        deco = TestMonomial(self.marking_exps).render()
        return body if deco == "1" else f"{deco} {body}"


@dataclass(frozen=True)
class NonSeparatingPushforward:
    """Pushforward along the gluing of two markings into one node.

    The source space is (source_g, n + 2) with the two glued markings
    carrying psi^{node_exps}; the term lives on the (source_g + 1, n)
    ambient space.
    """

    source_g: int
    node_exps: tuple[int, int]
    marking_exps: tuple[int, ...]

    def __post_init__(self):
        if min(self.node_exps) < 0 or any(e < 0 for e in self.marking_exps):
            raise ValueError("negative decoration exponent")
        if not is_stable(self.source_g, len(self.marking_exps) + 2):
            raise ValueError("unstable gluing source")

    @property
    def degree(self) -> int:
        return 1 + sum(self.node_exps) + sum(self.marking_exps)

    def render(self) -> str:
        a, b = self.node_exps
        body = f"iota[{self.source_g},{len(self.marking_exps) + 2}](psi*1^{a}, psi*2^{b})"
        deco = TestMonomial(self.marking_exps).render()
        return body if deco == "1" else f"{deco} {body}"


Term = InteriorTerm | SeparatingStratum | NonSeparatingPushforward


@dataclass(frozen=True)
class ClassExpr:
    """A rational combination of same-codimension terms on one ambient space."""

    ambient: AmbientSpace
    degree: int
    terms: tuple[tuple[Fraction, Term], ...]

    def __post_init__(self):
        for coeff, term in self.terms:
            if term.degree != self.degree:
                raise ValueError(
                    f"term degree {term.degree} differs from expression degree {self.degree}"
                )
            n_term = _term_marking_count(term)
            if n_term != self.ambient.n:
                raise ValueError("term marking count differs from the ambient space")
            if isinstance(term, SeparatingStratum) and term.g1 + term.g2 != self.ambient.g:
                raise ValueError("stratum genera do not add up to the ambient genus")
            if isinstance(term, NonSeparatingPushforward) and term.source_g + 1 != self.ambient.g:
                raise ValueError("gluing source genus does not match the ambient genus")

    @classmethod
    def make(cls, ambient: AmbientSpace, degree: int, terms) -> "ClassExpr":
        return cls(ambient, degree, tuple((Fraction(c), t) for c, t in terms))

    @classmethod
    def zero(cls, ambient: AmbientSpace, degree: int) -> "ClassExpr":
        return cls(ambient, degree, ())

    def render(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            f"{format_rational(coeff)} * {term.render()}" for coeff, term in self.terms
        )


def _term_marking_count(term: Term) -> int:
    return len(term.psi_exps) if isinstance(term, InteriorTerm) else len(term.marking_exps)


# ----------------------------------------------------------------------
# enumeration of test monomials
# ----------------------------------------------------------------------


def _exponent_vectors(total: int, n: int):
    """All length-n vectors of nonnegative integers with the given sum,
    in descending lexicographic order."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for tail in _exponent_vectors(total - first, n - 1):
            yield (first,) + tail


def _partitions(total: int, max_part: int | None = None):
    """Partitions into parts >= 1, parts descending, partitions in
    descending lexicographic order."""
    if total == 0:
        yield ()
        return
    if max_part is None or max_part > total:
        max_part = total
    for first in range(max_part, 0, -1):
        for tail in _partitions(total - first, first):
            yield (first,) + tail


def enumerate_tests(ambient: AmbientSpace, degree: int) -> list[TestMonomial]:
    """All psi/kappa test monomials of the given total degree, in a fixed
    deterministic order (psi-heavy first, then by descending lex)."""
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    out = []
    for kappa_degree in range(degree + 1):
        psi_degree = degree - kappa_degree
        for psi in _exponent_vectors(psi_degree, ambient.n):
            for kappa in _partitions(kappa_degree):
                out.append(TestMonomial(psi, kappa))
    return out


# ----------------------------------------------------------------------
# pullback and pairing
# ----------------------------------------------------------------------


def pullback_test_to_separating(t: TestMonomial, s: SeparatingStratum):
    """Expand the restriction of a test monomial to a one-node stratum.

    Marking psi classes route to the factor carrying the marking; each
    kappa index restricts to (kappa on factor 1) + (kappa on factor 2), so
    a kappa multiset expands multinomially.  Returns a list of
    (factor-1 monomial, factor-2 monomial, multiplicity) with factor psi
    exponents listed by ascending original marking label (node excluded).
    """
    n = len(s.marking_exps)
    if len(t.psi_exps) != n:
        raise ValueError("marking referenced by the test is absent from the ambient space")
    left_labels = sorted(s.markings1)
    right_labels = sorted(s.markings2())
    psi1 = tuple(t.psi_exps[i - 1] for i in left_labels)
    psi2 = tuple(t.psi_exps[i - 1] for i in right_labels)
    parts = t.kappa_parts
    expansion: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
    for mask in range(1 << len(parts)):
        k1 = tuple(sorted((p for i, p in enumerate(parts) if not mask >> i & 1), reverse=True))
        k2 = tuple(sorted((p for i, p in enumerate(parts) if mask >> i & 1), reverse=True))
        expansion[(k1, k2)] = expansion.get((k1, k2), 0) + 1
    return [
        (TestMonomial(psi1, k1), TestMonomial(psi2, k2), Fraction(mult))
        for (k1, k2), mult in expansion.items()
    ]


def _pair_interior(term: InteriorTerm, t: TestMonomial, ambient: AmbientSpace,
                   engine: CorrelatorEngine) -> Fraction:
    merged = tuple(a + b for a, b in zip(term.psi_exps, t.psi_exps))
    return engine.psi_kappa_integral(ambient.g, merged, term.kappa_parts + t.kappa_parts)


def _pair_separating(term: SeparatingStratum, t: TestMonomial,
                     engine: CorrelatorEngine) -> Fraction:
    left_labels = sorted(term.markings1)
    right_labels = sorted(term.markings2())
    deco1 = tuple(term.marking_exps[i - 1] for i in left_labels)
    deco2 = tuple(term.marking_exps[i - 1] for i in right_labels)
    a, b = term.node_exps
    total = ZERO
    for t1, t2, mult in pullback_test_to_separating(t, term):
        d1 = tuple(x + y for x, y in zip(deco1, t1.psi_exps)) + (a,)
        f1 = engine.psi_kappa_integral(term.g1, d1, t1.kappa_parts)
        if not f1:
            continue
        d2 = tuple(x + y for x, y in zip(deco2, t2.psi_exps)) + (b,)
        f2 = engine.psi_kappa_integral(term.g2, d2, t2.kappa_parts)
        total += mult * f1 * f2
    return total


def _pair_nonseparating(term: NonSeparatingPushforward, t: TestMonomial,
                        engine: CorrelatorEngine) -> Fraction:
    # kappa test classes pull back unchanged along the gluing; psi test
    # classes are carried by the surviving markings
    d = tuple(x + y for x, y in zip(term.marking_exps, t.psi_exps)) + term.node_exps
    return engine.psi_kappa_integral(term.source_g, d, t.kappa_parts)


def pair_with_test(expr: ClassExpr, t: TestMonomial,
                   engine: CorrelatorEngine | None = None) -> Fraction:
    """Exact pairing of a class expression against a test monomial.

    Returns 0 whenever the degrees are not complementary (the trivial
    pairing); the value is linear in the expression.
    """
    engine = engine or default_engine()
    if len(t.psi_exps) != expr.ambient.n:
        raise ValueError("marking referenced by the test is absent from the ambient space")
    if expr.degree + t.degree != expr.ambient.dim:
        return ZERO
    total = ZERO
    for coeff, term in expr.terms:
        if isinstance(term, InteriorTerm):
            value = _pair_interior(term, t, expr.ambient, engine)
        elif isinstance(term, SeparatingStratum):
            value = _pair_separating(term, t, engine)
        else:
            value = _pair_nonseparating(term, t, engine)
        total += coeff * value
    return total


def pair_pushforward_irreducible(expr: ClassExpr, kappa,
                                 engine: CorrelatorEngine | None = None) -> Fraction:
    """Pair the irreducible-gluing pushforward of a two-marking expression
    against a kappa monomial on the unmarked target.

    By the projection formula (kappa classes pull back unchanged along the
    gluing), this is the integral of the expression times the kappa
    monomial over the source space.  Returns 0 on degree mismatch.
    """
    if expr.ambient.n != 2:
        raise ValueError("pushforward source must carry exactly two markings")
    kappa = tuple(sorted((int(x) for x in kappa), reverse=True))
    g = expr.ambient.g
    if expr.degree + 1 + sum(kappa) != moduli_dim(g + 1, 0):
        return ZERO
    return pair_with_test(expr, TestMonomial((0, 0), kappa), engine)
