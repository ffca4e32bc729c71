"""Multivariate division, S-polynomials and Buchberger's algorithm.

The inner loops work on plain term dicts ``{monomial: coeff}``; the public
functions accept and return :class:`~evolalg.poly.Polynomial`.
"""

from __future__ import annotations

import heapq
from typing import Sequence

from .linalg import BudgetExceeded
from .poly import (
    Ideal,
    MonomialOrder,
    Polynomial,
    PolynomialError,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

DEFAULT_MAX_STEPS = 1_000_000


def _check_ring(polys: Sequence[Polynomial]):
    if not polys:
        return
    v, f = polys[0].variables, polys[0].field
    for p in polys:
        if p.variables != v or p.field != f:
            raise PolynomialError("polynomials over different rings")


def _order_for(order: MonomialOrder | str | None, variables) -> MonomialOrder:
    if order is None:
        return MonomialOrder("degrevlex", variables)
    if isinstance(order, str):
        return MonomialOrder(order, variables)
    if order.variables and order.variables != tuple(variables):
        raise PolynomialError("monomial order is over a different variable list")
    return order if order.variables else order.with_variables(variables)


_FIELD_BITS = 16
_MAX_EXP = (1 << (_FIELD_BITS - 1)) - 1


class _Packed:
    """Exponent vectors packed into one int (16 bits per variable, top bit as guard).

    ``a`` divides ``b`` iff subtracting field-wise never borrows, i.e.
    ``((b | guard) - a) & guard == guard``.
    """

    def __init__(self, nvars: int):
        self.guard = sum(1 << (_FIELD_BITS * i + _FIELD_BITS - 1) for i in range(nvars))

    def pack(self, m: tuple) -> int:
        out = 0
        for i, e in enumerate(m):
            if e > _MAX_EXP:
                raise PolynomialError(f"exponent {e} too large")
            out |= e << (_FIELD_BITS * i)
        return out

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g


class _Codec:
    """Monomials as ints: the int order is the monomial order and products are sums.

    Each exponent sits in a 16-bit field whose top bit stays clear.  For lex the
    exponent vector is read as digits, first variable most significant.  For
    degrevlex the code is ``deg·2^(16n) − E`` where ``E`` holds the exponents
    with the last variable most significant: a larger degree wins, and at equal
    degree a smaller exponent in the last differing variable wins.
    """

    def __init__(self, kind: str, nvars: int):
        self.lex = kind == "lex"
        self.top = _FIELD_BITS * nvars
        self.shift = [_FIELD_BITS * (nvars - 1 - i) if self.lex else _FIELD_BITS * i for i in range(nvars)]
        self.guard = sum(1 << (sh + _FIELD_BITS - 1) for sh in self.shift)
        self.fmask = (1 << _FIELD_BITS) - 1

    def encode(self, m: tuple) -> int:
        E = 0
        for sh, e in zip(self.shift, m):
            if e > _MAX_EXP:
                raise PolynomialError(f"exponent {e} too large")
            E |= e << sh
        if self.lex:
            return E
        d = sum(m)
        if d > _MAX_EXP:
            raise PolynomialError(f"degree {d} too large")
        return (d << self.top) - E

    def exponents(self, k: int) -> int:
        """The exponent fields ``E`` of a code."""
        if self.lex:
            return k
        return ((-((-k) >> self.top)) << self.top) - k

    def decode(self, k: int) -> tuple:
        E = self.exponents(k)
        fm = self.fmask
        return tuple((E >> sh) & fm for sh in self.shift)


class _Reducer:
    """Reduction against a growing list of basis entries, on int-coded monomials.

    Divisor lookup uses one bitmask per (variable, exponent): bit ``k`` of
    ``le[v][e]`` is set when entry ``k`` has exponent at most ``e`` in variable
    ``v``.  The entries whose leading monomial divides ``m`` are the AND of
    ``le[v][m_v]`` over all variables, and the first of them is the lowest bit.
    The AND over each block of variables is memoised by the block's exponents,
    which repeat far more often than whole monomials.
    """

    BLOCK = 9

    def __init__(self, field, order: MonomialOrder, nvars: int):
        self.field = field
        self.key = order.key
        self.codec = _Codec(order.kind, nvars)
        self.prime = getattr(field, "p", None) if field.is_finite else None
        # entries: (lm, lc, terms, coded terms, coded lm)
        self.basis: list[tuple[tuple, object, dict, dict, int]] = []
        self.le: list[list[int]] = [[] for _ in range(nvars)]
        self.blocks = []
        for lo in range(0, nvars, self.BLOCK):
            hi = min(lo + self.BLOCK, nvars)
            low = min(self.codec.shift[lo], self.codec.shift[hi - 1])
            self.blocks.append((lo, hi, low, (1 << (_FIELD_BITS * (hi - lo))) - 1))
        self._memo: list[dict] = [{} for _ in self.blocks]

    @property
    def everything(self) -> int:
        return (1 << len(self.basis)) - 1

    def encode_terms(self, terms: dict) -> dict:
        enc = self.codec.encode
        return {enc(m): c for m, c in terms.items()}

    def decode_terms(self, coded: dict) -> dict:
        dec = self.codec.decode
        return {dec(k): c for k, c in coded.items()}

    def add(self, terms: dict):
        coded = self.encode_terms(terms)
        klm = max(coded)
        lm = self.codec.decode(klm)
        k = len(self.basis)
        self.basis.append((lm, terms[lm], terms, coded, klm))
        earlier = (1 << k) - 1
        bit = 1 << k
        for v, x in enumerate(lm):
            levels = self.le[v]
            while len(levels) < x:
                levels.append(earlier)  # every earlier entry has a smaller exponent here
            for e in range(x, len(levels)):
                levels[e] |= bit
        for memo in self._memo:
            memo.clear()

    def _block_mask(self, b: int, E: int) -> int:
        lo, hi, low, bmask = self.blocks[b]
        mask = self.everything
        shift, fm = self.codec.shift, self.codec.fmask
        for v in range(lo, hi):
            levels = self.le[v]
            e = (E >> shift[v]) & fm
            if e < len(levels):
                mask &= levels[e]
        self._memo[b][(E >> low) & bmask] = mask
        return mask

    def first_divisor(self, k: int, active: int) -> int | None:
        """Index of the first entry in ``active`` (a bitmask) whose leading monomial divides code ``k``."""
        E = self.codec.exponents(k)
        cand = active
        for b, (_, _, low, bmask) in enumerate(self.blocks):
            mask = self._memo[b].get((E >> low) & bmask)
            if mask is None:
                mask = self._block_mask(b, E)
            cand &= mask
            if not cand:
                return None
        return (cand & -cand).bit_length() - 1

    def _axpy(self, p: dict, coef, shift: int, g: dict, skip: int):
        """``p -= coef · x^shift · g`` over every term of ``g`` except the code ``skip``."""
        f, P = self.field, self.prime
        guard = self.codec.guard if self.codec.lex else 0
        for t, c in g.items():
            if t == skip:
                continue
            mm = t + shift
            if guard and mm & guard:
                raise PolynomialError("exponent overflow during reduction")
            if P:
                v = (p.get(mm, 0) - coef * c) % P
            else:
                v = f.sub(p.get(mm, f.zero), f.mul(coef, c))
            if v:
                p[mm] = v
            else:
                p.pop(mm, None)

    def reduce_coded(self, coded: dict, active: int | None = None) -> dict:
        """Full reduction of coded terms by the entries selected by the bitmask ``active`` (default: all)."""
        f = self.field
        if active is None:
            active = self.everything
        p = dict(coded)
        r: dict = {}
        while p:
            k = max(p)
            c = p.pop(k)
            pos = self.first_divisor(k, active) if active else None
            if pos is None:
                r[k] = c
            else:
                _, lc, _, g, klm = self.basis[pos]
                # the leading terms cancel exactly
                self._axpy(p, f.div(c, lc), k - klm, g, klm)
        return r

    def normal_form(self, terms: dict, active: int | None = None) -> dict:
        return self.decode_terms(self.reduce_coded(self.encode_terms(terms), active))

    def spoly_coded(self, i: int, j: int) -> dict:
        """The S-polynomial of entries ``i`` and ``j``, coded."""
        f = self.field
        la, lca, _, A, ka = self.basis[i]
        lb, lcb, _, B, kb = self.basis[j]
        klcm = self.codec.encode(mono_lcm(la, lb))
        out: dict = {}
        self._axpy(out, f.neg(f.inv(lca)), klcm - ka, A, ka)
        self._axpy(out, f.inv(lcb), klcm - kb, B, kb)
        return out


def _monic(terms: dict, field, key) -> dict:
    lm = max(terms, key=key)
    inv = field.inv(terms[lm])
    return {m: field.mul(inv, c) for m, c in terms.items()}


def _spoly_terms(a: dict, b: dict, field, key) -> dict:
    la = max(a, key=key)
    lb = max(b, key=key)
    lcm = mono_lcm(la, lb)
    sa, sb = mono_div(lcm, la), mono_div(lcm, lb)
    ca, cb = field.inv(a[la]), field.inv(b[lb])
    out: dict = {}
    for m, c in a.items():
        out[mono_mul(m, sa)] = field.mul(ca, c)
    for m, c in b.items():
        mm = mono_mul(m, sb)
        v = field.sub(out.get(mm, field.zero), field.mul(cb, c))
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return {m: c for m, c in out.items() if c}


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder | str | None = None) -> Polynomial:
    """Remainder of ``f`` under full multivariate division by ``basis`` (first divisor wins)."""
    _check_ring([f, *basis])
    order = _order_for(order, f.variables)
    red = _Reducer(f.field, order, len(f.variables))
    for g in basis:
        if not g:
            raise PolynomialError("division by the zero polynomial")
        red.add(g.terms)
    return Polynomial._raw(red.normal_form(f.terms), f.variables, f.field)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder | str | None = None) -> Polynomial:
    """``lcm/LT(f)·f − lcm/LT(g)·g`` with leading coefficients normalised to 1."""
    _check_ring([f, g])
    if not f or not g:
        raise PolynomialError("S-polynomial of the zero polynomial")
    order = _order_for(order, f.variables)
    return Polynomial._raw(_spoly_terms(f.terms, g.terms, f.field, order.key), f.variables, f.field)


def _update(lms: list, G: set, B: set, ih: int, pair_lcm: dict, pk: _Packed) -> tuple[set, set]:
    """Gebauer–Möller installation of the new basis element ``ih``.

    New pairs whose lcm is a multiple of another new pair's lcm are dropped
    (chain criterion), as are pairs with coprime leading monomials (product
    criterion); old pairs made redundant by ``ih`` are removed, and basis
    elements whose leading monomial ``lm(ih)`` divides leave the active set.
    ``pair_lcm`` caches ``(lcm, packed lcm)`` of every pair ever created.
    """
    h = lms[ih]
    ph = pk.pack(h)
    div = pk.divides
    lh = {}
    for g in G:
        l = mono_lcm(h, lms[g])
        lh[g] = (l, pk.pack(l))
    # Chain criterion: a new pair survives iff its lcm is minimal under
    # divisibility among all candidate lcms.  Among pairs sharing a minimal
    # lcm only the lowest index is kept, and none if a coprime pair has it.
    minimal: list[int] = []
    for pl, l in sorted({v[1]: v[0] for v in lh.values()}.items(), key=lambda kv: sum(kv[1])):
        if not any(div(m, pl) for m in minimal):
            minimal.append(pl)
    minimal_set = set(minimal)
    taken: set[int] = set()
    D: list[int] = []
    for g in sorted(G):
        if mono_coprime(h, lms[g]):
            taken.add(lh[g][1])
    for g in sorted(G):
        pl = lh[g][1]
        if mono_coprime(h, lms[g]):
            D.append(g)
        elif pl in minimal_set and pl not in taken:
            taken.add(pl)
            D.append(g)
    B_new = set()
    for pair in B:
        lij, pij = pair_lcm[pair]
        if div(ph, pij):
            i, j = pair
            li = lh[i][0] if i in lh else mono_lcm(h, lms[i])
            lj = lh[j][0] if j in lh else mono_lcm(h, lms[j])
            if li != lij and lj != lij:
                continue
        B_new.add(pair)
    for g in D:
        if not mono_coprime(h, lms[g]):
            pair_lcm[(g, ih)] = lh[g]
            B_new.add((g, ih))
    G_new = {g for g in G if not mono_divides(h, lms[g])}
    G_new.add(ih)
    return G_new, B_new


def buchberger(
    ideal: Ideal | Sequence[Polynomial],
    order: MonomialOrder | str | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    stats: dict | None = None,
) -> list[Polynomial]:
    """A (not necessarily reduced) Gröbner basis of ``ideal``.

    Pairs are processed smallest-lcm first and pruned with the Gebauer–Möller
    criteria.  ``max_steps`` caps the number of S-pair reductions and raises
    :class:`BudgetExceeded` when hit.
    """
    gens = list(ideal.generators) if isinstance(ideal, Ideal) else list(ideal)
    gens = [g for g in gens if g]
    if not gens:
        return []
    _check_ring(gens)
    variables, field = gens[0].variables, gens[0].field
    order = _order_for(order, variables)
    key = order.key
    red = _Reducer(field, order, len(variables))
    lms: list[tuple] = []
    G: set[int] = set()
    B: set[tuple[int, int]] = set()
    heap: list[tuple] = []
    pair_lcm: dict[tuple[int, int], tuple] = {}
    pk = _Packed(len(variables))
    active = 0

    def install(terms):
        nonlocal G, B, active
        terms = _monic(terms, field, key)
        k = len(red.basis)
        red.add(terms)
        lms.append(red.basis[-1][0])
        G, B_new = _update(lms, G, B, k, pair_lcm, pk)
        active = sum(1 << i for i in G)
        for i, j in B_new - B:
            heapq.heappush(heap, (key(pair_lcm[(i, j)][0]), i, j))
        B = B_new

    for g in sorted(gens, key=lambda g: key(max(g.terms, key=key))):
        h = red.normal_form(g.terms, active)
        if h:
            install(h)
    steps = 0
    while B:
        _, i, j = heapq.heappop(heap)
        if (i, j) not in B:
            continue
        B.discard((i, j))
        steps += 1
        if steps > max_steps:
            raise BudgetExceeded(f"Buchberger exceeded {max_steps} pair reductions")
        h = red.reduce_coded(red.spoly_coded(i, j), active)
        if h:
            install(red.decode_terms(h))
    if stats is not None:
        stats.update(pair_reductions=steps, basis_size=len(G), polynomials=len(red.basis))
    return [Polynomial._raw(red.basis[i][2], variables, field) for i in sorted(G)]


def reduce_basis(
    G: Sequence[Polynomial],
    order: MonomialOrder | str | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    stats: dict | None = None,
) -> list[Polynomial]:
    """The reduced Gröbner basis of the ideal spanned by ``G``: minimal, monic, inter-reduced, sorted.

    ``G`` is completed first if it is not already a Gröbner basis (a no-op
    pass of S-pair checks when it is), so the output depends only on the
    ideal and the order.
    """
    G = [g for g in G if g]
    if not G:
        return []
    _check_ring(G)
    variables, field = G[0].variables, G[0].field
    order = _order_for(order, variables)
    key = order.key
    polys = [t.terms for t in buchberger(G, order, max_steps, stats)]
    # minimality: drop elements whose leading monomial is divisible by another's
    lead = [max(t, key=key) for t in polys]
    keep = []
    for i, lm in enumerate(lead):
        dominated = False
        for j, lm2 in enumerate(lead):
            if i == j:
                continue
            if mono_divides(lm2, lm) and (lm2 != lm or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(polys[i])
    # inter-reduce each element against the others (leading monomials are fixed)
    # (a tail monomial is below its own leading monomial, so including the
    # element itself in the reducer is harmless)
    red = _Reducer(field, order, len(variables))
    for u in keep:
        red.add(u)
    out = []
    for t in keep:
        lm = max(t, key=key)
        tail = {m: c for m, c in t.items() if m != lm}
        reduced = red.normal_form(tail)
        reduced[lm] = t[lm]
        out.append(reduced)
    out.sort(key=lambda t: key(max(t, key=key)), reverse=True)
    return [Polynomial._raw(t, variables, field) for t in out]


def groebner_basis(
    ideal: Ideal | Sequence[Polynomial],
    order: MonomialOrder | str | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
    stats: dict | None = None,
) -> list[Polynomial]:
    """The reduced Gröbner basis of ``ideal`` (empty list for the zero ideal)."""
    gens = list(ideal.generators) if isinstance(ideal, Ideal) else list(ideal)
    return reduce_basis(gens, order, max_steps, stats)


def is_groebner_basis(G: Sequence[Polynomial], order: MonomialOrder | str | None = None) -> bool:
    """Buchberger's criterion: every S-polynomial reduces to zero."""
    G = [g for g in G if g]
    if not G:
        return True
    _check_ring(G)
    order = _order_for(order, G[0].variables)
    red = _Reducer(G[0].field, order, len(G[0].variables))
    for g in G:
        red.add(g.terms)
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            if red.reduce_coded(red.spoly_coded(i, j)):
                return False
    return True
