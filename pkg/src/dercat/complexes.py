"""Bounded complexes of presheaves: cones, shifts, homology, projective
resolutions, Hom complexes, Ext groups and homotopy solving.

This is the concrete model of the bounded derived category: morphisms are
chain maps out of a fixed projective resolution of the source, modulo
homotopy.  Sign conventions: (ΣX)^p = X^{p+1} with d_{ΣX} = −d_X, and the
cone differential is [[−d_X, 0], [f, d_Y]].
"""

from functools import lru_cache

from . import linalg
from .linalg import Matrix
from . import diagram
from . import presheaf as ps


class Complex:
    """A bounded complex of presheaves over a common shape.

    terms maps degrees to presheaves, diffs maps p to d^p : X^p → X^{p+1}.
    Degrees outside [lo, hi] read as zero; leading/trailing zero terms are
    trimmed at construction so equal complexes compare equal.
    """

    __slots__ = ("field", "shape", "lo", "hi", "terms", "diffs", "_hash")

    def __init__(self, field, shape, terms, diffs, validate=False):
        degrees = sorted(p for p, t in terms.items() if not t.is_zero())
        if degrees:
            self.lo, self.hi = degrees[0], degrees[-1]
        else:
            self.lo, self.hi = 0, -1
        self.field = field
        self.shape = shape
        self.terms = {p: terms[p] for p in terms
                      if self.lo <= p <= self.hi}
        for p in range(self.lo, self.hi + 1):
            if p not in self.terms:
                self.terms[p] = ps.zero_presheaf(field, shape)
        self.diffs = {p: diffs[p] for p in diffs
                      if self.lo <= p < self.hi}
        self._hash = None
        if validate:
            self.validate()

    def term(self, p):
        t = self.terms.get(p)
        return t if t is not None else ps.zero_presheaf(self.field, self.shape)

    def diff(self, p):
        d = self.diffs.get(p)
        return d if d is not None else ps.zero_map(self.term(p), self.term(p + 1))

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def is_zero(self):
        return self.lo > self.hi

    def validate(self):
        for p in self.degrees():
            t = self.term(p)
            if t.shape != self.shape or t.field != self.field:
                raise ValueError("term at %d lives in the wrong category" % p)
            t.validate()
        for p in self.degrees():
            d = self.diff(p)
            if d.source != self.term(p) or d.target != self.term(p + 1):
                raise ValueError("differential at %d has wrong endpoints" % p)
            d.validate()
            if not self.diff(p + 1).compose(d).is_zero():
                raise ValueError("d² ≠ 0 at degree %d" % p)
        return self

    def _data(self):
        return (self.field, self.shape, self.lo, self.hi,
                tuple(self.term(p) for p in self.degrees()),
                tuple(self.diff(p) for p in range(self.lo, self.hi)))

    def __eq__(self, other):
        return isinstance(other, Complex) and self._data() == other._data()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._data())
        return self._hash

    def __repr__(self):
        return "Complex(degrees [%d,%d])" % (self.lo, self.hi)


class ChainMap:
    """A degreewise natural map commuting with the differentials."""

    __slots__ = ("source", "target", "comps", "_hash")

    def __init__(self, source, target, comps, validate=False):
        if source.shape != target.shape or source.field != target.field:
            raise ValueError("endpoints live in different categories")
        self.source = source
        self.target = target
        self.comps = {p: m for p, m in comps.items() if not _trivial(m)}
        self._hash = None
        if validate:
            self.validate()

    def comp(self, p):
        m = self.comps.get(p)
        if m is not None:
            return m
        return ps.zero_map(self.source.term(p), self.target.term(p))

    def validate(self):
        for p, m in self.comps.items():
            if m.source != self.source.term(p) or m.target != self.target.term(p):
                raise ValueError("component at %d has wrong endpoints" % p)
            m.validate()
        for p in range(min(self.source.lo, self.target.lo) - 1,
                       max(self.source.hi, self.target.hi) + 1):
            lhs = self.comp(p + 1).compose(self.source.diff(p))
            rhs = self.target.diff(p).compose(self.comp(p))
            if lhs != rhs:
                raise ValueError("does not commute with d at degree %d" % p)
        return self

    def compose(self, other):
        if other.target != self.source:
            raise ValueError("chain maps not composable")
        lo = max(self.source.lo, other.source.lo)
        hi = min(self.source.hi, other.source.hi)
        return ChainMap(other.source, self.target,
                        {p: self.comp(p).compose(other.comp(p))
                         for p in range(lo, hi + 1)})

    def __add__(self, other):
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target,
                        {p: self.comp(p) + other.comp(p) for p in degs})

    def __sub__(self, other):
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target,
                        {p: self.comp(p) - other.comp(p) for p in degs})

    def __neg__(self):
        return ChainMap(self.source, self.target,
                        {p: -m for p, m in self.comps.items()})

    def scale(self, c):
        return ChainMap(self.source, self.target,
                        {p: m.scale(c) for p, m in self.comps.items()})

    def is_zero(self):
        return all(m.is_zero() for m in self.comps.values())

    def _data(self):
        return (self.source, self.target, tuple(sorted(
            (p, m) for p, m in self.comps.items() if not m.is_zero())))

    def __eq__(self, other):
        return isinstance(other, ChainMap) and self._data() == other._data()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._data())
        return self._hash


class Homotopy:
    """Degreewise maps h^p : X^p → Y^{p−1} witnessing f − g = dh + hd."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source, target, comps):
        self.source = source
        self.target = target
        self.comps = {p: m for p, m in comps.items() if not _trivial(m)}

    def comp(self, p):
        m = self.comps.get(p)
        if m is not None:
            return m
        return ps.zero_map(self.source.term(p), self.target.term(p - 1))

    def boundary(self):
        """The nullhomotopic chain map dh + hd it bounds."""
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        comps = {}
        for p in range(lo, hi + 1):
            comps[p] = self.target.diff(p - 1).compose(self.comp(p)) + \
                self.comp(p + 1).compose(self.source.diff(p))
        return ChainMap(self.source, self.target, comps)

    def witnesses(self, f, g):
        return (self.boundary() == f - g)


def _trivial(m):
    return m.source.total_dim() == 0 and m.target.total_dim() == 0


# --- constructors -----------------------------------------------------------


def zero_complex(field, shape):
    return Complex(field, shape, {}, {})


def stalk(f, degree=0):
    """The presheaf f viewed as a one-term complex."""
    return Complex(f.field, f.shape, {degree: f}, {})


def stalk_map(phi, degree=0):
    return ChainMap(stalk(phi.source, degree), stalk(phi.target, degree),
                    {degree: phi})


def identity_chain_map(x):
    return ChainMap(x, x, {p: ps.identity_map(x.term(p)) for p in x.degrees()})


def zero_chain_map(x, y):
    return ChainMap(x, y, {})


def shift(x, n=1):
    """(Σ^n X)^p = X^{p+n}, differential scaled by (−1)^n."""
    sgn = x.field.of_int(-1 if n % 2 else 1)
    terms = {p - n: x.term(p) for p in x.degrees()}
    diffs = {p - n: x.diff(p).scale(sgn) for p in range(x.lo, x.hi)}
    return Complex(x.field, x.shape, terms, diffs)


def shift_map(f, n=1):
    return ChainMap(shift(f.source, n), shift(f.target, n),
                    {p - n: m for p, m in f.comps.items()})


def direct_sum_complex(x, y):
    """X ⊕ Y with the block-diagonal differential; returns the complex only."""
    lo, hi = min(x.lo, y.lo), max(x.hi, y.hi)
    terms, diffs = {}, {}
    for p in range(lo, hi + 1):
        terms[p] = ps.direct_sum(x.term(p), y.term(p))
    for p in range(lo, hi):
        diffs[p] = ps.PresheafMap(terms[p], terms[p + 1], {
            o: linalg.direct_sum(x.diff(p).comp(o), y.diff(p).comp(o))
            for o in x.shape.objects})
    return Complex(x.field, x.shape, terms, diffs)


def cone(f):
    """Mapping cone: C^p = X^{p+1} ⊕ Y^p, d = [[−d_X, 0], [f, d_Y]].

    Returns (C, inclusion Y → C, projection C → ΣX); in every degree the
    three maps form a split exact pair of presheaves.
    """
    x, y = f.source, f.target
    field, shape = x.field, x.shape
    lo = min(x.lo - 1, y.lo)
    hi = max(x.hi - 1, y.hi)
    terms, diffs = {}, {}
    for p in range(lo, hi + 1):
        terms[p] = ps.direct_sum(x.term(p + 1), y.term(p))
    for p in range(lo, hi):
        comps = {}
        for o in shape.objects:
            dx = x.diff(p + 1).comp(o)
            dy = y.diff(p).comp(o)
            fo = f.comp(p + 1).comp(o)
            zero = Matrix.zeros(field, dx.rows, dy.cols)
            comps[o] = linalg.block(field, [[-dx, zero], [fo, dy]])
        diffs[p] = ps.PresheafMap(terms[p], terms[p + 1], comps)
    c = Complex(field, shape, terms, diffs)
    incl = ChainMap(y, c, {
        p: ps.PresheafMap(y.term(p), c.term(p), {
            o: linalg.vstack(field, [
                Matrix.zeros(field, x.term(p + 1).dims[o], y.term(p).dims[o]),
                Matrix.identity(field, y.term(p).dims[o])])
            for o in shape.objects})
        for p in range(lo, hi + 1)})
    sx = shift(x, 1)
    proj = ChainMap(c, sx, {
        p: ps.PresheafMap(c.term(p), sx.term(p), {
            o: linalg.hstack(field, [
                Matrix.identity(field, x.term(p + 1).dims[o]),
                Matrix.zeros(field, x.term(p + 1).dims[o], y.term(p).dims[o])])
            for o in shape.objects})
        for p in range(lo, hi + 1)})
    return c, incl, proj


# --- homology ---------------------------------------------------------------


def homology_dims(x, p):
    """Fiber dimensions of H^p(x) by rank arithmetic (no induced action)."""
    out = {}
    for o in x.shape.objects:
        d_here = x.diff(p).comp(o)
        d_prev = x.diff(p - 1).comp(o)
        out[o] = x.term(p).dims[o] - linalg.rank(d_here) - linalg.rank(d_prev)
    return out


def homology(x, p):
    """H^p(x) as a presheaf with its induced action."""
    k, incl = ps.kernel(x.diff(p))
    prev = x.diff(p - 1)
    cores = {}
    for o in x.shape.objects:
        m = linalg.solve(incl.comps[o], prev.comps[o])
        if m is None:
            raise AssertionError("image does not land in the kernel")
        cores[o] = m
    h, _ = ps.cokernel(ps.PresheafMap(x.term(p - 1), k, cores))
    return h


def is_acyclic(x):
    return all(v == 0 for p in range(x.lo, x.hi + 1)
               for v in homology_dims(x, p).values())


def is_quasi_iso(f):
    c, _, _ = cone(f)
    return is_acyclic(c)


# --- projective resolution of complexes -------------------------------------


_RESOLUTION_CACHE = {}


def proj_resolution(x):
    """A complex of recorded free presheaves with a quasi-isomorphism onto x.

    Built from the top degree down: at each degree take the free hull of
    the pullback V = {(ξ, η) ∈ X^m ⊕ P^{m+1} : dξ = πη, dη = 0}.  Below
    the bottom of x this computes iterated syzygies, so the construction
    stops within max_chain_length extra degrees.  Results are cached so
    every Ext computation against the same source shares one resolution.
    """
    cached = _RESOLUTION_CACHE.get(x)
    if cached is not None:
        return cached
    field, shape = x.field, x.shape
    if x.is_zero() or all(x.term(p).free_parts is not None for p in x.degrees()):
        out = (x, identity_chain_map(x))
        _RESOLUTION_CACHE[x] = out
        return out
    bound = diagram.max_chain_length(shape)
    p_terms, p_diffs, pis = {}, {}, {}
    m = x.hi
    while True:
        if m < x.lo - bound - 2:
            raise AssertionError("resolution exceeded its width bound")
        xp = x.term(m)
        pnext = p_terms.get(m + 1, ps.zero_presheaf(field, shape))
        pi_next = pis.get(m + 1, ps.zero_map(pnext, x.term(m + 1)))
        d_next = p_diffs.get(m + 1, ps.zero_map(
            pnext, p_terms.get(m + 2, ps.zero_presheaf(field, shape))))
        src = ps.direct_sum(xp, pnext)
        comps = {}
        for o in shape.objects:
            top = linalg.hstack(field, [x.diff(m).comp(o), -pi_next.comps[o]])
            bot = linalg.hstack(field, [
                Matrix.zeros(field, d_next.target.dims[o], xp.dims[o]),
                d_next.comps[o]])
            comps[o] = linalg.vstack(field, [top, bot])
        tgt = ps.direct_sum(x.term(m + 1), d_next.target)
        v, incl = ps.kernel(ps.PresheafMap(src, tgt, comps))
        if v.is_zero() and m < x.lo:
            break
        pm, counit = ps.free_hull(v)
        iota_x = {o: incl.comps[o].submatrix(range(xp.dims[o]),
                                             range(v.dims[o]))
                  for o in shape.objects}
        iota_p = {o: incl.comps[o].submatrix(
            range(xp.dims[o], xp.dims[o] + pnext.dims[o]), range(v.dims[o]))
            for o in shape.objects}
        pis[m] = ps.PresheafMap(pm, xp, {
            o: iota_x[o] * counit.comps[o] for o in shape.objects})
        p_diffs[m] = ps.PresheafMap(pm, pnext, {
            o: iota_p[o] * counit.comps[o] for o in shape.objects})
        p_terms[m] = pm
        m -= 1
    if p_terms:
        pcx = Complex(field, shape, p_terms,
                      {p: d for p, d in p_diffs.items() if p + 1 in p_terms})
    else:
        pcx = zero_complex(field, shape)
    rho = ChainMap(pcx, x, {p: pis[p] for p in p_terms if p in pis})
    if not is_quasi_iso(rho):
        raise AssertionError("resolution comparison map is not a quasi-isomorphism")
    out = (pcx, rho)
    _RESOLUTION_CACHE[x] = out
    return out


# --- the Hom complex ---------------------------------------------------------


class _ByDegree:
    """Degree-indexed cache that fills itself on first access."""

    __slots__ = ("_build", "_cache")

    def __init__(self, build):
        self._build = build
        self._cache = {}

    def get(self, n, default=None):
        if n not in self._cache:
            self._cache[n] = self._build(n)
        return self._cache[n]

    def __getitem__(self, n):
        return self.get(n)


class HomComplex:
    """Total Hom complex of two complexes, with coordinates.

    Hom^n = ⊕_p Hom(X^p, Y^{p+n}) (natural maps only), with differential
    δ(φ)_p = d_Y φ_p − (−1)^n φ_{p+1} d_X.  Coordinates are taken in the
    deterministic hom_space bases slot by slot.  Slots and boundary
    matrices are built per degree on first use.
    """

    def __init__(self, x, y):
        self.x = x
        self.y = y
        self.field = x.field
        self.lo_n = y.lo - x.hi
        self.hi_n = y.hi - x.lo
        self.offsets = {}
        self.dims = {}
        self.slots = _ByDegree(self._build_slot)
        self.delta = _ByDegree(self._delta_matrix)

    def _build_slot(self, n):
        slots = []
        offsets = {}
        off = 0
        for p in self.x.degrees():
            basis = ps.hom_space(self.x.term(p), self.y.term(p + n))
            if basis:
                slots.append((p, basis))
                offsets[p] = off
                off += len(basis)
        self.offsets[n] = offsets
        self.dims[n] = off
        return slots

    def _slot_dim(self, n):
        self.slots.get(n)
        return self.dims.get(n, 0)

    def _delta_matrix(self, n):
        field = self.field
        rows = self._slot_dim(n + 1)
        cols = self._slot_dim(n)
        out = [[field.zero] * cols for _ in range(rows)]
        sgn = field.of_int(-1 if n % 2 else 1)
        for p, basis in self.slots.get(n, ()):
            for k, b in enumerate(basis):
                col = self.offsets[n][p] + k
                # d_Y ∘ b lands in slot p; b ∘ d_X in slot p − 1 of degree n+1
                img1 = self.y.diff(p + n).compose(b)
                self._add_into(out, n + 1, p, img1, col, field.one)
                img2 = b.compose(self.x.diff(p - 1))
                self._add_into(out, n + 1, p - 1, img2, col, field.neg(sgn))
        return Matrix(field, rows, cols, out)

    def _add_into(self, out, n, p, phi, col, scalar):
        if phi.is_zero():
            return
        slot = dict(self.slots.get(n, ()))
        if p not in slot:
            raise AssertionError("image misses the recorded basis")
        coords = ps.hom_coordinates(self.x.term(p), self.y.term(p + n), phi)
        if coords is None:
            raise AssertionError("image not in the hom-space span")
        f = self.field
        for k, c in enumerate(coords):
            out[self.offsets[n][p] + k][col] = f.add(
                out[self.offsets[n][p] + k][col], f.mul(scalar, c))

    def coords_of(self, n, comps):
        """Coordinates of a degree-n element given as {p: PresheafMap}."""
        field = self.field
        vec = [field.zero] * self._slot_dim(n)
        for p, phi in comps.items():
            if phi.is_zero():
                continue
            slot = dict(self.slots.get(n, ()))
            if p not in slot:
                return None
            coords = ps.hom_coordinates(self.x.term(p), self.y.term(p + n), phi)
            if coords is None:
                return None
            for k, c in enumerate(coords):
                vec[self.offsets[n][p] + k] = c
        return Matrix(field, len(vec), 1, [[v] for v in vec])

    def element_of(self, n, vec):
        """The {p: PresheafMap} family with the given coordinates."""
        out = {}
        for p, basis in self.slots.get(n, ()):
            off = self.offsets[n][p]
            acc = None
            for k, b in enumerate(basis):
                c = vec.entries[off + k][0]
                if c == self.field.zero:
                    continue
                term = b.scale(c)
                acc = term if acc is None else acc + term
            if acc is not None:
                out[p] = acc
        return out


@lru_cache(maxsize=None)
def hom_complex(x, y):
    return HomComplex(x, y)


def chain_map_from_element(x, y, n, comps):
    """Interpret a degree-n Hom element as a chain map x → shift(y, n)."""
    sy = shift(y, n)
    return ChainMap(x, sy, dict(comps))


def element_from_chain_map(f, n):
    """Inverse of chain_map_from_element for f : x → shift(y, n)."""
    return dict(f.comps)


# --- Ext --------------------------------------------------------------------


def ext(x, y, n):
    """(dimension, representatives) of Hom_D(x, Σ^n y).

    Representatives are chain maps P(x) → shift(y, n) out of the cached
    projective resolution of x, pivot-ordered and reproducible.
    """
    if x.shape != y.shape or x.field != y.field:
        raise ValueError("complexes live in different categories")
    p, _ = proj_resolution(x)
    hc = hom_complex(p, y)
    field = x.field
    dn = hc.delta.get(n, Matrix.zeros(field, hc._slot_dim(n + 1), hc._slot_dim(n)))
    dprev = hc.delta.get(n - 1, Matrix.zeros(field, hc._slot_dim(n), hc._slot_dim(n - 1)))
    cycles = linalg.kernel_basis(dn)
    boundaries = linalg.image_basis(dprev)
    dim = cycles.cols - linalg.rank(dprev)
    # pick cycle columns extending the boundary span, deterministically
    combined = linalg.hstack(field, [boundaries, cycles])
    _, pivots = linalg.rref(combined)
    reps = []
    for piv in pivots:
        if piv < boundaries.cols:
            continue
        k = piv - boundaries.cols
        vec = Matrix(field, cycles.rows, 1,
                     [[cycles.entries[r][k]] for r in range(cycles.rows)])
        comps = hc.element_of(n, vec)
        reps.append(chain_map_from_element(p, y, n, comps))
    if len(reps) != dim:
        raise AssertionError("cohomology representative count mismatch")
    return dim, reps


def hom_dim(x, y):
    """dim Hom in the derived category (Ext in degree 0)."""
    return ext(x, y, 0)[0]


def ext_coordinates(x, y, n, f):
    """Coordinates of the class of f : P(x) → shift(y, n) in the basis
    produced by ext(x, y, n); None if f is not a cocycle of that complex."""
    p, _ = proj_resolution(x)
    if f.source != p:
        raise ValueError("map is not defined on the cached resolution")
    hc = hom_complex(p, y)
    field = x.field
    vec = hc.coords_of(n, element_from_chain_map(f, n))
    if vec is None:
        return None
    dim, reps = ext(x, y, n)
    rep_cols = []
    for r in reps:
        rep_cols.append(hc.coords_of(n, element_from_chain_map(r, n)))
    dprev = hc.delta.get(n - 1, Matrix.zeros(field, hc._slot_dim(n),
                                             hc._slot_dim(n - 1)))
    system = linalg.hstack(field, rep_cols + [dprev]) if (rep_cols or dprev.cols) \
        else Matrix.zeros(field, hc._slot_dim(n), 0)
    sol = linalg.solve(system, vec)
    if sol is None:
        return None
    return [sol.entries[k][0] for k in range(dim)]


# --- homotopies and lifting --------------------------------------------------


def homotopy_solve(f, g=None):
    """A homotopy with f − g = dh + hd, or None if none exists.

    When the source is a complex of projectives, None certifies that f and
    g differ in the derived category.
    """
    if g is None:
        g = zero_chain_map(f.source, f.target)
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps do not share endpoints")
    diffmap = f - g
    hc = hom_complex(f.source, f.target)
    rhs = hc.coords_of(0, dict(diffmap.comps))
    if rhs is None:
        return None
    dm1 = hc.delta.get(-1, Matrix.zeros(f.source.field, hc._slot_dim(0),
                                        hc._slot_dim(-1)))
    sol = linalg.solve(dm1, rhs)
    if sol is None:
        return None
    comps = hc.element_of(-1, sol)
    return Homotopy(f.source, f.target, comps)


def lift_through_qis(g, s):
    """Given g : P → B and a quasi-isomorphism s : A → B with P a complex
    of projectives, find g' : P → A and a homotopy h with s∘g' ≃ g.

    Returns (g', h) or None (None cannot happen under the stated
    hypotheses; callers treat it as an invariant violation).
    """
    p, a, b = g.source, s.source, s.target
    field = p.field
    hpa = hom_complex(p, a)
    hpb = hom_complex(p, b)
    na = hpa._slot_dim(0)
    nh = hpb._slot_dim(-1)
    # postcomposition with s as a matrix Hom^0(P,A) → Hom^0(P,B)
    s_cols = []
    basis_elems = []
    for deg, basis in sorted(hpa.slots.get(0, ())):
        for elem in basis:
            basis_elems.append((deg, elem))
    for deg, elem in basis_elems:
        v = hpb.coords_of(0, {deg: s.comp(deg).compose(elem)})
        if v is None:
            raise AssertionError("composite misses the Hom basis")
        s_cols.append(v)
    smat = linalg.hstack(field, s_cols) if s_cols else \
        Matrix.zeros(field, hpb._slot_dim(0), 0)
    d0a = hpa.delta.get(0, Matrix.zeros(field, hpa._slot_dim(1), na))
    dm1 = hpb.delta.get(-1, Matrix.zeros(field, hpb._slot_dim(0), nh))
    rhs_g = hpb.coords_of(0, dict(g.comps))
    if rhs_g is None:
        return None
    # unknowns (g', h): δ(g') = 0 and s∘g' − δ(h) = g
    system = linalg.block(field, [
        [d0a, Matrix.zeros(field, d0a.rows, nh)],
        [smat, -dm1]])
    rhs = linalg.vstack(field, [Matrix.zeros(field, d0a.rows, 1), rhs_g])
    sol = linalg.solve(system, rhs)
    if sol is None:
        return None
    comps = {}
    for k, (deg, elem) in enumerate(basis_elems):
        c = sol.entries[k][0]
        if c == field.zero:
            continue
        add = elem.scale(c)
        comps[deg] = comps.get(deg) + add if deg in comps else add
    gp = ChainMap(p, a, comps)
    hvec = Matrix(field, nh, 1,
                  [[sol.entries[na + k][0]] for k in range(nh)])
    h = Homotopy(p, b, hpb.element_of(-1, hvec))
    # sanity: s∘g' − g = boundary(h)
    if (s.compose(gp) - g) != h.boundary():
        raise AssertionError("lift certificate fails to verify")
    return gp, h


def extend_along_qis(alpha, iota):
    """Given α : A → C and a quasi-isomorphism ι : A → B with A and B
    termwise projective, find q : B → C and a homotopy h with q∘ι ≃ α.

    Dual counterpart of lift_through_qis (post- instead of pre-composition);
    ι is a homotopy equivalence under the stated hypotheses, so a solution
    exists.  Returns (q, h) or None.
    """
    a_cx, b_cx, c_cx = iota.source, iota.target, alpha.target
    field = a_cx.field
    hbc = hom_complex(b_cx, c_cx)
    hac = hom_complex(a_cx, c_cx)
    nb = hbc._slot_dim(0)
    nh = hac._slot_dim(-1)
    basis_elems = []
    for deg, basis in sorted(hbc.slots.get(0, ())):
        for elem in basis:
            basis_elems.append((deg, elem))
    r_cols = []
    for deg, elem in basis_elems:
        v = hac.coords_of(0, {deg: elem.compose(iota.comp(deg))})
        if v is None:
            raise AssertionError("composite misses the Hom basis")
        r_cols.append(v)
    rmat = linalg.hstack(field, r_cols) if r_cols else \
        Matrix.zeros(field, hac._slot_dim(0), 0)
    d0b = hbc.delta.get(0, Matrix.zeros(field, hbc._slot_dim(1), nb))
    dm1 = hac.delta.get(-1, Matrix.zeros(field, hac._slot_dim(0), nh))
    rhs_a = hac.coords_of(0, dict(alpha.comps))
    if rhs_a is None:
        return None
    system = linalg.block(field, [
        [d0b, Matrix.zeros(field, d0b.rows, nh)],
        [rmat, -dm1]])
    rhs = linalg.vstack(field, [Matrix.zeros(field, d0b.rows, 1), rhs_a])
    sol = linalg.solve(system, rhs)
    if sol is None:
        return None
    comps = {}
    for k, (deg, elem) in enumerate(basis_elems):
        c = sol.entries[k][0]
        if c == field.zero:
            continue
        add = elem.scale(c)
        comps[deg] = comps.get(deg) + add if deg in comps else add
    q = ChainMap(b_cx, c_cx, comps)
    hvec = Matrix(field, nh, 1,
                  [[sol.entries[nb + k][0]] for k in range(nh)])
    h = Homotopy(a_cx, c_cx, hac.element_of(-1, hvec))
    if (q.compose(iota) - alpha) != h.boundary():
        raise AssertionError("factorization certificate fails to verify")
    return q, h


def find_quasi_iso(a, b, cap=4096):
    """Search Hom_D(a, b) for a quasi-isomorphism; returns a chain map
    P(a) → b or None.  Enumerates the Ext⁰ classes (small fields only)."""
    if is_acyclic(a) and is_acyclic(b):
        return zero_chain_map(proj_resolution(a)[0], b)
    dim, reps = ext(a, b, 0)
    if dim == 0:
        return None
    field = a.field
    if field.kind != "prime":
        raise ValueError("search requires a finite field")
    total = field.p ** dim
    if total > cap:
        raise ValueError("search space too large (%d classes)" % total)
    for code in range(1, total):
        coeffs = []
        c = code
        for _ in range(dim):
            coeffs.append(c % field.p)
            c //= field.p
        cand = None
        for co, rep in zip(coeffs, reps):
            if co == 0:
                continue
            t = rep.scale(field.of_int(co))
            cand = t if cand is None else cand + t
        if cand is not None and is_quasi_iso(cand):
            return cand
    return None


# --- restriction and duality --------------------------------------------------


def restrict_complex(u, x):
    """Termwise restriction along a shape functor (exact)."""
    terms = {p: ps.restrict(u, x.term(p)) for p in x.degrees()}
    diffs = {p: ps.restrict_map(u, x.diff(p)) for p in range(x.lo, x.hi)}
    return Complex(x.field, u.source, terms, diffs)


def over_point(x):
    """View a complex over I as a complex over I × e (free parts carry
    over, so resolutions short-circuit when they already did)."""
    icat = x.shape
    e = diagram.terminal_cat()
    prod = diagram.product(icat, e)
    pt = e.objects[0]

    def lift_ps(f):
        dims = {(m, pt): f.dims[m] for m in icat.objects}
        action = {}
        for a in prod.nonidentity_arrows():
            aa, _ = prod.pair_of[a]
            action[a] = f.act(aa)
        parts = None
        if f.free_parts is not None:
            parts = tuple((v, (i, pt)) for (v, i) in f.free_parts)
        return ps.Presheaf(f.field, prod, dims, action, free_parts=parts)

    terms = {p: lift_ps(x.term(p)) for p in x.degrees()}
    diffs = {p: ps.PresheafMap(terms[p], terms[p + 1],
                               {(m, pt): x.diff(p).comps[m]
                                for m in icat.objects})
             for p in range(x.lo, x.hi)}
    return Complex(x.field, prod, terms, diffs)


def restrict_chain_map(u, f):
    return ChainMap(restrict_complex(u, f.source), restrict_complex(u, f.target),
                    {p: ps.restrict_map(u, m) for p, m in f.comps.items()})


def dualize_complex(x, opposite_shape=None):
    """(DX)^p = (X^{−p})^∨ with d_{DX}^p = (d_X^{−p−1})^T; an involution
    on the nose (DDX == X bit for bit)."""
    op = opposite_shape if opposite_shape is not None else diagram.opposite(x.shape)
    terms = {-p: ps.dualize(x.term(p), op) for p in x.degrees()}
    diffs = {}
    for p in range(x.lo, x.hi):
        diffs[-p - 1] = ps.dualize_map(x.diff(p), op)
    return Complex(x.field, op, terms, diffs)


def dualize_chain_map(f, opposite_shape=None):
    """Dual of a chain map, reversing its direction."""
    op = opposite_shape if opposite_shape is not None else \
        diagram.opposite(f.source.shape)
    src = dualize_complex(f.target, op)
    tgt = dualize_complex(f.source, op)
    return ChainMap(src, tgt, {-p: ps.dualize_map(m, op)
                               for p, m in f.comps.items()})
