"""Presheaves of finite-dimensional vector spaces over a finite directed
category, natural transformations, conflations, and the finite-global-
dimension resolution by free objects.

Conventions (fixed once, everything downstream depends on them):
  * contravariance: an arrow a : x → y of the shape acts by
    F(a) : F_y → F_x, so a presheaf over {0 ← 1} is a representation of
    the quiver 0 → 1;
  * direct sums indexed by hom-sets follow the arrow order of the shape;
  * a "free" presheaf is a direct sum of pieces V ⊗ i with
    (V ⊗ i)_j = ⊕_{hom(j,i)} V; the pieces are recorded in free_parts so
    Kan extensions can transport them without re-deriving the structure.
"""

from functools import lru_cache

from . import linalg
from .linalg import Matrix
from . import diagram


class Presheaf:
    """A functor shape° → vect, given by fiber dimensions and action
    matrices on non-identity arrows."""

    __slots__ = ("field", "shape", "dims", "action", "free_parts", "_hash")

    def __init__(self, field, shape, dims, action, free_parts=None, validate=False):
        self.field = field
        self.shape = shape
        self.dims = {x: int(dims[x]) for x in shape.objects}
        self.action = dict(action)
        self.free_parts = free_parts
        self._hash = None
        if validate:
            self.validate()

    def dim(self, x):
        return self.dims[x]

    def act(self, a):
        """Action matrix of the arrow a : x → y, a map F_y → F_x."""
        if self.shape.is_identity(a):
            return Matrix.identity(self.field, self.dims[self.shape.src[a]])
        return self.action[a]

    def validate(self):
        cat = self.shape
        for a in cat.nonidentity_arrows():
            m = self.action.get(a)
            x, y = cat.src[a], cat.tgt[a]
            if m is None or m.rows != self.dims[x] or m.cols != self.dims[y]:
                raise ValueError("action at %r missing or has wrong shape" % (a,))
            if m.field != self.field:
                raise ValueError("field mismatch at %r" % (a,))
        for f in cat.arrows:
            for z in cat.objects:
                for g in cat.hom(cat.tgt[f], z):
                    if self.act(cat.compose(g, f)) != self.act(f) * self.act(g):
                        raise ValueError("functoriality fails at (%r,%r)" % (g, f))
        return self

    def total_dim(self):
        return sum(self.dims.values())

    def is_zero(self):
        return all(v == 0 for v in self.dims.values())

    def _data(self):
        return (self.field, self.shape,
                tuple(self.dims[x] for x in self.shape.objects),
                tuple(sorted(self.action.items())))

    def __eq__(self, other):
        return isinstance(other, Presheaf) and self._data() == other._data()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._data())
        return self._hash

    def __repr__(self):
        return "Presheaf(dims=%r)" % ({x: d for x, d in self.dims.items()},)


class PresheafMap:
    """A natural transformation between presheaves on the same shape."""

    __slots__ = ("source", "target", "comps", "_hash")

    def __init__(self, source, target, comps, validate=False):
        if source.shape != target.shape or source.field != target.field:
            raise ValueError("source and target live in different categories")
        self.source = source
        self.target = target
        self.comps = {x: comps[x] for x in source.shape.objects}
        self._hash = None
        if validate:
            self.validate()

    def comp(self, x):
        return self.comps[x]

    def validate(self):
        cat = self.source.shape
        for x in cat.objects:
            m = self.comps[x]
            if m.rows != self.target.dims[x] or m.cols != self.source.dims[x]:
                raise ValueError("component at %r has wrong shape" % (x,))
        for a in cat.nonidentity_arrows():
            x, y = cat.src[a], cat.tgt[a]
            if self.comps[x] * self.source.act(a) != self.target.act(a) * self.comps[y]:
                raise ValueError("naturality fails at %r" % (a,))
        return self

    def compose(self, other):
        """self ∘ other."""
        if other.target != self.source:
            raise ValueError("maps not composable")
        return PresheafMap(other.source, self.target,
                           {x: self.comps[x] * other.comps[x]
                            for x in self.comps})

    def __add__(self, other):
        return PresheafMap(self.source, self.target,
                           {x: self.comps[x] + other.comps[x] for x in self.comps})

    def __sub__(self, other):
        return PresheafMap(self.source, self.target,
                           {x: self.comps[x] - other.comps[x] for x in self.comps})

    def __neg__(self):
        return PresheafMap(self.source, self.target,
                           {x: -self.comps[x] for x in self.comps})

    def scale(self, c):
        return PresheafMap(self.source, self.target,
                           {x: self.comps[x].scale(c) for x in self.comps})

    def is_zero(self):
        return all(m.is_zero() for m in self.comps.values())

    def is_componentwise_injective(self):
        return all(linalg.rank(m) == m.cols for m in self.comps.values())

    def is_componentwise_surjective(self):
        return all(linalg.rank(m) == m.rows for m in self.comps.values())

    def _data(self):
        return (self.source, self.target,
                tuple(self.comps[x] for x in self.source.shape.objects))

    def __eq__(self, other):
        return isinstance(other, PresheafMap) and self._data() == other._data()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._data())
        return self._hash

    def __repr__(self):
        return "PresheafMap(%r -> %r)" % (self.source, self.target)


class Conflation:
    """A componentwise short exact pair X ↣ Y ↠ Z."""

    def __init__(self, inflation, deflation, validate=True):
        self.inflation = inflation
        self.deflation = deflation
        if validate and not is_conflation(inflation, deflation):
            raise ValueError("not a conflation")

    @property
    def sub(self):
        return self.inflation.source

    @property
    def middle(self):
        return self.inflation.target

    @property
    def quotient(self):
        return self.deflation.target


def is_conflation(i, p):
    """Componentwise kernel-cokernel pair check by rank arithmetic."""
    if i.target != p.source:
        return False
    if not i.is_componentwise_injective() or not p.is_componentwise_surjective():
        return False
    if not p.compose(i).is_zero():
        return False
    for x in i.source.shape.objects:
        if i.source.dims[x] + p.target.dims[x] != i.target.dims[x]:
            return False
    return True


# --- constructors ----------------------------------------------------------


def zero_presheaf(field, shape):
    z = {x: 0 for x in shape.objects}
    act = {a: Matrix.zeros(field, 0, 0) for a in shape.nonidentity_arrows()}
    return Presheaf(field, shape, z, act, free_parts=())


def zero_map(f, g):
    return PresheafMap(f, g, {x: Matrix.zeros(f.field, g.dims[x], f.dims[x])
                              for x in f.shape.objects})


def identity_map(f):
    return PresheafMap(f, f, {x: Matrix.identity(f.field, f.dims[x])
                              for x in f.shape.objects})


def free_at(field, shape, v, i):
    """The free presheaf V ⊗ i with (V ⊗ i)_j = ⊕_{hom(j,i)} V."""
    if i not in shape.objects:
        raise ValueError("unknown object %r" % (i,))
    dims = {j: v * len(shape.hom(j, i)) for j in shape.objects}
    action = {}
    for a in shape.nonidentity_arrows():
        x, y = shape.src[a], shape.tgt[a]
        hy = shape.hom(y, i)
        hx = shape.hom(x, i)
        pos = {f: k for k, f in enumerate(hx)}
        m = [[field.zero] * (v * len(hy)) for _ in range(v * len(hx))]
        for k, f in enumerate(hy):
            fk = pos[shape.compose(f, a)]
            for t in range(v):
                m[fk * v + t][k * v + t] = field.one
        action[a] = Matrix(field, v * len(hx), v * len(hy), m)
    return Presheaf(field, shape, dims, action, free_parts=((v, i),))


def direct_sum(f, g):
    """Direct sum presheaf; free_parts concatenate when both are free."""
    if f.shape != g.shape or f.field != g.field:
        raise ValueError("summands live in different categories")
    dims = {x: f.dims[x] + g.dims[x] for x in f.shape.objects}
    action = {a: linalg.direct_sum(f.act(a), g.act(a))
              for a in f.shape.nonidentity_arrows()}
    parts = None
    if f.free_parts is not None and g.free_parts is not None:
        parts = f.free_parts + g.free_parts
    return Presheaf(f.field, f.shape, dims, action, free_parts=parts)


def direct_sum_many(field, shape, summands):
    acc = zero_presheaf(field, shape)
    for s in summands:
        acc = direct_sum(acc, s)
    return acc


def sum_inclusions(summands):
    """Inclusion maps of each summand into direct_sum_many(summands)."""
    if not summands:
        return None, []
    field, shape = summands[0].field, summands[0].shape
    total = direct_sum_many(field, shape, summands)
    offs = {x: 0 for x in shape.objects}
    incls = []
    for s in summands:
        comps = {}
        for x in shape.objects:
            m = Matrix.zeros(field, total.dims[x], s.dims[x])
            rows = [list(r) for r in m.entries]
            for k in range(s.dims[x]):
                rows[offs[x] + k][k] = field.one
            comps[x] = Matrix(field, total.dims[x], s.dims[x], rows)
        incls.append(PresheafMap(s, total, comps))
        for x in shape.objects:
            offs[x] += s.dims[x]
    return total, incls


def sum_projections(summands):
    """Projection maps from direct_sum_many(summands) onto each summand."""
    if not summands:
        return None, []
    field, shape = summands[0].field, summands[0].shape
    total = direct_sum_many(field, shape, summands)
    offs = {x: 0 for x in shape.objects}
    projs = []
    for s in summands:
        comps = {}
        for x in shape.objects:
            rows = [[field.zero] * total.dims[x] for _ in range(s.dims[x])]
            for k in range(s.dims[x]):
                rows[k][offs[x] + k] = field.one
            comps[x] = Matrix(field, s.dims[x], total.dims[x], rows)
        projs.append(PresheafMap(total, s, comps))
        for x in shape.objects:
            offs[x] += s.dims[x]
    return total, projs


def free_map_to(p, f, values):
    """The map P → F out of a free presheaf determined by its values.

    P must carry free_parts ((v_1, i_1), ...); values is a list of matrices
    val_k : k^{v_k} → F_{i_k}.  The component at j sends the hom-indexed
    block of part k at the arrow g ∈ hom(j, i_k) via F(g) · val_k.  This is
    the adjunction hom(V ⊗ i, F) ≅ hom(V, F_i) made explicit.
    """
    if p.free_parts is None:
        raise ValueError("source is not a recorded free presheaf")
    field, shape = p.field, p.shape
    comps = {}
    for j in shape.objects:
        cols = []
        for (v, i), val in zip(p.free_parts, values):
            for g in shape.hom(j, i):
                cols.append(f.act(g) * val)
        if cols:
            comps[j] = linalg.hstack(field, cols)
        else:
            comps[j] = Matrix.zeros(field, f.dims[j], 0)
    return PresheafMap(p, f, comps)


def free_hull(f):
    """A minimal free cover PF ↠ F.

    At each object i the radical is Σ im F(a) over the non-identity
    arrows a out of i; generators T_i span a complement of it in F_i.
    Because the shape is directed, F is generated by these tops, so the
    counit out of ⊕_i (T_i ⊗ i) is a deflation.  Minimality keeps
    resolution terms from growing along chains of the shape.
    """
    field, shape = f.field, f.shape
    parts, values = [], []
    for i in shape.objects:
        d = f.dims[i]
        if d == 0:
            continue
        rad_cols = [f.act(a) for a in shape.nonidentity_arrows()
                    if shape.src[a] == i]
        cur = (linalg.image_basis(linalg.hstack(field, rad_cols))
               if rad_cols else Matrix.zeros(field, d, 0))
        comp_cols = []
        for k in range(d):
            e = Matrix(field, d, 1,
                       [[field.one if r == k else field.zero]
                        for r in range(d)])
            if linalg.solve(cur, e) is None:
                comp_cols.append(e)
                cur = linalg.hstack(field, [cur, e])
        if comp_cols:
            parts.append(free_at(field, shape, len(comp_cols), i))
            values.append(linalg.hstack(field, comp_cols))
    pf = direct_sum_many(field, shape, parts)
    return pf, free_map_to(pf, f, values)


# --- kernels, cokernels, images -------------------------------------------


def kernel(f):
    """Objectwise kernel with induced action; returns (K, inclusion)."""
    field, shape = f.source.field, f.source.shape
    bases = {x: linalg.kernel_basis(f.comps[x]) for x in shape.objects}
    dims = {x: bases[x].cols for x in shape.objects}
    action = {}
    for a in shape.nonidentity_arrows():
        x, y = shape.src[a], shape.tgt[a]
        m = linalg.solve(bases[x], f.source.act(a) * bases[y])
        if m is None:
            raise AssertionError("kernel not preserved by the action")
        action[a] = m
    k = Presheaf(field, shape, dims, action)
    incl = PresheafMap(k, f.source, {x: bases[x] for x in shape.objects})
    return k, incl


def cokernel(f):
    """Objectwise cokernel with induced action; returns (C, projection)."""
    field, shape = f.target.field, f.target.shape
    projs = {}
    for x in shape.objects:
        im = linalg.image_basis(f.comps[x])
        projs[x] = linalg.kernel_basis(im.transpose()).transpose()
    dims = {x: projs[x].rows for x in shape.objects}
    action = {}
    for a in shape.nonidentity_arrows():
        x, y = shape.src[a], shape.tgt[a]
        rhs = (projs[x] * f.target.act(a)).transpose()
        m = linalg.solve(projs[y].transpose(), rhs)
        if m is None:
            raise AssertionError("image not preserved by the action")
        action[a] = m.transpose()
    c = Presheaf(field, shape, dims, action)
    proj = PresheafMap(f.target, c, {x: projs[x] for x in shape.objects})
    return c, proj


def image(f):
    """Objectwise image with induced action; returns (I, inclusion into
    the target, corestriction from the source)."""
    field, shape = f.source.field, f.source.shape
    bases = {x: linalg.image_basis(f.comps[x]) for x in shape.objects}
    dims = {x: bases[x].cols for x in shape.objects}
    action = {}
    for a in shape.nonidentity_arrows():
        x, y = shape.src[a], shape.tgt[a]
        m = linalg.solve(bases[x], f.target.act(a) * bases[y])
        if m is None:
            raise AssertionError("image not preserved by the action")
        action[a] = m
    im = Presheaf(field, shape, dims, action)
    incl = PresheafMap(im, f.target, {x: bases[x] for x in shape.objects})
    cores = {}
    for x in shape.objects:
        m = linalg.solve(bases[x], f.comps[x])
        cores[x] = m
    return im, incl, PresheafMap(f.source, im, cores)


def pushout(i, f):
    """Pushout of an inflation i : X ↣ Y along f : X → Z.

    Returns (W, inflation i' : Z ↣ W, map f' : Y → W), computed objectwise
    as the cokernel of (i, −f) : X → Y ⊕ Z.
    """
    if not i.is_componentwise_injective():
        raise ValueError("first argument is not an inflation")
    if i.source != f.source:
        raise ValueError("maps do not share a source")
    y, z = i.target, f.target
    total, incls = sum_inclusions([y, z])
    incl_y, incl_z = incls
    g = PresheafMap(i.source, total,
                    {x: linalg.vstack(i.source.field, [i.comps[x], -f.comps[x]])
                     for x in i.source.shape.objects})
    w, q = cokernel(g)
    return w, q.compose(incl_z), q.compose(incl_y)


def pullback(p, f):
    """Pullback of a deflation p : Y ↠ Z along f : W → Z.

    Returns (V, deflation p' : V ↠ W, map f' : V → Y), dual to pushout.
    """
    if not p.is_componentwise_surjective():
        raise ValueError("first argument is not a deflation")
    if p.target != f.target:
        raise ValueError("maps do not share a target")
    y, w = p.source, f.source
    total, projs = sum_projections([y, w])
    proj_y, proj_w = projs
    g = PresheafMap(total, p.target,
                    {x: linalg.hstack(p.target.field, [p.comps[x], -f.comps[x]])
                     for x in total.shape.objects})
    v, incl = kernel(g)
    return v, proj_w.compose(incl), proj_y.compose(incl)


# --- resolution -------------------------------------------------------------


class Resolution:
    """The chain 0 → PK^nF → … → PKF → PF ↠ F of §-style free resolutions.

    Fields:
        presheaf: the resolved F;
        terms: [PF, PKF, ..., PK^mF] (free presheaves with free_parts);
        kernels: [K^0 F = F, KF, ..., K^m F, K^{m+1} F (zero)];
        deflations: counits P K^l F ↠ K^l F;
        inclusions: K^{l+1} F ↪ P K^l F;
        u_maps: composites P K^{l+1} F → P K^l F (inclusion after counit).
    """

    def __init__(self, presheaf, terms, kernels, deflations, inclusions, u_maps):
        self.presheaf = presheaf
        self.terms = terms
        self.kernels = kernels
        self.deflations = deflations
        self.inclusions = inclusions
        self.u_maps = u_maps

    @property
    def length(self):
        return len(self.terms) - 1

    def tail_is_zero(self):
        return self.kernels[-1].is_zero()


def resolve(f):
    """Iterate the free hull: terminates within max_chain_length steps."""
    bound = diagram.max_chain_length(f.shape)
    kernels = [f]
    terms, deflations, inclusions, u_maps = [], [], [], []
    cur = f
    steps = 0
    while True:
        pf, counit = free_hull(cur)
        terms.append(pf)
        deflations.append(counit)
        k, incl = kernel(counit)
        kernels.append(k)
        inclusions.append(incl)
        if len(terms) >= 2:
            u_maps.append(inclusions[-2].compose(counit))
        if k.is_zero():
            break
        cur = k
        steps += 1
        if steps > bound + 1:
            raise AssertionError("resolution exceeded the chain-length bound")
    return Resolution(f, terms, kernels, deflations, inclusions, u_maps)


# --- hom spaces --------------------------------------------------------------


@lru_cache(maxsize=None)
def _hom_space_cached(f, g):
    field, shape = f.field, f.shape
    order = list(shape.objects)
    sizes = [g.dims[x] * f.dims[x] for x in order]
    offsets = {}
    off = 0
    for x, s in zip(order, sizes):
        offsets[x] = off
        off += s
    nvars = off
    rows = []
    for a in shape.nonidentity_arrows():
        x, y = shape.src[a], shape.tgt[a]
        # constraint: φ_x · F(a) − G(a) · φ_y = 0  (maps F_y → G_x)
        left = linalg.kronecker_product(
            Matrix.identity(field, g.dims[x]), f.act(a).transpose())
        right = linalg.kronecker_product(
            g.act(a), Matrix.identity(field, f.dims[y]))
        nrows = g.dims[x] * f.dims[y]
        for r in range(nrows):
            row = [field.zero] * nvars
            for c in range(left.cols):
                row[offsets[x] + c] = left.entries[r][c]
            for c in range(right.cols):
                row[offsets[y] + c] = field.sub(row[offsets[y] + c],
                                                right.entries[r][c])
            rows.append(row)
    system = Matrix(field, len(rows), nvars, rows) if rows else \
        Matrix.zeros(field, 0, nvars)
    basis, free = linalg.kernel_basis_and_free(system)
    flat_cols = tuple(tuple(basis.entries[i][k] for i in range(nvars))
                      for k in range(basis.cols))
    _HOM_META[(f, g)] = (free, flat_cols)
    out = []
    for k in range(basis.cols):
        comps = {}
        for x in order:
            r, c = g.dims[x], f.dims[x]
            seg = Matrix(field, r * c, 1,
                         [[basis.entries[offsets[x] + t][k]] for t in range(r * c)])
            comps[x] = linalg.unflatten_matrix(field, seg, r, c)
        out.append(PresheafMap(f, g, comps))
    return tuple(out)


# side tables keyed like _hom_space_cached: free columns + flattened basis
# columns (and, over F_2, the columns packed into ints for the span check)
_HOM_META = {}
_HOM_MASKS = {}


def hom_space(f, g):
    """Deterministic basis of the space of natural transformations f → g."""
    if f.shape != g.shape or f.field != g.field:
        raise ValueError("presheaves live in different categories")
    return list(_hom_space_cached(f, g))


def hom_coordinates(f, g, phi, check=True):
    """Coordinates of phi : f → g in the hom_space(f, g) basis, or None if
    phi is not in its span (i.e. not natural).

    Reads the coordinates off at the kernel-basis free positions; the span
    membership check reconstructs the flattened map (bit-packed over F_2).
    """
    basis = _hom_space_cached(f, g)
    field = f.field
    flat = []
    for x in f.shape.objects:
        for row in phi.comps[x].entries:
            flat.extend(row)
    if not basis:
        return [] if all(v == field.zero for v in flat) else None
    free, flat_cols = _HOM_META[(f, g)]
    coords = [flat[c] for c in free]
    if check:
        if field.kind == "prime" and field.p == 2:
            masks = _HOM_MASKS.get((f, g))
            if masks is None:
                masks = []
                for col in flat_cols:
                    m = 0
                    for idx, v in enumerate(col):
                        if v:
                            m |= 1 << idx
                    masks.append(m)
                _HOM_MASKS[(f, g)] = masks
            acc = 0
            for k, c in enumerate(coords):
                if c:
                    acc ^= masks[k]
            want = 0
            for idx, v in enumerate(flat):
                if v:
                    want |= 1 << idx
            if acc != want:
                return None
        else:
            recon = [field.zero] * len(flat)
            for k, c in enumerate(coords):
                if c == field.zero:
                    continue
                col = flat_cols[k]
                for idx, v in enumerate(col):
                    if v != field.zero:
                        recon[idx] = field.add(recon[idx], field.mul(c, v))
            if recon != flat:
                return None
    return coords


def map_coordinates(basis, phi):
    """Coordinates of the PresheafMap phi in the given hom_space basis."""
    field = phi.source.field
    if not basis:
        return [] if phi.is_zero() else None
    cols = [linalg.vstack(field, [linalg.flatten_matrix(b.comps[x])
                                  for x in phi.source.shape.objects])
            for b in basis]
    rhs = linalg.vstack(field, [linalg.flatten_matrix(phi.comps[x])
                                for x in phi.source.shape.objects])
    sol = linalg.solve(linalg.hstack(field, cols), rhs)
    if sol is None:
        return None
    return [sol.entries[k][0] for k in range(len(basis))]


# --- restriction and duality -------------------------------------------------


def restrict(u, g):
    """(u*G)_x = G_{u(x)} for u a functor into G's shape."""
    if g.shape != u.target:
        raise ValueError("presheaf does not live over the functor's target")
    dims = {x: g.dims[u.obj_map[x]] for x in u.source.objects}
    action = {a: g.act(u.arrow_map[a]) for a in u.source.nonidentity_arrows()}
    return Presheaf(g.field, u.source, dims, action)


def restrict_map(u, phi):
    return PresheafMap(restrict(u, phi.source), restrict(u, phi.target),
                       {x: phi.comps[u.obj_map[x]] for x in u.source.objects})


def dualize(f, opposite_shape=None):
    """The linear dual, a presheaf over the opposite shape (transpose all
    action matrices).  Applying it twice gives back f on the nose."""
    op = opposite_shape if opposite_shape is not None else diagram.opposite(f.shape)
    action = {}
    for a in op.nonidentity_arrows():
        action[a] = f.act(a).transpose()
    return Presheaf(f.field, op, dict(f.dims), action)


def dualize_map(phi, opposite_shape=None):
    """Dual of a map, reversing its direction."""
    src = dualize(phi.target, opposite_shape)
    tgt = dualize(phi.source, opposite_shape)
    return PresheafMap(src, tgt, {x: phi.comps[x].transpose() for x in phi.comps})


# --- abelian (underived) left Kan extension ---------------------------------


def lan_abelian(u, f):
    """Pointwise colimit formula for the underived left Kan extension,
    used as a cross-check of the projective transport formula.

    (u_! F)_y = coequalizer of the F-values over the comma category of
    arrows y → u(x); transition maps reindex the comma positions.
    """
    field = f.field
    j_cat = u.target
    i_cat = u.source
    gens = {}      # y -> ordered list of (x, g : y -> u(x))
    quots = {}     # y -> (projection matrix onto the colimit, dimension)
    offs = {}
    for y in j_cat.objects:
        items = [(x, g) for x in i_cat.objects for g in j_cat.hom(y, u.obj_map[x])]
        gens[y] = items
        off = {}
        tot = 0
        for (x, g) in items:
            off[(x, g)] = tot
            tot += f.dims[x]
        offs[y] = (off, tot)
        rel_rows = []
        for h in i_cat.nonidentity_arrows():
            x1, x2 = i_cat.src[h], i_cat.tgt[h]
            fh = f.act(h)   # F_{x2} -> F_{x1}
            for g in j_cat.hom(y, u.obj_map[x1]):
                g2 = j_cat.compose(u.arrow_map[h], g)
                # (x2, g2, ξ) ~ (x1, g, F(h)ξ)
                for t in range(f.dims[x2]):
                    row = [field.zero] * tot
                    row[off[(x2, g2)] + t] = field.one
                    for s in range(f.dims[x1]):
                        row[off[(x1, g)] + s] = field.sub(
                            row[off[(x1, g)] + s], fh.entries[s][t])
                    rel_rows.append(row)
        rel = Matrix(field, len(rel_rows), tot, rel_rows) if rel_rows else \
            Matrix.zeros(field, 0, tot)
        span = linalg.image_basis(rel.transpose())   # columns spanning relations
        q = linalg.kernel_basis(span.transpose()).transpose()
        quots[y] = q
    dims = {y: quots[y].rows for y in j_cat.objects}
    action = {}
    for b in j_cat.nonidentity_arrows():
        y1, y2 = j_cat.src[b], j_cat.tgt[b]
        off2, tot2 = offs[y2]
        off1, tot1 = offs[y1]
        reidx = [[field.zero] * tot2 for _ in range(tot1)]
        for (x, g) in gens[y2]:
            gb = j_cat.compose(g, b)
            for t in range(f.dims[x]):
                reidx[off1[(x, gb)] + t][off2[(x, g)] + t] = field.one
        reidx_m = Matrix(field, tot1, tot2, reidx)
        rhs = (quots[y1] * reidx_m).transpose()
        m = linalg.solve(quots[y2].transpose(), rhs)
        if m is None:
            raise AssertionError("colimit transition not well defined")
        action[b] = m.transpose()
    return Presheaf(field, j_cat, dims, action)
