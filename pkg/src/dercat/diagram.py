"""Finite directed categories, functors and natural transformations.

A FinCat is fully materialized: every hom-set is an explicit ordered list
of arrow identifiers and composition is a total table.  All downstream
constructions (direct sums indexed by hom-sets, Kan extension formulas)
index over these lists, so the order fixed at construction is part of the
data and must never change between runs.

Directedness means: no endomorphisms except identities and no oriented
cycles through distinct objects.
"""


class FinCat:
    """A finite directed category.

    Args:
        objects: ordered list of object names (hashable).
        hom: dict (x, y) -> ordered tuple of arrow ids; must cover all pairs
            (missing pairs are treated as empty).
        identity: dict object -> arrow id of its identity.
        comp: dict (g, f) -> arrow id of g∘f, total on composable pairs
            (f: x→y, g: y→z).
    """

    def __init__(self, objects, hom, identity, comp, validate=True):
        self.objects = tuple(objects)
        self.hom_table = {}
        self.src = {}
        self.tgt = {}
        for x in self.objects:
            for y in self.objects:
                arrows = tuple(hom.get((x, y), ()))
                self.hom_table[(x, y)] = arrows
                for a in arrows:
                    if a in self.src:
                        raise ValueError("arrow id %r used twice" % (a,))
                    self.src[a] = x
                    self.tgt[a] = y
        self.identity = dict(identity)
        self.comp = dict(comp)
        self.arrows = tuple(a for x in self.objects for y in self.objects
                            for a in self.hom_table[(x, y)])
        self._key = None
        # optional structure set by constructors
        self.product_of = None
        self.pair_of = None       # arrow id -> (a, b) when product
        self.pair_arrow = None    # (a, b) -> arrow id when product
        self.generators = None    # generator name -> arrow id (from_quiver)
        if validate:
            self._validate()

    # -- basic access ------------------------------------------------------

    def hom(self, x, y):
        return self.hom_table[(x, y)]

    def is_identity(self, a):
        return self.identity[self.src[a]] == a

    def nonidentity_arrows(self):
        return tuple(a for a in self.arrows if not self.is_identity(a))

    def compose(self, g, f):
        """The composite g∘f for f: x→y, g: y→z."""
        if self.tgt[f] != self.src[g]:
            raise ValueError("arrows %r, %r not composable" % (g, f))
        if self.is_identity(f):
            return g
        if self.is_identity(g):
            return f
        return self.comp[(g, f)]

    def _validate(self):
        for x in self.objects:
            i = self.identity.get(x)
            if i is None or self.src.get(i) != x or self.tgt.get(i) != x:
                raise ValueError("missing or misplaced identity at %r" % (x,))
        # directedness: hom(x,x) = {id}, no cycles through distinct objects
        for x in self.objects:
            if self.hom_table[(x, x)] != (self.identity[x],):
                raise ValueError("nontrivial endomorphisms at %r" % (x,))
        for x in self.objects:
            for y in self.objects:
                if x != y and self.hom_table[(x, y)] and self.hom_table[(y, x)]:
                    raise ValueError("oriented cycle between %r and %r" % (x, y))
        # identities neutral, composition closed and associative
        for f in self.arrows:
            if self.compose(self.identity[self.tgt[f]], f) != f:
                raise ValueError("identity not left-neutral at %r" % (f,))
            if self.compose(f, self.identity[self.src[f]]) != f:
                raise ValueError("identity not right-neutral at %r" % (f,))
        for f in self.arrows:
            for z in self.objects:
                for g in self.hom_table[(self.tgt[f], z)]:
                    gf = self.compose(g, f)
                    if self.src[gf] != self.src[f] or self.tgt[gf] != z:
                        raise ValueError("composite %r∘%r has wrong endpoints" % (g, f))
                    for w in self.objects:
                        for h in self.hom_table[(z, w)]:
                            if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                                raise ValueError("associativity fails at (%r,%r,%r)"
                                                 % (h, g, f))

    # -- value identity ----------------------------------------------------

    def _canonical_key(self):
        if self._key is None:
            self._key = (self.objects,
                         tuple(sorted((k, v) for k, v in self.hom_table.items() if v)),
                         tuple(sorted(self.identity.items())),
                         tuple(sorted(self.comp.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, FinCat) and self._canonical_key() == other._canonical_key()

    def __hash__(self):
        return hash(self._canonical_key())

    def __repr__(self):
        return "FinCat(%d objects, %d arrows)" % (len(self.objects), len(self.arrows))


class DiagFunctor:
    """A functor between finite directed categories, given by total maps."""

    def __init__(self, source, target, obj_map, arrow_map, validate=True):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.arrow_map = dict(arrow_map)
        if validate:
            self._validate()

    def __call__(self, x):
        return self.obj_map[x]

    def map_arrow(self, a):
        return self.arrow_map[a]

    def _validate(self):
        for x in self.source.objects:
            if self.obj_map.get(x) not in self.target.objects:
                raise ValueError("object %r not mapped into target" % (x,))
        for a in self.source.arrows:
            fa = self.arrow_map.get(a)
            if fa is None:
                raise ValueError("arrow %r not mapped" % (a,))
            if self.target.src[fa] != self.obj_map[self.source.src[a]] or \
                    self.target.tgt[fa] != self.obj_map[self.source.tgt[a]]:
                raise ValueError("arrow %r maps with wrong endpoints" % (a,))
        for x in self.source.objects:
            if self.arrow_map[self.source.identity[x]] != \
                    self.target.identity[self.obj_map[x]]:
                raise ValueError("identity at %r not preserved" % (x,))
        for f in self.source.arrows:
            for z in self.source.objects:
                for g in self.source.hom(self.source.tgt[f], z):
                    if self.arrow_map[self.source.compose(g, f)] != \
                            self.target.compose(self.arrow_map[g], self.arrow_map[f]):
                        raise ValueError("composition not preserved at (%r,%r)" % (g, f))

    def __eq__(self, other):
        return (isinstance(other, DiagFunctor) and self.source == other.source
                and self.target == other.target and self.obj_map == other.obj_map
                and self.arrow_map == other.arrow_map)

    def __hash__(self):
        return hash((self.source, self.target,
                     tuple(sorted(self.obj_map.items())),
                     tuple(sorted(self.arrow_map.items()))))

    def __repr__(self):
        return "DiagFunctor(%r -> %r)" % (self.source, self.target)


class NatTrans:
    """A natural transformation between parallel functors."""

    def __init__(self, source, target, components, validate=True):
        if source.source != target.source or source.target != target.target:
            raise ValueError("functors not parallel")
        self.source = source
        self.target = target
        self.components = dict(components)
        if validate:
            self._validate()

    def component(self, x):
        return self.components[x]

    def _validate(self):
        cat = self.source.source
        tcat = self.source.target
        for x in cat.objects:
            c = self.components.get(x)
            if c is None or tcat.src[c] != self.source.obj_map[x] or \
                    tcat.tgt[c] != self.target.obj_map[x]:
                raise ValueError("component at %r missing or misplaced" % (x,))
        for a in cat.arrows:
            x, y = cat.src[a], cat.tgt[a]
            left = tcat.compose(self.components[y], self.source.arrow_map[a])
            right = tcat.compose(self.target.arrow_map[a], self.components[x])
            if left != right:
                raise ValueError("naturality fails at arrow %r" % (a,))


# --- construction from quivers ------------------------------------------


def from_quiver(objects, generating_arrows, relations=()):
    """Build a FinCat as paths of an acyclic quiver modulo relations.

    Args:
        objects: list of object names.
        generating_arrows: list of (name, src, tgt) triples.
        relations: list of pairs of parallel paths, each path a list of
            generator names in order of application (first applied first).

    Arrows of the result are canonical representative paths; generator
    names are recorded in cat.generators.
    """
    objects = list(objects)
    gens = {}
    out_of = {x: [] for x in objects}
    for name, s, t in generating_arrows:
        if s not in out_of or t not in objects:
            raise ValueError("generator %r has unknown endpoint" % (name,))
        if name in gens:
            raise ValueError("duplicate generator name %r" % (name,))
        gens[name] = (s, t)
        out_of[s].append(name)

    # acyclicity of the generating quiver
    color = {}

    def dfs(x, stack):
        color[x] = 1
        for g in out_of[x]:
            t = gens[g][1]
            if t == x or color.get(t) == 1:
                raise ValueError("cycle detected through %r" % (t,))
            if color.get(t, 0) == 0:
                dfs(t, stack)
        color[x] = 2

    for x in objects:
        if color.get(x, 0) == 0:
            dfs(x, None)

    # enumerate all paths (finite by acyclicity); a path is keyed by
    # (source object, tuple of generators in order of application)
    paths = []  # (src, tgt, key)
    def extend(src, cur, at):
        for g in out_of[at]:
            t = gens[g][1]
            p = cur + (g,)
            paths.append((src, t, (src, p)))
            extend(src, p, t)
    for x in objects:
        paths.append((x, x, (x, ())))
        extend(x, (), x)

    ends = {p: (s, t) for s, t, p in paths}

    # congruence closure via union-find over path keys
    parent = {p: p for _, _, p in paths}

    def plen(key):
        return (len(key[1]), key[1])

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    def union(p, q):
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[max(rp, rq, key=plen)] = min(rp, rq, key=plen)
            return True
        return False

    pending = []
    for lhs, rhs in relations:
        lhs, rhs = tuple(lhs), tuple(rhs)
        if not lhs or not rhs:
            raise ValueError("relation paths must be nonempty")
        lk = (gens[lhs[0]][0], lhs) if lhs[0] in gens else None
        rk = (gens[rhs[0]][0], rhs) if rhs[0] in gens else None
        if lk not in ends or rk not in ends:
            raise ValueError("relation path not a path of the quiver")
        if ends[lk] != ends[rk]:
            raise ValueError("relation between non-parallel paths")
        pending.append((lk, rk))

    changed = True
    while changed:
        changed = False
        for lhs, rhs in pending:
            if union(lhs, rhs):
                changed = True
        # close under pre/post composition with generators
        classes = {}
        for _, _, p in paths:
            classes.setdefault(find(p), []).append(p)
        new_pending = list(pending)
        for rep, members in classes.items():
            if len(members) < 2:
                continue
            base = members[0]
            for other in members[1:]:
                s, t = ends[base]
                for g, (gs, gt) in gens.items():
                    if gs == t:
                        a = (base[0], base[1] + (g,))
                        b = (other[0], other[1] + (g,))
                        if a in ends and b in ends and find(a) != find(b):
                            new_pending.append((a, b))
                    if gt == s:
                        a = (gs, (g,) + base[1])
                        b = (gs, (g,) + other[1])
                        if a in ends and b in ends and find(a) != find(b):
                            new_pending.append((a, b))
        if len(new_pending) != len(pending):
            pending = new_pending
            changed = True

    # materialize arrows: canonical representative = shortest, then lexic.
    classes = {}
    for s, t, p in paths:
        classes.setdefault(find(p), []).append(p)
    canon = {}
    for rep, members in classes.items():
        best = min(members, key=plen)
        for m in members:
            canon[m] = best

    def arrow_id(key):
        if not key[1]:
            return "id@%s" % (key[0],)
        return ".".join(key[1])

    hom = {}
    seen = set()
    for s, t, p in paths:
        c = canon[p]
        if c in seen:
            continue
        seen.add(c)
        hom.setdefault((s, t), []).append(arrow_id(c))
    for k in hom:
        hom[k] = tuple(sorted(hom[k], key=lambda a: (len(a.split(".")), a)))

    identity = {x: "id@%s" % (x,) for x in objects}
    by_id = {}
    for s, t, p in paths:
        c = canon[p]
        by_id[arrow_id(c)] = c
    comp = {}
    for fid, fkey in by_id.items():
        for gid, gkey in by_id.items():
            if ends[fkey][1] == ends[gkey][0]:
                comp[(gid, fid)] = arrow_id(canon[(fkey[0], fkey[1] + gkey[1])])
    cat = FinCat(objects, hom, identity, comp)
    cat.generators = {g: arrow_id(canon[(gens[g][0], (g,))]) for g in gens}
    return cat


def poset_category(objects, leq):
    """Category with at most one arrow x→y, present iff leq(y, x) fails...

    Arrow direction: a unique arrow x→y exists iff leq(y, x) holds with
    y != x, i.e. arrows point from larger to smaller elements (so that
    presheaves on the result are representations of the Hasse quiver read
    upward).
    """
    objects = list(objects)
    hom = {}
    identity = {}
    for x in objects:
        identity[x] = "id@%s" % (x,)
        hom[(x, x)] = (identity[x],)
    for x in objects:
        for y in objects:
            if x != y and leq(y, x):
                if leq(x, y):
                    raise ValueError("relation not antisymmetric")
                hom[(x, y)] = ("%s>%s" % (x, y),)
    comp = {}
    for (x, y), fs in hom.items():
        for (y2, z), gs in hom.items():
            if y2 != y:
                continue
            for f in fs:
                for g in gs:
                    comp[(g, f)] = hom[(x, z)][0]
    return FinCat(objects, hom, identity, comp)


# --- standard shapes ------------------------------------------------------


def empty_cat():
    return FinCat((), {}, {}, {})


def terminal_cat():
    return FinCat(("*",), {("*", "*"): ("id@*",)}, {"*": "id@*"}, {})


def delta(n):
    """The linear poset with objects 0..n and unique arrows j→i for i ≤ j."""
    return poset_category(list(range(n + 1)), lambda a, b: a <= b)


def cube(n):
    """The n-cube: poset of bit tuples, arrows from larger to smaller."""
    verts = []
    for k in range(2 ** n):
        verts.append(tuple((k >> i) & 1 for i in range(n)))
    verts.sort()
    return poset_category(verts, lambda a, b: all(x <= y for x, y in zip(a, b)))


def product(i, j):
    """Product category; objects are pairs, arrows are pairs."""
    objects = [(x, y) for x in i.objects for y in j.objects]
    hom = {}
    pair_of = {}
    pair_arrow = {}
    identity = {}

    def aid(a, b):
        return "(%s,%s)" % (a, b)

    for (x, y) in objects:
        for (x2, y2) in objects:
            arrows = []
            for a in i.hom(x, x2):
                for b in j.hom(y, y2):
                    nm = aid(a, b)
                    arrows.append(nm)
                    pair_of[nm] = (a, b)
                    pair_arrow[(a, b)] = nm
            hom[((x, y), (x2, y2))] = tuple(arrows)
    for (x, y) in objects:
        identity[(x, y)] = pair_arrow[(i.identity[x], j.identity[y])]
    comp = {}
    for f, (a, b) in pair_of.items():
        for g, (c, d) in pair_of.items():
            if i.tgt[a] == i.src[c] and j.tgt[b] == j.src[d]:
                comp[(g, f)] = pair_arrow[(i.compose(c, a), j.compose(d, b))]
    cat = FinCat(objects, hom, identity, comp, validate=False)
    cat.product_of = (i, j)
    cat.pair_of = pair_of
    cat.pair_arrow = pair_arrow
    return cat


def opposite(i):
    """Opposite category; arrows keep their identifiers."""
    hom = {}
    for x in i.objects:
        for y in i.objects:
            hom[(x, y)] = i.hom(y, x)
    comp = {}
    for (g, f), h in i.comp.items():
        comp[(f, g)] = h
    cat = FinCat(i.objects, hom, i.identity, comp, validate=False)
    return cat


def disjoint_union(i, j):
    """Disjoint union; returns (category, left inclusion, right inclusion)."""
    objs = [("L", x) for x in i.objects] + [("R", y) for y in j.objects]
    hom = {}
    identity = {}
    amap_l, amap_r = {}, {}
    for x in i.objects:
        for y in i.objects:
            hom[(("L", x), ("L", y))] = tuple("L:%s" % a for a in i.hom(x, y))
    for x in j.objects:
        for y in j.objects:
            hom[(("R", x), ("R", y))] = tuple("R:%s" % a for a in j.hom(x, y))
    for x in i.objects:
        identity[("L", x)] = "L:%s" % i.identity[x]
    for y in j.objects:
        identity[("R", y)] = "R:%s" % j.identity[y]
    comp = {}
    for (g, f), h in i.comp.items():
        comp[("L:%s" % g, "L:%s" % f)] = "L:%s" % h
    for (g, f), h in j.comp.items():
        comp[("R:%s" % g, "R:%s" % f)] = "R:%s" % h
    cat = FinCat(objs, hom, identity, comp, validate=False)
    for a in i.arrows:
        amap_l[a] = "L:%s" % a
    for a in j.arrows:
        amap_r[a] = "R:%s" % a
    incl_l = DiagFunctor(i, cat, {x: ("L", x) for x in i.objects}, amap_l)
    incl_r = DiagFunctor(j, cat, {y: ("R", y) for y in j.objects}, amap_r)
    return cat, incl_l, incl_r


def full_subcategory(i, objects):
    """Full subcategory on the given objects; returns (cat, inclusion)."""
    objects = tuple(objects)
    for x in objects:
        if x not in i.objects:
            raise ValueError("object %r not in category" % (x,))
    hom = {(x, y): i.hom(x, y) for x in objects for y in objects}
    identity = {x: i.identity[x] for x in objects}
    kept = {a for v in hom.values() for a in v}
    comp = {(g, f): h for (g, f), h in i.comp.items()
            if g in kept and f in kept and h in kept}
    cat = FinCat(objects, hom, identity, comp, validate=False)
    incl = DiagFunctor(cat, i, {x: x for x in objects}, {a: a for a in cat.arrows})
    return cat, incl


def square():
    """The commuting square Δ1 × Δ1; vect pictures have (0,0) as the source."""
    return product(delta(1), delta(1))


def lefthalfcap():
    """⌐: the square minus its (1,1) corner; returns (cat, inclusion into □)."""
    return full_subcategory(square(), [(0, 0), (0, 1), (1, 0)])


def righthalfcup():
    """⌙: the square minus its (0,0) corner; returns (cat, inclusion into □)."""
    return full_subcategory(square(), [(0, 1), (1, 0), (1, 1)])


def twosquare():
    """Δ1 × Δ2: two squares side by side (rows indexed by Δ1, columns by Δ2)."""
    return product(delta(1), delta(2))


def squarearrow():
    """twosquare minus the (1,2) corner; returns (cat, inclusion)."""
    ts = twosquare()
    return full_subcategory(ts, [o for o in ts.objects if o != (1, 2)])


def square_into_squarearrow():
    """The inclusion □ → squarearrow onto columns {0,1} (a closed immersion)."""
    sq = square()
    sa, _ = squarearrow()
    return functor_by_objects(sq, sa, {o: o for o in sq.objects})


# --- functor combinators --------------------------------------------------


def identity_functor(i):
    return DiagFunctor(i, i, {x: x for x in i.objects},
                       {a: a for a in i.arrows}, validate=False)


def compose_functors(v, u):
    """v∘u for u: I→J, v: J→K."""
    if u.target != v.source:
        raise ValueError("functors not composable")
    return DiagFunctor(u.source, v.target,
                       {x: v.obj_map[u.obj_map[x]] for x in u.source.objects},
                       {a: v.arrow_map[u.arrow_map[a]] for a in u.source.arrows},
                       validate=False)


def constant_functor(i, j, y):
    """The functor I → J constant at the object y."""
    return DiagFunctor(i, j, {x: y for x in i.objects},
                       {a: j.identity[y] for a in i.arrows}, validate=False)


def terminal_functor(i):
    """p_I : I → e."""
    return constant_functor(i, terminal_cat(), "*")


def point_inclusion(i, x):
    """i_x : e → I."""
    e = terminal_cat()
    return DiagFunctor(e, i, {"*": x}, {"id@*": i.identity[x]}, validate=False)


def functor_by_objects(i, j, obj_map):
    """Functor determined by an object map when all induced hom maps are
    forced (each relevant target hom-set has exactly one candidate)."""
    amap = {}
    for a in i.arrows:
        x, y = i.src[a], i.tgt[a]
        cand = j.hom(obj_map[x], obj_map[y])
        if i.is_identity(a):
            amap[a] = j.identity[obj_map[x]]
        elif len(cand) == 1:
            amap[a] = cand[0]
        else:
            raise ValueError("arrow image not forced for %r" % (a,))
    return DiagFunctor(i, j, obj_map, amap)


def product_functor(u, v):
    """u × v between the corresponding product categories."""
    s = product(u.source, v.source)
    t = product(u.target, v.target)
    omap = {(x, y): (u.obj_map[x], v.obj_map[y]) for (x, y) in s.objects}
    amap = {}
    for arr, (a, b) in s.pair_of.items():
        amap[arr] = t.pair_arrow[(u.arrow_map[a], v.arrow_map[b])]
    return DiagFunctor(s, t, omap, amap, validate=False)


def times_base(u, j):
    """u × id_J, used to apply shape-level functors to complexes over I×J."""
    return product_functor(u, identity_functor(j))


def opposite_functor(u):
    """The same functor viewed between the opposite categories."""
    return DiagFunctor(opposite(u.source), opposite(u.target),
                       u.obj_map, u.arrow_map, validate=False)


# --- comma categories -----------------------------------------------------


def comma_over(u, y):
    """The comma category I/y for u : I → J and y in J.

    Returns (I/y, forgetful functor j : I/y → I, 2-cell α : u∘j ⇒ const_y)
    with α_{(x, f)} = f.
    """
    i_cat, j_cat = u.source, u.target
    if y not in j_cat.objects:
        raise ValueError("unknown object %r" % (y,))
    objects = [(x, f) for x in i_cat.objects for f in j_cat.hom(u.obj_map[x], y)]
    return _comma_build(u, y, objects, over=True)


def comma_under(u, y):
    """The comma category y\\I: objects (x, g : y → u(x)); returns the
    category, the forgetful functor and the 2-cell α : const_y ⇒ u∘j."""
    i_cat, j_cat = u.source, u.target
    if y not in j_cat.objects:
        raise ValueError("unknown object %r" % (y,))
    objects = [(x, g) for x in i_cat.objects for g in j_cat.hom(y, u.obj_map[x])]
    return _comma_build(u, y, objects, over=False)


def _comma_build(u, y, objects, over):
    i_cat, j_cat = u.source, u.target
    idx = {o: k for k, o in enumerate(objects)}
    hom = {}
    arrow_h = {}

    def aid(h, o1, o2):
        return "%s@%d>%d" % (h, idx[o1], idx[o2])

    for o1 in objects:
        for o2 in objects:
            (x1, f1), (x2, f2) = o1, o2
            arrows = []
            for h in i_cat.hom(x1, x2):
                uh = u.arrow_map[h]
                if over:
                    ok = j_cat.compose(f2, uh) == f1
                else:
                    ok = j_cat.compose(uh, f1) == f2
                if ok:
                    nm = aid(h, o1, o2)
                    arrows.append(nm)
                    arrow_h[nm] = h
            hom[(o1, o2)] = tuple(arrows)
    identity = {}
    for o in objects:
        identity[o] = aid(i_cat.identity[o[0]], o, o)
    comp = {}
    srcs = {}
    tgts = {}
    for (o1, o2), arrs in hom.items():
        for a in arrs:
            srcs[a] = o1
            tgts[a] = o2
    for f, hf in arrow_h.items():
        for g, hg in arrow_h.items():
            if tgts[f] == srcs[g]:
                comp[(g, f)] = aid(i_cat.compose(hg, hf), srcs[f], tgts[g])
    cat = FinCat(objects, hom, identity, comp, validate=False)
    forget = DiagFunctor(cat, i_cat, {o: o[0] for o in objects},
                         {a: arrow_h[a] for a in cat.arrows}, validate=False)
    uj = compose_functors(u, forget)
    const = constant_functor(cat, j_cat, y)
    comps = {o: o[1] for o in objects}
    if over:
        alpha = NatTrans(uj, const, comps)
    else:
        alpha = NatTrans(const, uj, comps)
    return cat, forget, alpha


# --- predicates -----------------------------------------------------------


def is_fully_faithful(u):
    seen = set()
    for x in u.source.objects:
        ux = u.obj_map[x]
        if ux in seen:
            return False
        seen.add(ux)
    for x in u.source.objects:
        for y in u.source.objects:
            images = [u.arrow_map[a] for a in u.source.hom(x, y)]
            if len(set(images)) != len(images):
                return False
            if set(images) != set(u.target.hom(u.obj_map[x], u.obj_map[y])):
                return False
    return True


def is_open_immersion(u):
    """True iff u is injective, fully faithful, and every arrow into the
    image comes from the image."""
    if not is_fully_faithful(u):
        return False
    image = set(u.obj_map.values())
    for x in image:
        for y in u.target.objects:
            if u.target.hom(y, x) and y not in image:
                return False
    return True


def is_closed_immersion(u):
    """Closed = open after passing to opposites: arrows out of the image
    stay in the image."""
    if not is_fully_faithful(u):
        return False
    image = set(u.obj_map.values())
    for x in image:
        for y in u.target.objects:
            if u.target.hom(x, y) and y not in image:
                return False
    return True


def max_chain_length(i):
    """Length of the longest composable chain of non-identity arrows."""
    memo = {}

    def longest(x):
        if x in memo:
            return memo[x]
        best = 0
        for y in i.objects:
            if y == x:
                continue
            arrs = [a for a in i.hom(x, y)]
            if arrs:
                best = max(best, 1 + longest(y))
        memo[x] = best
        return best

    return max((longest(x) for x in i.objects), default=0)


# --- natural transformation calculus --------------------------------------


def identity_nat(u):
    return NatTrans(u, u, {x: u.target.identity[u.obj_map[x]]
                           for x in u.source.objects}, validate=False)


def vcompose(beta, alpha):
    """Vertical composite β·α for α : u ⇒ v, β : v ⇒ w."""
    if alpha.target != beta.source:
        raise ValueError("transformations not composable")
    tcat = alpha.source.target
    return NatTrans(alpha.source, beta.target,
                    {x: tcat.compose(beta.components[x], alpha.components[x])
                     for x in alpha.source.source.objects})


def whisker_left(v, alpha):
    """v ⋆ α : v∘u ⇒ v∘u′ for α : u ⇒ u′ and v out of their target."""
    return NatTrans(compose_functors(v, alpha.source),
                    compose_functors(v, alpha.target),
                    {x: v.arrow_map[alpha.components[x]]
                     for x in alpha.source.source.objects})


def whisker_right(alpha, w):
    """α ⋆ w : u∘w ⇒ u′∘w for w into the source of α."""
    return NatTrans(compose_functors(alpha.source, w),
                    compose_functors(alpha.target, w),
                    {x: alpha.components[w.obj_map[x]]
                     for x in w.source.objects})
