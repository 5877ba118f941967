"""The module category mod(A) of a based algebra.

Right modules are stored as per-vertex spaces with one action matrix per
radical basis element (idempotents act as the component projections).  A
basis element b with vertex tags (l, r) acts from component l to component r,
so for quiver algebras modules are exactly quiver representations.

This module supplies hom spaces, kernels/images/cokernels, Krull-Schmidt
decomposition, projectives/injectives/simples, minimal presentations and
resolutions, Ext, homological dimensions, the Auslander-Bridger transpose,
Ext^1 class coordinates with their pushout/pullback actions, almost split
sequences, and enumeration of all indecomposables (knitting plus an
independent brute-force oracle).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .algebra import Algebra
from .linalg import (
    Matrix,
    block_diag,
    column_space_basis,
    count_subspaces,
    hstack,
    inverse,
    is_invertible,
    iterate_subspaces,
    kernel_basis,
    rank,
    rref,
    solve_right,
    vstack,
)


class RepmodError(Exception):
    pass


class CapExceeded(RepmodError):
    pass


# -- modules and maps ---------------------------------------------------------


class Module:
    """A finite-dimensional right module over a based algebra."""

    __slots__ = ("algebra", "dims", "act", "_key")

    def __init__(self, algebra: Algebra, dims, act: dict[int, Matrix]):
        self.algebra = algebra
        self.dims = tuple(int(d) for d in dims)
        if len(self.dims) != algebra.nv:
            raise RepmodError("dimension vector length does not match vertex count")
        self.act = dict(act)
        for b in algebra.radical_indices:
            mat = self.act.get(b)
            want = (self.dims[algebra.right[b]], self.dims[algebra.left[b]])
            if mat is None:
                self.act[b] = Matrix.zeros(algebra.field, *want)
            elif (mat.rows, mat.cols) != want:
                raise RepmodError(f"action matrix for basis {b} has shape {(mat.rows, mat.cols)}, expected {want}")
        self._key = None

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def key(self) -> bytes:
        if self._key is None:
            parts = [bytes(str(self.dims), "ascii")]
            for b in self.algebra.radical_indices:
                parts.append(self.act[b].key())
            self._key = b"|".join(parts)
        return self._key

    def action(self, b: int) -> Matrix:
        """Action matrix of basis element b (idempotents included)."""
        alg = self.algebra
        if b < alg.nv:
            d = self.dims[b]
            return Matrix.identity(alg.field, d)
        return self.act[b]

    def element_action(self, vec: np.ndarray, l: int, r: int) -> Matrix:
        """Action of an algebra element supported in e_l A e_r, as a map V_l -> V_r."""
        alg = self.algebra
        out = Matrix.zeros(alg.field, self.dims[r], self.dims[l])
        for b in np.nonzero(np.asarray(vec))[0]:
            b = int(b)
            if alg.left[b] != l or alg.right[b] != r:
                raise RepmodError("element is not supported in the requested block")
            out = out + self.action(b).scale(int(vec[b]))
        return out

    @classmethod
    def zero(cls, algebra: Algebra) -> "Module":
        return cls(algebra, [0] * algebra.nv, {})


class ModuleMap:
    """A homomorphism of modules, one matrix per vertex."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Module, target: Module, mats):
        self.source = source
        self.target = target
        self.mats = tuple(mats)
        for v in range(source.algebra.nv):
            m = self.mats[v]
            if (m.rows, m.cols) != (target.dims[v], source.dims[v]):
                raise RepmodError(f"map matrix at vertex {v} has wrong shape")

    @classmethod
    def identity(cls, m: Module) -> "ModuleMap":
        f = m.algebra.field
        return cls(m, m, [Matrix.identity(f, d) for d in m.dims])

    @classmethod
    def zero_map(cls, source: Module, target: Module) -> "ModuleMap":
        f = source.algebra.field
        return cls(source, target, [Matrix.zeros(f, target.dims[v], source.dims[v]) for v in range(source.algebra.nv)])

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition self after other."""
        return ModuleMap(other.source, self.target, [a @ b for a, b in zip(self.mats, other.mats)])

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.mats, other.mats)])

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target, [a - b for a, b in zip(self.mats, other.mats)])

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.source, self.target, [m.scale(c) for m in self.mats])

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def is_injective(self) -> bool:
        return all(rank(m) == m.cols for m in self.mats)

    def is_surjective(self) -> bool:
        return all(rank(m) == m.rows for m in self.mats)

    def is_isomorphism(self) -> bool:
        return all(is_invertible(m) for m in self.mats)

    def flat(self) -> np.ndarray:
        if not self.mats:
            return np.zeros(0, dtype=np.int64)
        return np.concatenate([m.a.reshape(-1) for m in self.mats])


def check_module(m: Module) -> None:
    """Assert the module axioms (products act compatibly, relations act as zero)."""
    alg = m.algebra
    for b in alg.radical_indices:
        for c in alg.radical_indices:
            if alg.right[b] != alg.left[c]:
                continue
            prod = alg.mult[b, c]
            lhs = m.element_action(prod, alg.left[b], alg.right[c])
            rhs = m.action(c) @ m.action(b)
            if lhs != rhs:
                raise RepmodError(f"module violates relation {alg.labels[b]}*{alg.labels[c]}")


def check_map(f: ModuleMap) -> None:
    alg = f.source.algebra
    for b in alg.radical_indices:
        l, r = alg.left[b], alg.right[b]
        if f.mats[r] @ f.source.action(b) != f.target.action(b) @ f.mats[l]:
            raise RepmodError(f"map does not intertwine basis element {alg.labels[b]}")


def direct_sum(modules: list[Module]) -> tuple[Module, list[ModuleMap], list[ModuleMap]]:
    """Direct sum with its injections and projections."""
    if not modules:
        raise RepmodError("direct sum of no modules needs an algebra; use Module.zero")
    alg = modules[0].algebra
    field = alg.field
    dims = [sum(m.dims[v] for m in modules) for v in range(alg.nv)]
    act = {}
    for b in alg.radical_indices:
        blocks = [m.act[b] for m in modules]
        total = Matrix.zeros(field, dims[alg.right[b]], dims[alg.left[b]])
        arr = np.array(total.a)
        ro = co = 0
        for m, blk in zip(modules, blocks):
            arr[ro : ro + blk.rows, co : co + blk.cols] = blk.a
            ro += m.dims[alg.right[b]]
            co += m.dims[alg.left[b]]
        act[b] = Matrix(field, arr)
    total_mod = Module(alg, dims, act)
    injections, projections = [], []
    offsets = [0] * alg.nv
    for m in modules:
        inj, proj = [], []
        for v in range(alg.nv):
            e = np.zeros((dims[v], m.dims[v]), dtype=np.int64)
            e[offsets[v] : offsets[v] + m.dims[v], :] = np.eye(m.dims[v], dtype=np.int64)
            inj.append(Matrix(field, e))
            proj.append(Matrix(field, e.T))
        injections.append(ModuleMap(m, total_mod, inj))
        projections.append(ModuleMap(total_mod, m, proj))
        for v in range(alg.nv):
            offsets[v] += m.dims[v]
    return total_mod, injections, projections


def hom_basis(m: Module, n: Module) -> list[ModuleMap]:
    """A deterministic basis of Hom(m, n), by solving the intertwiner equations."""
    if m.algebra is not n.algebra:
        raise RepmodError("hom_basis: modules over different algebras")
    alg = m.algebra
    cache_key = ("hom", m.key(), n.key())
    cached = alg.hom_cache.get(cache_key)
    if cached is not None:
        return cached

    nv = alg.nv
    sizes = [n.dims[v] * m.dims[v] for v in range(nv)]
    offsets = np.concatenate([[0], np.cumsum(sizes)])
    total = int(offsets[-1])
    rows = []
    for b in alg.radical_indices:
        l, r = alg.left[b], alg.right[b]
        n_eq = n.dims[r] * m.dims[l]
        if n_eq == 0:
            continue
        block = np.zeros((n_eq, total), dtype=np.int64)
        # f_r @ A_b: coefficient kron(I_{n_r}, A_b^T) on vec(f_r)
        if sizes[r]:
            block[:, offsets[r] : offsets[r + 1]] = np.kron(
                np.eye(n.dims[r], dtype=np.int64), m.act[b].a.T
            )
        # minus B_b @ f_l: coefficient kron(B_b, I_{m_l}) on vec(f_l)
        if sizes[l]:
            block[:, offsets[l] : offsets[l + 1]] -= np.kron(n.act[b].a, np.eye(m.dims[l], dtype=np.int64))
        rows.append(block)
    if rows:
        system = Matrix(alg.field, np.vstack(rows))
    else:
        system = Matrix.zeros(alg.field, 0, total)
    basis = kernel_basis(system)
    maps = []
    for j in range(basis.cols):
        col = basis.a[:, j]
        mats = []
        for v in range(nv):
            chunk = col[offsets[v] : offsets[v + 1]].reshape(n.dims[v], m.dims[v])
            mats.append(Matrix(alg.field, chunk))
        maps.append(ModuleMap(m, n, mats))
    alg.hom_cache[cache_key] = maps
    return maps


def hom_dim(m: Module, n: Module) -> int:
    return len(hom_basis(m, n))


def hom_coords(f: ModuleMap, basis: list[ModuleMap]) -> Matrix:
    """Coordinates of f in a hom basis (column vector)."""
    field = f.source.algebra.field
    if not basis:
        if not f.is_zero():
            raise RepmodError("nonzero map in zero hom space")
        return Matrix.zeros(field, 0, 1)
    mat = Matrix(field, np.column_stack([b.flat() for b in basis]))
    target = Matrix(field, f.flat().reshape(-1, 1))
    x = solve_right(mat, target)
    if x is None:
        raise RepmodError("map does not lie in the span of the given hom basis")
    return x


def hom_from_coords(coords, basis: list[ModuleMap], source: Module, target: Module) -> ModuleMap:
    out = ModuleMap.zero_map(source, target)
    for c, b in zip(np.asarray(coords).reshape(-1), basis):
        if int(c) % source.algebra.field.p:
            out = out + b.scale(int(c))
    return out


# -- submodules, quotients, kernels, images ----------------------------------


def submodule(m: Module, bases: list[Matrix]) -> tuple[Module, ModuleMap]:
    """The submodule spanned per vertex by the given (independent) columns."""
    alg = m.algebra
    dims = [bases[v].cols for v in range(alg.nv)]
    act = {}
    for b in alg.radical_indices:
        l, r = alg.left[b], alg.right[b]
        restricted = solve_right(bases[r], m.act[b] @ bases[l])
        if restricted is None:
            raise RepmodError("subspaces are not closed under the action")
        act[b] = restricted
    sub = Module(alg, dims, act)
    return sub, ModuleMap(sub, m, bases)


def quotient(m: Module, bases: list[Matrix]) -> tuple[Module, ModuleMap]:
    """The quotient of m by the submodule spanned by the given columns."""
    alg = m.algebra
    field = alg.field
    projections, lifts = [], []
    for v in range(alg.nv):
        u = bases[v]
        d = m.dims[v]
        ext = Matrix(field, np.hstack([u.a, np.eye(d, dtype=np.int64)]))
        _, pivots = rref(ext)
        if len([c for c in pivots if c < u.cols]) != u.cols:
            raise RepmodError("quotient: submodule basis is not independent")
        extra = [c - u.cols for c in pivots if c >= u.cols]
        w = Matrix(field, np.eye(d, dtype=np.int64)[:, extra].reshape(d, len(extra)))
        change = hstack(field, [u, w]) if u.cols + w.cols else Matrix.zeros(field, d, 0)
        if d:
            inv = inverse(change)
            pi = Matrix(field, inv.a[u.cols :, :])
        else:
            pi = Matrix.zeros(field, 0, 0)
        projections.append(pi)
        lifts.append(w)
    dims = [projections[v].rows for v in range(alg.nv)]
    act = {}
    for b in alg.radical_indices:
        l, r = alg.left[b], alg.right[b]
        act[b] = projections[r] @ m.act[b] @ lifts[l]
    quot = Module(alg, dims, act)
    return quot, ModuleMap(m, quot, projections)


def kernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    return submodule(f.source, [kernel_basis(mat) for mat in f.mats])


def image(f: ModuleMap) -> tuple[Module, ModuleMap, ModuleMap]:
    """(image module, inclusion into target, epi part source ->> image)."""
    bases = [column_space_basis(mat) for mat in f.mats]
    img, incl = submodule(f.target, bases)
    epi_mats = []
    for v in range(f.source.algebra.nv):
        x = solve_right(bases[v], f.mats[v])
        epi_mats.append(x)
    return img, incl, ModuleMap(f.source, img, epi_mats)


def cokernel(f: ModuleMap) -> tuple[Module, ModuleMap]:
    bases = [column_space_basis(mat) for mat in f.mats]
    return quotient(f.target, bases)


@dataclass
class MapParts:
    kernel: Module
    kernel_inclusion: ModuleMap
    image: Module
    epi_part: ModuleMap
    mono_part: ModuleMap
    cokernel: Module
    cokernel_projection: ModuleMap


def map_parts(f: ModuleMap) -> MapParts:
    ker, ker_incl = kernel(f)
    img, mono, epi = image(f)
    cok, proj = cokernel(f)
    return MapParts(ker, ker_incl, img, epi, mono, cok, proj)


@dataclass
class ShortExactSeq:
    """A kernel-cokernel pair i: A -> B, p: B -> C in mod(A)."""

    i: ModuleMap
    p: ModuleMap

    def validate(self) -> None:
        if not self.i.is_injective():
            raise RepmodError("SES: i is not injective")
        if not self.p.is_surjective():
            raise RepmodError("SES: p is not surjective")
        if not (self.p @ self.i).is_zero():
            raise RepmodError("SES: p o i != 0")
        if self.i.source.total_dim + self.p.target.total_dim != self.i.target.total_dim:
            raise RepmodError("SES: dimensions do not add up")

    @property
    def sub(self) -> Module:
        return self.i.source

    @property
    def mid(self) -> Module:
        return self.i.target

    @property
    def quot(self) -> Module:
        return self.p.target


# -- polynomials over GF(p), for splitting endomorphisms ----------------------


def _poly_trim(f: list[int], p: int) -> list[int]:
    f = [c % p for c in f]
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_divmod(f, g, p):
    f = _poly_trim(list(f), p)
    g = _poly_trim(list(g), p)
    if not g:
        raise ZeroDivisionError
    q = [0] * max(0, len(f) - len(g) + 1)
    inv = pow(g[-1], p - 2, p)
    while len(f) >= len(g) and f:
        c = f[-1] * inv % p
        d = len(f) - len(g)
        q[d] = c
        for i, gc in enumerate(g):
            f[d + i] = (f[d + i] - c * gc) % p
        f = _poly_trim(f, p)
    return _poly_trim(q, p), f


def _poly_mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            out[i + j] = (out[i + j] + a * b) % p
    return _poly_trim(out, p)


def _poly_gcd(f, g, p):
    f, g = _poly_trim(list(f), p), _poly_trim(list(g), p)
    while g:
        f, g = g, _poly_divmod(f, g, p)[1]
    if f:
        inv = pow(f[-1], p - 2, p)
        f = [c * inv % p for c in f]
    return f


def _poly_sub(f, g, p):
    n = max(len(f), len(g))
    return _poly_trim([(f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0) for i in range(n)], p)


def _poly_xgcd(f, g, p):
    """Returns (d, u, v) with u f + v g = d, d the monic gcd."""
    r0, r1 = _poly_trim(list(f), p), _poly_trim(list(g), p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
        t0, t1 = t1, _poly_sub(t0, _poly_mul(q, t1, p), p)
    if r0:
        inv = pow(r0[-1], p - 2, p)
        r0 = [c * inv % p for c in r0]
        s0 = [c * inv % p for c in s0]
        t0 = [c * inv % p for c in t0]
    return r0, s0, t0


def _smallest_monic_divisor(f, p):
    """The smallest-degree nontrivial monic divisor of f (hence irreducible), or None."""
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if not _poly_divmod(f, g, p)[1]:
                return g
    return None


def _poly_factor(f, p):
    """Irreducible factorisation [(g, multiplicity)] of a monic polynomial."""
    f = _poly_trim(list(f), p)
    factors: list[tuple[tuple[int, ...], int]] = []
    while len(f) > 1:
        g = _smallest_monic_divisor(f, p)
        if g is None:
            g = f
        mult = 0
        while True:
            q, r = _poly_divmod(f, g, p)
            if r:
                break
            f = q if q else [1]
            mult += 1
        factors.append((tuple(g), mult))
    return factors


def _min_poly(mat: np.ndarray, field) -> list[int]:
    """Minimal polynomial of a square matrix over GF(p)."""
    p = field.p
    n = mat.shape[0]
    if n == 0:
        return [1]
    powers = [np.eye(n, dtype=np.int64).reshape(-1) % p]
    cur = np.eye(n, dtype=np.int64)
    field_mat = mat % p
    for _ in range(n):
        cur = (cur @ field_mat) % p
        flat = cur.reshape(-1)
        a = Matrix(field, np.column_stack(powers))
        b = Matrix(field, flat.reshape(-1, 1))
        x = solve_right(a, b)
        if x is not None:
            coeffs = [(-int(c)) % p for c in x.a[:, 0]] + [1]
            return _poly_trim(coeffs, p)
        powers.append(flat)
    raise RepmodError("minimal polynomial not found (unreachable)")


def _eval_poly_map(poly, f: ModuleMap) -> ModuleMap:
    """Evaluate a polynomial at an endomorphism (per vertex)."""
    out = ModuleMap.zero_map(f.source, f.target)
    power = ModuleMap.identity(f.source)
    for c in poly:
        if c:
            out = out + power.scale(int(c))
        power = f @ power
    return out


# -- Krull-Schmidt decomposition ----------------------------------------------


def _endo_candidates(end: list[ModuleMap], seed: int, p: int):
    """Deterministic schedule of endomorphisms to probe for splitting idempotents."""
    for f in end:
        yield f
    for i in range(len(end)):
        for j in range(i + 1, len(end)):
            yield end[i] + end[j]
    n = len(end)
    if p**n <= 4096:
        for coeffs in itertools.product(range(p), repeat=n):
            f = None
            for c, b in zip(coeffs, end):
                if c:
                    f = b.scale(c) if f is None else f + b.scale(c)
            if f is not None:
                yield f
    else:
        rng = np.random.RandomState(seed)
        for _ in range(300):
            coeffs = rng.randint(0, p, size=n)
            f = None
            for c, b in zip(coeffs, end):
                if c:
                    f = b.scale(int(c)) if f is None else f + b.scale(int(c))
            if f is not None:
                yield f


def _splitting_idempotent(m: Module, seed: int) -> ModuleMap | None:
    """A nontrivial idempotent endomorphism of m, or None if none is found.

    Probes the schedule of _endo_candidates; for each candidate whose minimal
    polynomial has two coprime factors, the corresponding spectral idempotent
    is returned.
    """
    p = m.algebra.field.p
    end = hom_basis(m, m)
    if len(end) <= 1:
        return None
    for f in _endo_candidates(end, seed, p):
        total = block_diag(m.algebra.field, list(f.mats)).a
        mp = _min_poly(total, m.algebra.field)
        factors = _poly_factor(mp, p)
        if len(factors) < 2:
            continue
        g, mult = factors[0]
        q1 = list(g)
        for _ in range(mult - 1):
            q1 = _poly_mul(q1, list(g), p)
        q2, r = _poly_divmod(mp, q1, p)
        assert not r
        d, u, v = _poly_xgcd(q1, q2, p)
        assert d == [1]
        e = _eval_poly_map(_poly_mul(v, q2, p), f)
        if e.is_zero() or (e - ModuleMap.identity(m)).is_zero():
            continue
        if (e @ e - e).is_zero():
            return e
    return None


def decompose(m: Module, seed: int = 0) -> list[tuple[Module, ModuleMap]]:
    """Indecomposable summands of m, each with its inclusion map.

    The direct sum of the returned summands is isomorphic to m; stacking the
    inclusions gives the isomorphism (see decompose_iso).
    """
    alg = m.algebra
    cached = alg.decompose_cache.get((m.key(), seed))
    if cached is not None:
        return cached
    result: list[tuple[Module, ModuleMap]] = []
    if m.is_zero():
        alg.decompose_cache[(m.key(), seed)] = result
        return result
    e = _splitting_idempotent(m, seed)
    if e is None:
        result = [(m, ModuleMap.identity(m))]
    else:
        one_minus = ModuleMap.identity(m) - e
        for part_map in (e, one_minus):
            bases = [column_space_basis(mat) for mat in part_map.mats]
            part, incl = submodule(m, bases)
            for piece, piece_incl in decompose(part, seed):
                result.append((piece, incl @ piece_incl))
    alg.decompose_cache[(m.key(), seed)] = result
    return result


def decompose_iso(m: Module, parts: list[tuple[Module, ModuleMap]]) -> ModuleMap:
    """The isomorphism (direct sum of parts) -> m assembled from the inclusions."""
    if not parts:
        return ModuleMap.zero_map(Module.zero(m.algebra), m)
    total, injections, _ = direct_sum([p for p, _ in parts])
    f = None
    for (part, incl), inj in zip(parts, injections):
        # the coordinate projection of the sum is the transpose of the injection
        term = ModuleMap(total, m, [a @ b.transpose() for a, b in zip(incl.mats, inj.mats)])
        f = term if f is None else f + term
    if not f.is_isomorphism():
        raise RepmodError("decompose produced a non-isomorphism")
    return f


def is_isomorphic(m: Module, n: Module, seed: int = 0) -> ModuleMap | None:
    """An isomorphism m -> n if one exists, else None.

    Quick invariants (dimension vectors, hom dimensions) are checked first;
    then the deterministic candidate schedule searches Hom(m, n) for an
    invertible element (exhaustively when the hom space is small).
    """
    if m.algebra is not n.algebra:
        raise RepmodError("is_isomorphic: modules over different algebras")
    alg = m.algebra
    k = (m.key(), n.key())
    cached = alg.iso_cache.get(k)
    if cached is not None:
        return cached[1] if cached[0] else None
    witness = _iso_search(m, n, seed)
    alg.iso_cache[k] = (witness is not None, witness)
    return witness


def _iso_search(m: Module, n: Module, seed: int) -> ModuleMap | None:
    if m.dims != n.dims:
        return None
    if m.is_zero():
        return ModuleMap.zero_map(m, n)
    homs = hom_basis(m, n)
    if not homs:
        return None
    if len(hom_basis(n, m)) != len(homs) or len(hom_basis(m, m)) != len(hom_basis(n, n)):
        return None
    for f in _endo_candidates(homs, seed, m.algebra.field.p):
        if f.is_isomorphism():
            return f
    return None


# -- standard modules ---------------------------------------------------------


def projective_module(a: Algebra, v: int) -> Module:
    """The indecomposable projective e_v A."""
    blocks = {w: [b for b in range(a.dim) if a.left[b] == v and a.right[b] == w] for w in range(a.nv)}
    dims = [len(blocks[w]) for w in range(a.nv)]
    act = {}
    for c in a.radical_indices:
        l, r = a.left[c], a.right[c]
        mat = np.zeros((dims[r], dims[l]), dtype=np.int64)
        for col, b in enumerate(blocks[l]):
            prod = a.mult[b, c]
            for k in np.nonzero(prod)[0]:
                mat[blocks[r].index(int(k)), col] = prod[k]
        act[c] = Matrix(a.field, mat)
    return Module(a, dims, act)


def simple_module(a: Algebra, v: int) -> Module:
    dims = [1 if w == v else 0 for w in range(a.nv)]
    return Module(a, dims, {})


def dual_module(n: Module) -> Module:
    """The linear dual, a module over the opposite algebra."""
    aop = n.algebra.opposite()
    act = {b: n.act[b].transpose() for b in n.algebra.radical_indices}
    return Module(aop, n.dims, act)


def injective_module(a: Algebra, v: int) -> Module:
    return dual_module(projective_module(a.opposite(), v))


@dataclass
class StandardModules:
    simples: list[Module]
    projectives: list[Module]
    injectives: list[Module]


def standard_modules(a: Algebra) -> StandardModules:
    key = "standard_modules"
    if key not in a._derived:
        a._derived[key] = StandardModules(
            [simple_module(a, v) for v in range(a.nv)],
            [projective_module(a, v) for v in range(a.nv)],
            [injective_module(a, v) for v in range(a.nv)],
        )
    return a._derived[key]


# -- standard projectives with generator bookkeeping --------------------------


@dataclass
class StdProjective:
    """A direct sum of indecomposable projectives e_v A with slot bookkeeping.

    block_index[(t, b)] gives, for slot t and algebra basis element b with
    left tag verts[t], the row of the corresponding module basis vector inside
    component right[b].
    """

    module: Module
    verts: tuple[int, ...]
    block_index: dict


def std_projective(a: Algebra, verts) -> StdProjective:
    verts = tuple(int(v) for v in verts)
    per_vertex_basis: dict[int, list[tuple[int, int]]] = {w: [] for w in range(a.nv)}
    for t, v in enumerate(verts):
        for b in range(a.dim):
            if a.left[b] == v:
                per_vertex_basis[a.right[b]].append((t, b))
    dims = [len(per_vertex_basis[w]) for w in range(a.nv)]
    index = {}
    for w in range(a.nv):
        for row, (t, b) in enumerate(per_vertex_basis[w]):
            index[(t, b)] = row
    act = {}
    for c in a.radical_indices:
        l, r = a.left[c], a.right[c]
        mat = np.zeros((dims[r], dims[l]), dtype=np.int64)
        for col, (t, b) in enumerate(per_vertex_basis[l]):
            prod = a.mult[b, c]
            for k in np.nonzero(prod)[0]:
                mat[index[(t, int(k))], col] = prod[k]
        act[c] = Matrix(a.field, mat)
    return StdProjective(Module(a, dims, act), verts, index)


def std_generator_rows(sp: StdProjective) -> list[tuple[int, int]]:
    """(vertex, row) of each slot generator e_{v_t} inside its component."""
    return [(v, sp.block_index[(t, v)]) for t, v in enumerate(sp.verts)]


def coeffs_of_std_map(f: ModuleMap, src: StdProjective, tgt: StdProjective) -> np.ndarray:
    """The algebra-element coefficient matrix of a map between standard projectives.

    coeffs[t, s] is the element x_ts in e_{tgt.verts[t]} A e_{src.verts[s]}
    with f(gen_s) = sum_t gen_t * x_ts.
    """
    a = f.source.algebra
    coeffs = np.zeros((len(tgt.verts), len(src.verts), a.dim), dtype=np.int64)
    for s, v in enumerate(src.verts):
        col = src.block_index[(s, v)]
        img = f.mats[v].a[:, col] if f.mats[v].cols else np.zeros(0, dtype=np.int64)
        for (t, b), row in tgt.block_index.items():
            if a.right[b] == v:
                coeffs[t, s, b] = img[row]
    return coeffs


def std_map_from_coeffs(src: StdProjective, tgt: StdProjective, coeffs: np.ndarray) -> ModuleMap:
    a = src.module.algebra
    mats = [np.zeros((tgt.module.dims[w], src.module.dims[w]), dtype=np.int64) for w in range(a.nv)]
    for (s, b), col in src.block_index.items():
        w = a.right[b]
        # image of the basis vector gen_s * b
        for t in range(len(tgt.verts)):
            x = coeffs[t, s]
            for bi in np.nonzero(x)[0]:
                prod = a.mult[int(bi), b]
                for k in np.nonzero(prod)[0]:
                    mats[w][tgt.block_index[(t, int(k))], col] += x[bi] * prod[k]
    return ModuleMap(src.module, tgt.module, [Matrix(a.field, mat) for mat in mats])


def dualize_std_coeffs(coeffs: np.ndarray) -> np.ndarray:
    """Coefficients of the Hom(-, A)-dual map, over the opposite algebra."""
    return np.swapaxes(coeffs, 0, 1)


# -- projective covers, presentations, resolutions ----------------------------


def radical_submodule(m: Module) -> tuple[Module, ModuleMap]:
    """The submodule m * rad(A)."""
    alg = m.algebra
    bases = []
    for v in range(alg.nv):
        cols = [m.act[b] for b in alg.radical_indices if alg.right[b] == v and m.act[b].cols]
        if cols:
            stacked = hstack(alg.field, cols)
            bases.append(column_space_basis(stacked))
        else:
            bases.append(Matrix.zeros(alg.field, m.dims[v], 0))
    return submodule(m, bases)


def top_data(m: Module) -> tuple[list[int], list[Matrix]]:
    """Top dimension vector of m and lifted generators (columns per vertex)."""
    alg = m.algebra
    field = alg.field
    _, rad_incl = radical_submodule(m)
    tops, reps = [], []
    for v in range(alg.nv):
        u = rad_incl.mats[v]
        d = m.dims[v]
        ext = Matrix(field, np.hstack([u.a, np.eye(d, dtype=np.int64)]))
        _, pivots = rref(ext)
        extra = [c - u.cols for c in pivots if c >= u.cols]
        tops.append(len(extra))
        reps.append(Matrix(field, np.eye(d, dtype=np.int64)[:, extra].reshape(d, len(extra))))
    return tops, reps


def projective_cover(m: Module) -> tuple[StdProjective, ModuleMap]:
    """The minimal surjection P ->> m from a standard projective."""
    alg = m.algebra
    cached = alg._derived.get(("cover", m.key()))
    if cached is not None:
        return cached
    tops, reps = top_data(m)
    verts = [v for v in range(alg.nv) for _ in range(tops[v])]
    sp = std_projective(alg, verts)
    cols_per_vertex: dict[int, dict[int, np.ndarray]] = {w: {} for w in range(alg.nv)}
    slot = 0
    for v in range(alg.nv):
        for c in range(tops[v]):
            gen_vec = reps[v].column(c)
            for b in range(alg.dim):
                if alg.left[b] != v:
                    continue
                w = alg.right[b]
                val = (m.action(b) @ gen_vec).a[:, 0]
                cols_per_vertex[w][sp.block_index[(slot, b)]] = val
            slot += 1
    mats = []
    for w in range(alg.nv):
        mat = np.zeros((m.dims[w], sp.module.dims[w]), dtype=np.int64)
        for col, val in cols_per_vertex[w].items():
            mat[:, col] = val
        mats.append(Matrix(alg.field, mat))
    cover = ModuleMap(sp.module, m, mats)
    if not cover.is_surjective():
        raise RepmodError("projective cover is not surjective")
    alg._derived[("cover", m.key())] = (sp, cover)
    return sp, cover


@dataclass
class Presentation:
    """A minimal projective presentation P1 -> P0 -> m -> 0."""

    p1: StdProjective
    p0: StdProjective
    d: ModuleMap
    aug: ModuleMap

    @property
    def module(self) -> Module:
        return self.aug.target


def minimal_presentation(m: Module) -> Presentation:
    alg = m.algebra
    cached = alg._derived.get(("presentation", m.key()))
    if cached is not None:
        return cached
    p0, cover = projective_cover(m)
    syz, incl = kernel(cover)
    p1, cover1 = projective_cover(syz)
    pres = Presentation(p1, p0, incl @ cover1, cover)
    alg._derived[("presentation", m.key())] = pres
    return pres


def minimal_resolution(m: Module, length: int) -> tuple[list[StdProjective], list[ModuleMap], ModuleMap]:
    """Minimal projective resolution P_length -> ... -> P_0 -> m -> 0.

    Returns (projectives, differentials d_k: P_k -> P_{k-1} for k >= 1, aug).
    Trailing zero projectives appear once the resolution has terminated.
    """
    alg = m.algebra
    cached = alg._derived.get(("resolution", m.key(), length))
    if cached is not None:
        return cached
    p0, cover = projective_cover(m)
    projs = [p0]
    diffs: list[ModuleMap] = []
    current_cover = cover
    for _ in range(length):
        syz, incl = kernel(current_cover)
        pk, coverk = projective_cover(syz)
        diffs.append(incl @ coverk)
        projs.append(pk)
        current_cover = coverk
    out = (projs, diffs, cover)
    alg._derived[("resolution", m.key(), length)] = out
    return out


def ext_dim(i: int, m: Module, n: Module) -> int:
    """dim Ext^i(m, n), from a minimal projective resolution of m."""
    if i < 0:
        raise RepmodError("ext_dim: negative degree")
    if i == 0:
        return hom_dim(m, n)
    projs, diffs, _ = minimal_resolution(m, i + 1)
    hom_spaces = [hom_basis(sp.module, n) for sp in projs]

    def comp_matrix(k):
        # Hom(P_{k-1}, n) -> Hom(P_k, n), phi -> phi o d_k
        src_basis, tgt_basis = hom_spaces[k - 1], hom_spaces[k]
        field = m.algebra.field
        cols = []
        for phi in src_basis:
            cols.append(hom_coords(phi @ diffs[k - 1], tgt_basis).a[:, 0])
        return Matrix(field, np.column_stack(cols) if cols else np.zeros((len(tgt_basis), 0), dtype=np.int64))

    mi = comp_matrix(i)
    mi1 = comp_matrix(i + 1)
    return (len(hom_spaces[i]) - rank(mi1)) - rank(mi)


def proj_dim(m: Module, cutoff: int) -> int | None:
    """Projective dimension of m; None means 'at least cutoff + 1'."""
    if m.is_zero():
        return 0
    projs, _, _ = minimal_resolution(m, cutoff + 1)
    last_nonzero = max(k for k, sp in enumerate(projs) if not sp.module.is_zero())
    if last_nonzero > cutoff:
        return None
    return last_nonzero


@dataclass
class HomologicalDims:
    proj_dims: list[int | None]
    global_dimension: int | None
    dominant_dimension: int | None
    cutoff: int


def dominant_dimension(a: Algebra, cutoff: int) -> int | None:
    """Largest n <= cutoff with 0 -> P -> I_1 -> ... -> I_n, all I_k projective-injective.

    Computed through the duality D: the minimal injective coresolution of P is
    the dual of the minimal projective resolution of D(P) over the opposite
    algebra.  Returns None for 'at least cutoff'.
    """
    aop = a.opposite()
    std = standard_modules(a)
    inj_is_proj = [
        any(is_isomorphic(iv, pw) is not None for pw in std.projectives)
        for iv in std.injectives
    ]
    best: int | None = None
    for v in range(a.nv):
        dp = dual_module(std.projectives[v])
        projs, _, _ = minimal_resolution(dp, cutoff)
        steps = 0
        for k in range(cutoff):
            qk = projs[k]
            if qk.module.is_zero():
                steps = None  # coresolution has ended: infinitely many zero steps
                break
            if all(inj_is_proj[w] for w in qk.verts):
                steps += 1
            else:
                break
        if steps is None:
            continue
        best = steps if best is None else min(best, steps)
    return best


def homological_dims(a: Algebra, cutoff: int, index: "IndecIndex | None" = None) -> HomologicalDims:
    std = standard_modules(a)
    simple_pds = [proj_dim(s, cutoff) for s in std.simples]
    gldim: int | None
    if any(pd is None for pd in simple_pds):
        gldim = None
    else:
        gldim = max(simple_pds) if simple_pds else 0
    per_indec: list[int | None] = []
    if index is not None:
        per_indec = [proj_dim(m, cutoff) for m in index.modules]
    return HomologicalDims(per_indec, gldim, dominant_dimension(a, cutoff), cutoff)


# -- transpose and AR translate -----------------------------------------------


def transpose_module(m: Module) -> Module:
    """The Auslander-Bridger transpose, a module over the opposite algebra.

    Computed by applying Hom(-, A) to a minimal projective presentation; with
    minimal presentations the transpose of a projective is exactly zero.
    """
    alg = m.algebra
    cached = alg._derived.get(("transpose", m.key()))
    if cached is not None:
        return cached
    pres = minimal_presentation(m)
    aop = alg.opposite()
    src = std_projective(aop, pres.p0.verts)
    tgt = std_projective(aop, pres.p1.verts)
    coeffs = coeffs_of_std_map(pres.d, pres.p1, pres.p0)
    dual = std_map_from_coeffs(src, tgt, dualize_std_coeffs(coeffs))
    tr, _ = cokernel(dual)
    alg._derived[("transpose", m.key())] = tr
    return tr


def ar_translate(z: Module) -> Module:
    """tau(z) = D Tr z."""
    return dual_module(transpose_module(z))


def ar_translate_inverse(m: Module) -> Module:
    """tau^{-1}(m) = Tr D m."""
    return transpose_module(dual_module(m))


# -- Ext^1 classes with coordinates -------------------------------------------


class ExtSpace:
    """Ext^1(z, a) with explicit coordinates.

    Classes are coordinatised through the minimal cover 0 -> K -> P0 -> z -> 0:
    Ext^1(z, a) = Hom(K, a) / restriction of Hom(P0, a).  realize() builds the
    pushout extension of a representative, class_of() recovers coordinates by
    lifting the cover through the deflation.
    """

    def __init__(self, z: Module, a: Module):
        if z.algebra is not a.algebra:
            raise RepmodError("ExtSpace: modules over different algebras")
        self.alg = z.algebra
        self.z = z
        self.a = a
        self.p0, self.cover = projective_cover(z)
        self.syz, self.syz_incl = kernel(self.cover)
        self.hom_k = hom_basis(self.syz, a)
        field = self.alg.field
        restricted_rows = []
        for psi in hom_basis(self.p0.module, a):
            restricted_rows.append(hom_coords(psi @ self.syz_incl, self.hom_k).a[:, 0])
        self.sub_rows = Matrix(
            field,
            np.vstack(restricted_rows) if restricted_rows else np.zeros((0, len(self.hom_k)), dtype=np.int64),
        )
        r, pivots = rref(self.sub_rows)
        self.reduced_rows = r
        self.pivots = pivots
        self.free = [c for c in range(len(self.hom_k)) if c not in pivots]
        self.dim = len(self.free)

    def _reduce(self, vec: np.ndarray) -> np.ndarray:
        p = self.alg.field.p
        v = np.array(vec, dtype=np.int64) % p
        for i, c in enumerate(self.pivots):
            if v[c]:
                v = (v - v[c] * self.reduced_rows.a[i]) % p
        return v

    def coords_of_hom(self, phi: ModuleMap) -> np.ndarray:
        full = hom_coords(phi, self.hom_k).a[:, 0]
        return self._reduce(full)[self.free]

    def lift(self, coords) -> ModuleMap:
        coords = np.asarray(coords, dtype=np.int64).reshape(-1)
        full = np.zeros(len(self.hom_k), dtype=np.int64)
        for c, f in zip(coords, self.free):
            full[f] = c
        return hom_from_coords(full, self.hom_k, self.syz, self.a)

    def realize(self, coords) -> ShortExactSeq:
        """A short exact sequence 0 -> a -> E -> z -> 0 with the given class."""
        phi = self.lift(coords)
        field = self.alg.field
        ap, injections, _ = direct_sum([self.a, self.p0.module])
        inj_a, inj_p = injections
        kappa = (inj_a @ phi.scale(field.p - 1)) + (inj_p @ self.syz_incl)
        e_mod, proj = cokernel(kappa)
        i = proj @ inj_a
        # the deflation E -> z is induced by (0, cover) on a + P0
        p_mats = []
        for v in range(self.alg.nv):
            zero_part = np.zeros((self.z.dims[v], self.a.dims[v]), dtype=np.int64)
            row = np.hstack([zero_part, self.cover.mats[v].a])
            x = solve_right(proj.mats[v].transpose(), Matrix(field, row.T))
            p_mats.append(x.transpose())
        p = ModuleMap(e_mod, self.z, p_mats)
        ses = ShortExactSeq(i, p)
        ses.validate()
        return ses

    def class_of(self, ses: ShortExactSeq) -> np.ndarray:
        """Coordinates of a short exact sequence 0 -> a -> B -> z -> 0."""
        lam = lift_through_epi(self.cover, ses.p)
        mu = lam @ self.syz_incl
        mu_a_mats = [solve_right(iv, mv) for iv, mv in zip(ses.i.mats, mu.mats)]
        if any(x is None for x in mu_a_mats):
            raise RepmodError("class_of: lift does not land in the subobject")
        phi = ModuleMap(self.syz, self.a, mu_a_mats)
        return self.coords_of_hom(phi)

    def pushout_matrix(self, other: "ExtSpace", g: ModuleMap) -> Matrix:
        """Matrix of the pushout action Ext^1(z, a) -> Ext^1(z, a') along g: a -> a'."""
        cols = []
        for f in range(self.dim):
            e = np.zeros(self.dim, dtype=np.int64)
            e[f] = 1
            cols.append(other.coords_of_hom(g @ self.lift(e)))
        return Matrix(
            self.alg.field,
            np.column_stack(cols) if cols else np.zeros((other.dim, 0), dtype=np.int64),
        )

    def pullback_matrix(self, other: "ExtSpace", h: ModuleMap) -> Matrix:
        """Matrix of the pullback action Ext^1(z, a) -> Ext^1(z', a) along h: z' -> z."""
        lam = lift_through_epi(h @ other.cover, self.cover)
        kappa_mats = [solve_right(iv, mv) for iv, mv in zip(self.syz_incl.mats, (lam @ other.syz_incl).mats)]
        if any(x is None for x in kappa_mats):
            raise RepmodError("pullback: restriction does not land in the syzygy")
        kappa = ModuleMap(other.syz, self.syz, kappa_mats)
        cols = []
        for f in range(self.dim):
            e = np.zeros(self.dim, dtype=np.int64)
            e[f] = 1
            cols.append(other.coords_of_hom(self.lift(e) @ kappa))
        return Matrix(
            self.alg.field,
            np.column_stack(cols) if cols else np.zeros((other.dim, 0), dtype=np.int64),
        )


def ext_space(z: Module, a: Module) -> "ExtSpace":
    """Cached ExtSpace(z, a)."""
    alg = z.algebra
    key = ("extspace", z.key(), a.key())
    cached = alg._derived.get(key)
    if cached is None:
        cached = ExtSpace(z, a)
        alg._derived[key] = cached
    return cached


def lift_through_epi(f: ModuleMap, p: ModuleMap) -> ModuleMap:
    """Some module map lam with p o lam = f, for p a split-free epi onto f's target.

    Solves the combined linear system (intertwiner equations plus p o lam = f);
    f's source must be projective or p an epi with Ext^1 vanishing; existence is
    guaranteed by the caller, failure raises.
    """
    src, mid = f.source, p.source
    alg = src.algebra
    homs = hom_basis(src, mid)
    field = alg.field
    if not homs:
        if f.is_zero():
            return ModuleMap.zero_map(src, mid)
        raise RepmodError("lift_through_epi: no maps available")
    cols = [(p @ h).flat() for h in homs]
    a = Matrix(field, np.column_stack(cols))
    b = Matrix(field, f.flat().reshape(-1, 1))
    x = solve_right(a, b)
    if x is None:
        raise RepmodError("lift_through_epi: lift does not exist")
    return hom_from_coords(x.a[:, 0], homs, src, mid)


# -- almost split sequences ----------------------------------------------------


def _local_residue(end: list[ModuleMap], m: Module) -> list[ModuleMap]:
    """Basis of rad End(m) for m with local endomorphism ring over GF(p)."""
    p = m.algebra.field.p
    ident = ModuleMap.identity(m)
    rad = []
    for h in end:
        lam = None
        for c in range(p):
            cand = h - ident.scale(c)
            total = block_diag(m.algebra.field, list(cand.mats)).a
            power = total
            n = total.shape[0]
            for _ in range(max(n.bit_length(), 1)):
                power = (power @ power) % p
            if not power.any():
                lam = c
                break
        if lam is None:
            raise RepmodError("endomorphism ring is not local; module is decomposable")
        cand = h - ident.scale(lam)
        if not cand.is_zero():
            rad.append(cand)
    # prune to an independent set
    out: list[ModuleMap] = []
    field = m.algebra.field
    flats: list[np.ndarray] = []
    for r in rad:
        if not flats:
            out.append(r)
            flats.append(r.flat())
            continue
        a = Matrix(field, np.column_stack(flats))
        if solve_right(a, Matrix(field, r.flat().reshape(-1, 1))) is None:
            out.append(r)
            flats.append(r.flat())
    return out


def is_almost_split(ses: ShortExactSeq, index: "IndecIndex") -> bool:
    """The defining test: non-split, and every non-retraction from an
    indecomposable of the index lifts through the deflation."""
    z = ses.quot
    # split?
    try:
        lift_through_epi(ModuleMap.identity(z), ses.p)
        return False
    except RepmodError:
        pass
    z_id = index.identify(z)
    for w_id, w in enumerate(index.modules):
        homs = hom_basis(w, z)
        if not homs:
            continue
        if w_id == z_id:
            u = is_isomorphic(w, z)
            required = [u @ r for r in _local_residue(hom_basis(w, w), w)]
        else:
            required = homs
        mid_homs = hom_basis(w, ses.mid)
        field = z.algebra.field
        flat_size = sum(z.dims[v] * w.dims[v] for v in range(z.algebra.nv))
        img_cols = [(ses.p @ h).flat() for h in mid_homs]
        img = Matrix(
            field,
            np.column_stack(img_cols) if img_cols else np.zeros((flat_size, 0), dtype=np.int64),
        )
        for g in required:
            if g.is_zero():
                continue
            if solve_right(img, Matrix(field, g.flat().reshape(-1, 1))) is None:
                return False
    return True


def ar_candidate(z: Module) -> ShortExactSeq:
    """An almost-split candidate ending at z: realize a socle class of Ext^1(z, tau z).

    The socle is taken with respect to the right action of rad End(z) by
    pullback; for split algebras every nonzero socle class is almost split.
    Validation against the full indecomposable list happens separately.
    """
    tz = ar_translate(z)
    ext = ext_space(z, tz)
    if ext.dim == 0:
        raise RepmodError("Ext^1(z, tau z) = 0; no almost split sequence")
    field = z.algebra.field
    rad = _local_residue(hom_basis(z, z), z)
    stacked = [ext.pullback_matrix(ext, r) for r in rad]
    if stacked:
        socle = kernel_basis(vstack(field, stacked))
    else:
        socle = Matrix.identity(field, ext.dim)
    if socle.cols == 0:
        raise RepmodError("socle of Ext^1(z, tau z) is zero")
    return ext.realize(socle.a[:, 0])


def ar_sequence(z: Module, index: "IndecIndex") -> ShortExactSeq:
    """The almost split sequence 0 -> tau z -> E -> z -> 0, validated by definition.

    z must be indecomposable and non-projective.  The socle candidate is tried
    first; if validation fails, every nonzero class of Ext^1(z, tau z) is
    searched (up to scalar).
    """
    z_id = index.identify(z)
    if z_id is None:
        raise RepmodError("ar_sequence: z is not in the indecomposable index")
    if index.is_projective[z_id]:
        raise RepmodError("ar_sequence: z is projective")
    cached = index.ar_cache.get(z_id)
    if cached is not None:
        return cached
    candidate = ar_candidate(z)
    if is_almost_split(candidate, index):
        index.ar_cache[z_id] = candidate
        return candidate
    ext = ext_space(z, ar_translate(z))
    p = z.algebra.field.p
    for coords in itertools.product(range(p), repeat=ext.dim):
        vec = np.array(coords, dtype=np.int64)
        if not vec.any():
            continue
        first = next(int(c) for c in vec if c)
        if first != 1:
            continue  # one representative per scalar line
        ses = ext.realize(vec)
        if is_almost_split(ses, index):
            index.ar_cache[z_id] = ses
            return ses
    raise RepmodError("no almost split sequence found (is the list complete?)")


# -- the indecomposable index ---------------------------------------------------


class IndecIndex:
    """All indecomposables of a representation-finite algebra, with stable ids."""

    def __init__(self, algebra: Algebra, modules: list[Module]):
        self.algebra = algebra
        self.modules = modules
        self._id_by_key = {m.key(): i for i, m in enumerate(modules)}
        self.ar_cache: dict[int, ShortExactSeq] = {}
        std = standard_modules(algebra)
        self.is_projective = [any(is_isomorphic(m, pv) is not None for pv in std.projectives) for m in modules]
        self.is_injective = [any(is_isomorphic(m, iv) is not None for iv in std.injectives) for m in modules]
        self.is_simple = [any(is_isomorphic(m, sv) is not None for sv in std.simples) for m in modules]
        self.projective_vertex = {v: self.identify(pv) for v, pv in enumerate(std.projectives)}

    def identify(self, m: Module) -> int | None:
        hit = self._id_by_key.get(m.key())
        if hit is not None:
            return hit
        for i, cand in enumerate(self.modules):
            if m.total_dim == cand.total_dim and m.dims == cand.dims:
                if is_isomorphic(m, cand) is not None:
                    return i
        return None

    def parts(self, m: Module, seed: int = 0) -> list[int]:
        """Iso classes (with multiplicity) of the summands of m."""
        out = []
        for part, _ in decompose(m, seed):
            pid = self.identify(part)
            if pid is None:
                raise RepmodError("module has a summand outside the index")
            out.append(pid)
        return sorted(out)

    def nonprojective_ids(self) -> list[int]:
        return [i for i in range(len(self.modules)) if not self.is_projective[i]]


def all_indecomposables(a: Algebra, dim_cap: int, seed: int = 0) -> IndecIndex:
    """Enumerate the indecomposables by knitting from the projectives.

    The closure adds, for each known indecomposable: the summands of rad P for
    projectives, of I/soc for injectives, the AR translate and the middle of
    the almost split sequence for non-projectives, and the inverse translate
    for non-injectives.  The result is validated by running the definitional
    almost-split test for every non-projective member.  Raises CapExceeded if
    a module above the dimension cap shows up.
    """
    cached = a._derived.get(("indec_index", dim_cap))
    if cached is not None:
        return cached
    std = standard_modules(a)
    known: list[Module] = []

    def add(m: Module) -> bool:
        if m.is_zero():
            return False
        if m.total_dim > dim_cap:
            raise CapExceeded(
                f"indecomposable of dimension {m.total_dim} exceeds dim_cap={dim_cap}"
            )
        for cand in known:
            if cand.dims == m.dims and is_isomorphic(cand, m) is not None:
                return False
        known.append(m)
        return True

    for pv in std.projectives:
        add(pv)

    def is_proj(m):
        return any(is_isomorphic(m, pv) is not None for pv in std.projectives)

    def is_inj(m):
        return any(is_isomorphic(m, iv) is not None for iv in std.injectives)

    processed: set[bytes] = set()
    changed = True
    while changed:
        changed = False
        for m in list(known):
            if m.key() in processed:
                continue
            processed.add(m.key())
            changed = True
            proj = is_proj(m)
            inj = is_inj(m)
            if proj:
                radm, _ = radical_submodule(m)
                for part, _ in decompose(radm, seed):
                    add(part)
            if inj:
                radop, _ = radical_submodule(dual_module(m))
                for part, _ in decompose(dual_module(radop), seed):
                    add(part)
            if not proj:
                for part, _ in decompose(ar_translate(m), seed):
                    add(part)
                ses = ar_candidate(m)
                for part, _ in decompose(ses.mid, seed):
                    add(part)
            if not inj:
                for part, _ in decompose(ar_translate_inverse(m), seed):
                    add(part)

    index = IndecIndex(a, known)
    # validation pass: every non-projective member gets a genuine AR sequence
    for i in index.nonprojective_ids():
        ses = ar_sequence(index.modules[i], index)
        for part, _ in decompose(ses.mid, seed):
            if index.identify(part) is None:
                raise RepmodError("validated AR sequence leaves the enumerated list")
    a._derived[("indec_index", dim_cap)] = index
    return index


def brute_force_indecomposables(a: Algebra, dim_cap: int, guard: int = 300000, seed: int = 0) -> list[Module]:
    """Independent oracle: every indecomposable of total dimension <= dim_cap.

    Enumerates, for every possible top, the radical submodules of the matching
    projective cover whose quotient stays under the cap, and decomposes the
    quotients.  Independent of the knitting path (no AR theory involved).
    """
    found: list[Module] = []

    def add(m):
        for cand in found:
            if cand.dims == m.dims and is_isomorphic(cand, m) is not None:
                return
        found.append(m)

    work = 0
    tops = [t for t in itertools.product(range(dim_cap + 1), repeat=a.nv) if 0 < sum(t) <= dim_cap]
    for top in tops:
        verts = [v for v in range(a.nv) for _ in range(top[v])]
        sp = std_projective(a, verts)
        radp, rad_incl = radical_submodule(sp.module)
        budget = dim_cap - sum(top)
        for codim in range(budget + 1):
            for split in _compositions(codim, [radp.dims[v] for v in range(a.nv)]):
                count = 1
                for v in range(a.nv):
                    count *= count_subspaces(a.field.p, radp.dims[v], radp.dims[v] - split[v])
                work += count
                if work > guard:
                    raise CapExceeded(f"brute-force enumeration exceeds guard={guard}")
                for bases in _subspace_tuples(a.field, radp.dims, split):
                    if not _action_closed(radp, bases):
                        continue
                    in_p = [rad_incl.mats[v] @ bases[v] for v in range(a.nv)]
                    quot, _ = quotient(sp.module, in_p)
                    for part, _ in decompose(quot, seed):
                        add(part)
    found.sort(key=lambda m: (m.total_dim, m.dims, m.key()))
    return found


def _compositions(total, caps):
    if not caps:
        if total == 0:
            yield ()
        return
    for first in range(min(total, caps[0]) + 1):
        for rest in _compositions(total - first, caps[1:]):
            yield (first,) + rest


def _subspace_tuples(field, dims, codims):
    gens = [list(iterate_subspaces(field, dims[v], dims[v] - codims[v])) for v in range(len(dims))]
    return itertools.product(*gens)


def _action_closed(m: Module, bases) -> bool:
    alg = m.algebra
    for b in alg.radical_indices:
        l, r = alg.left[b], alg.right[b]
        if solve_right(bases[r], m.act[b] @ bases[l]) is None:
            return False
    return True
