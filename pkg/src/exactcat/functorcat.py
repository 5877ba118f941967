"""The bridge between an additive subcategory C = add(M) of mod(Lambda) and
mod(Gamma) for Gamma = End(M).

Gamma is assembled from the hom blocks between the generator summands, with
composition as multiplication; the Yoneda functor Hom(M, -) identifies add(M)
with the projective Gamma-modules, and the exact left adjoint L sends a
finitely presented Gamma-module back to the cokernel (in mod Lambda) of the
transported presentation morphism.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Algebra, validate_algebra
from .linalg import Matrix, block_diag, inverse, solve_right
from .repmod import (
    Module,
    ModuleMap,
    Presentation,
    StdProjective,
    cokernel,
    coeffs_of_std_map,
    decompose,
    direct_sum,
    hom_basis,
    hom_coords,
    is_isomorphic,
    lift_through_epi,
    minimal_presentation,
    projective_module,
    std_projective,
)


class FunctorcatError(Exception):
    pass


@dataclass
class AdditiveCategorySpec:
    """C = add(M) for M the direct sum of pairwise non-isomorphic indecomposables."""

    algebra: Algebra
    generators: list[Module]
    contains_projectives: bool = False
    extension_closed: bool = False

    def __post_init__(self):
        for i, m in enumerate(self.generators):
            for n in self.generators[i + 1 :]:
                if is_isomorphic(m, n) is not None:
                    raise FunctorcatError("generator summands are not pairwise non-isomorphic")

    def identify_summand(self, m: Module) -> int | None:
        for i, g in enumerate(self.generators):
            if m.dims == g.dims and is_isomorphic(m, g) is not None:
                return i
        return None


class EndAlgebra:
    """Gamma = End(M) together with its basis dictionary.

    Basis layout: the idempotents are the identity maps of the summands (one
    per summand, in order), followed by the radical part: the non-isomorphism
    basis maps between summands.  dictionary[b] is the underlying module map
    M_{src} -> M_{tgt} of basis element b; a basis element phi: M_i -> M_j
    sits in e_j Gamma e_i, so its vertex tags are (left, right) = (j, i).
    """

    def __init__(self, spec: AdditiveCategorySpec):
        self.spec = spec
        gens = spec.generators
        n = len(gens)
        field = spec.algebra.field
        p = field.p

        dictionary: list[ModuleMap] = []
        labels: list[str] = []
        left: list[int] = []
        right: list[int] = []
        for i, g in enumerate(gens):
            dictionary.append(ModuleMap.identity(g))
            labels.append(f"id{i}")
            left.append(i)
            right.append(i)
        # diagonal radical parts: h - lambda*id for the nilpotent shift of each basis map
        for i, g in enumerate(gens):
            ident = ModuleMap.identity(g)
            seen: list[np.ndarray] = []
            for h in hom_basis(g, g):
                lam = _nilpotent_shift(h, ident, p)
                cand = h - ident.scale(lam)
                if cand.is_zero():
                    continue
                if _independent(seen, cand, field):
                    seen.append(cand.flat())
                    dictionary.append(cand)
                    labels.append(f"r{i}.{i}.{len(seen) - 1}")
                    left.append(i)
                    right.append(i)
        for i, gi in enumerate(gens):
            for j, gj in enumerate(gens):
                if i == j:
                    continue
                for k, h in enumerate(hom_basis(gi, gj)):
                    dictionary.append(h)
                    labels.append(f"r{i}.{j}.{k}")
                    left.append(j)
                    right.append(i)

        dim = len(dictionary)
        hom_cache: dict[tuple[int, int], list[ModuleMap]] = {}

        def block(src: int, tgt: int) -> list[int]:
            return [b for b in range(dim) if right[b] == src and left[b] == tgt]

        mult = np.zeros((dim, dim, dim), dtype=np.int64)
        for x in range(dim):
            for y in range(dim):
                # x in e_{left x} G e_{right x}, y likewise; x*y is composition
                # dictionary[x] o dictionary[y], defined when right[x] == left[y]
                if right[x] != left[y]:
                    continue
                comp = dictionary[x] @ dictionary[y]
                tgt_block = block(right[y], left[x])
                basis_maps = [dictionary[b] for b in tgt_block]
                coords = hom_coords(comp, basis_maps)
                for row, b in enumerate(tgt_block):
                    mult[x, y, b] = coords.a[row, 0]

        self.gamma = Algebra(field, n, labels, left, right, mult)
        self.dictionary = dictionary
        report = validate_algebra(self.gamma)
        if not report.ok:
            raise FunctorcatError(
                "endomorphism algebra failed validation: "
                + "; ".join(i.label for i in report.failures())
            )
        expected = sum(len(hom_basis(a, b)) for a in gens for b in gens)
        if self.gamma.dim != expected:
            raise FunctorcatError("endomorphism algebra dimension mismatch")
        self._yoneda_cache: dict[bytes, tuple[Module, list[list[ModuleMap]]]] = {}

    @property
    def summand_idempotents(self) -> dict[int, int]:
        return {i: i for i in range(len(self.spec.generators))}

    # -- Yoneda ---------------------------------------------------------------

    def _yoneda_data(self, x: Module) -> tuple[Module, list[list[ModuleMap]]]:
        cached = self._yoneda_cache.get(x.key())
        if cached is not None:
            return cached
        gens = self.spec.generators
        gamma = self.gamma
        bases = [hom_basis(g, x) for g in gens]
        dims = [len(b) for b in bases]
        act = {}
        for b in gamma.radical_indices:
            src_summand = gamma.left[b]   # component the action maps from
            tgt_summand = gamma.right[b]  # component it maps to
            phi = self.dictionary[b]      # phi: M_{tgt_summand} -> M_{src_summand}
            cols = []
            for h in bases[src_summand]:
                cols.append(hom_coords(h @ phi, bases[tgt_summand]).a[:, 0])
            mat = (
                Matrix(gamma.field, np.column_stack(cols))
                if cols
                else Matrix.zeros(gamma.field, dims[tgt_summand], 0)
            )
            act[b] = mat
        module = Module(gamma, dims, act)
        data = (module, bases)
        self._yoneda_cache[x.key()] = data
        return data

    def yoneda(self, x: Module) -> Module:
        """The right Gamma-module Hom(M, x)."""
        return self._yoneda_data(x)[0]

    def yoneda_map(self, u: ModuleMap) -> ModuleMap:
        """Hom(M, u): yoneda(source) -> yoneda(target)."""
        src, src_bases = self._yoneda_data(u.source)
        tgt, tgt_bases = self._yoneda_data(u.target)
        mats = []
        for i in range(len(self.spec.generators)):
            cols = [hom_coords(u @ h, tgt_bases[i]).a[:, 0] for h in src_bases[i]]
            mats.append(
                Matrix(self.gamma.field, np.column_stack(cols))
                if cols
                else Matrix.zeros(self.gamma.field, tgt.dims[i], src.dims[i])
            )
        return ModuleMap(src, tgt, mats)

    # -- transport of projective maps back to add(M) ---------------------------

    def sum_of_generators(self, verts) -> tuple[Module, list[ModuleMap], list[ModuleMap]]:
        mods = [self.spec.generators[v] for v in verts]
        if not mods:
            z = Module.zero(self.spec.algebra)
            return z, [], []
        return direct_sum(mods)

    def unyoneda_std(self, d: ModuleMap, p1: StdProjective, p0: StdProjective) -> ModuleMap:
        """The map f in add(M) with yoneda(f) = d, for d between standard projectives."""
        coeffs = coeffs_of_std_map(d, p1, p0)
        src, src_inj, _ = self.sum_of_generators(p1.verts)
        tgt, tgt_inj, _ = self.sum_of_generators(p0.verts)
        f = ModuleMap.zero_map(src, tgt)
        for t in range(len(p0.verts)):
            for s in range(len(p1.verts)):
                x = coeffs[t, s]
                for b in np.nonzero(x)[0]:
                    phi = self.dictionary[int(b)]  # M_{p1.verts[s]} -> M_{p0.verts[t]}
                    term = tgt_inj[t] @ phi @ _projection(src_inj[s])
                    f = f + term.scale(int(x[b]))
        return f

    def canonical_std_iso(self, verts) -> tuple[Module, ModuleMap]:
        """yoneda(sum of M_v) with its canonical isomorphism onto the standard projective.

        A hom h: M_i -> sum M_v goes to the coordinate vector of its components
        in the Gamma basis dictionary; this is a Gamma-module map because the
        multiplication of Gamma was defined through exactly that dictionary.
        """
        verts = tuple(verts)
        x, _, projections = self.sum_of_generators(verts)
        yx, bases = self._yoneda_data(x)
        sp = std_projective(self.gamma, verts)
        gamma = self.gamma
        mats = []
        for i in range(len(self.spec.generators)):
            cols = []
            for h in bases[i]:
                col = np.zeros(sp.module.dims[i], dtype=np.int64)
                for s, v in enumerate(verts):
                    blk = [b for b in range(gamma.dim) if gamma.left[b] == v and gamma.right[b] == i]
                    coords = hom_coords(projections[s] @ h, [self.dictionary[b] for b in blk])
                    for row, b in enumerate(blk):
                        col[sp.block_index[(s, b)]] = coords.a[row, 0]
                cols.append(col)
            mats.append(
                Matrix(gamma.field, np.column_stack(cols))
                if cols
                else Matrix.zeros(gamma.field, sp.module.dims[i], 0)
            )
        iso = ModuleMap(yx, sp.module, mats)
        if not iso.is_isomorphism():
            raise FunctorcatError("canonical identification is not invertible")
        return x, iso

    def unyoneda_map(self, g: ModuleMap) -> "TransportedMap":
        """Transport a map between projective Gamma-modules into add(M).

        Returns f: X -> Y in mod(Lambda) together with isomorphisms
        phi_src: yoneda(X) -> g.source and phi_tgt: yoneda(Y) -> g.target
        satisfying phi_tgt o yoneda(f) = g o phi_src.
        """
        src_std, src_iso = self._projectivize(g.source)
        tgt_std, tgt_iso = self._projectivize(g.target)
        conj = _invert_map(tgt_iso) @ g @ src_iso
        f = self.unyoneda_std(conj, src_std, tgt_std)
        yf = self.yoneda_map(f)
        _, x_can = self.canonical_std_iso(src_std.verts)
        _, y_can = self.canonical_std_iso(tgt_std.verts)
        phi_src = src_iso @ x_can
        phi_tgt = tgt_iso @ y_can
        lhs = phi_tgt @ yf
        rhs = g @ phi_src
        if any(not (a - b).is_zero() for a, b in zip(lhs.mats, rhs.mats)):
            raise FunctorcatError("unyoneda transport does not commute")
        return TransportedMap(f, phi_src, phi_tgt)

    def _projectivize(self, m: Module) -> tuple[StdProjective, ModuleMap]:
        """An isomorphism std_projective -> m for a projective Gamma-module m."""
        verts = []
        for part, _ in decompose(m):
            v = None
            for i in range(len(self.spec.generators)):
                if is_isomorphic(part, projective_module(self.gamma, i)) is not None:
                    v = i
                    break
            if v is None:
                raise FunctorcatError("module is not projective over the endomorphism algebra")
            verts.append(v)
        verts.sort()
        sp = std_projective(self.gamma, verts)
        iso = is_isomorphic(sp.module, m)
        if iso is None:
            raise FunctorcatError("projectivization failed")
        return sp, iso

    # -- the left adjoint L -----------------------------------------------------

    def localize(self, f_mod: Module) -> Module:
        """L(F) = coker(f) for the transported minimal presentation morphism f."""
        return self.presentation_in_category(f_mod).cokernel

    def presentation_in_category(self, f_mod: Module) -> "CategoryPresentation":
        key = ("L", f_mod.key())
        cached = self.gamma._derived.get(key)
        if cached is not None:
            return cached
        pres = minimal_presentation(f_mod)
        f = self.unyoneda_std(pres.d, pres.p1, pres.p0)
        cok, proj = cokernel(f)
        out = CategoryPresentation(pres, f, cok, proj)
        self.gamma._derived[key] = out
        return out

    def localize_map(self, eta: ModuleMap) -> ModuleMap:
        """L on morphisms: the induced map coker(f_src) -> coker(f_tgt)."""
        src = self.presentation_in_category(eta.source)
        tgt = self.presentation_in_category(eta.target)
        # lift eta o aug_src through aug_tgt, then transport and descend
        alpha = lift_through_epi(eta @ src.presentation.aug, tgt.presentation.aug)
        a0 = self.unyoneda_std(alpha, src.presentation.p0, tgt.presentation.p0)
        mats = []
        for v in range(self.spec.algebra.nv):
            sol = solve_right(
                src.projection.mats[v].transpose(),
                (tgt.projection.mats[v] @ a0.mats[v]).transpose(),
            )
            if sol is None:
                raise FunctorcatError("localized map does not descend")
            mats.append(sol.transpose())
        return ModuleMap(src.cokernel, tgt.cokernel, mats)


@dataclass
class TransportedMap:
    f: ModuleMap
    source_iso: ModuleMap
    target_iso: ModuleMap


@dataclass
class CategoryPresentation:
    presentation: Presentation
    f: ModuleMap
    cokernel: Module
    projection: ModuleMap


def end_algebra(spec: AdditiveCategorySpec) -> EndAlgebra:
    return EndAlgebra(spec)


def _nilpotent_shift(h: ModuleMap, ident: ModuleMap, p: int) -> int:
    """The unique scalar lam with h - lam*id nilpotent (local End over GF(p))."""
    for lam in range(p):
        cand = h - ident.scale(lam)
        total = block_diag(h.source.algebra.field, list(cand.mats)).a % p
        power = total
        n = max(total.shape[0], 1)
        for _ in range(n.bit_length() + 1):
            power = (power @ power) % p
        if not power.any():
            return lam
    raise FunctorcatError("endomorphism ring of a generator summand is not local")


def _independent(seen: list[np.ndarray], cand: ModuleMap, field) -> bool:
    if not seen:
        return True
    a = Matrix(field, np.column_stack(seen))
    return solve_right(a, Matrix(field, cand.flat().reshape(-1, 1))) is None


def _projection(inj: ModuleMap) -> ModuleMap:
    return ModuleMap(inj.target, inj.source, [m.transpose() for m in inj.mats])


def _invert_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(f.target, f.source, [inverse(m) for m in f.mats])
