import numpy as np
import pytest

from exactcat.algebra import (
    algebra_dual_numbers,
    algebra_kA2,
    algebra_kA3,
    algebra_semisimple,
)
from exactcat.linalg import FieldPrime, Matrix
from exactcat.repmod import (
    ExtSpace,
    Module,
    ModuleMap,
    RepmodError,
    all_indecomposables,
    ar_sequence,
    ar_translate,
    brute_force_indecomposables,
    check_map,
    check_module,
    decompose,
    decompose_iso,
    direct_sum,
    dominant_dimension,
    dual_module,
    ext_dim,
    ext_space,
    hom_basis,
    hom_dim,
    homological_dims,
    is_isomorphic,
    map_parts,
    minimal_presentation,
    proj_dim,
    projective_cover,
    simple_module,
    standard_modules,
    transpose_module,
)

GF2 = FieldPrime(2)
GF5 = FieldPrime(5)


@pytest.fixture(scope="module")
def kA2():
    return algebra_kA2(GF2)


@pytest.fixture(scope="module")
def dual_numbers():
    return algebra_dual_numbers(GF2)


def test_standard_modules_kA2(kA2):
    std = standard_modules(kA2)
    assert [s.total_dim for s in std.simples] == [1, 1]
    assert [p.total_dim for p in std.projectives] == [2, 1]
    assert [i.total_dim for i in std.injectives] == [1, 2]
    assert std.projectives[0].dims == (1, 1)
    assert std.injectives[1].dims == (1, 1)
    for m in std.simples + std.projectives + std.injectives:
        check_module(m)


def test_standard_modules_self_injective(dual_numbers):
    std = standard_modules(dual_numbers)
    assert std.projectives[0].total_dim == 2
    assert is_isomorphic(std.projectives[0], std.injectives[0]) is not None


def test_standard_modules_semisimple():
    a = algebra_semisimple(GF5, 3)
    std = standard_modules(a)
    for v in range(3):
        assert is_isomorphic(std.simples[v], std.projectives[v]) is not None
        assert is_isomorphic(std.simples[v], std.injectives[v]) is not None


def test_hom_dimensions_kA2(kA2):
    std = standard_modules(kA2)
    s1, s2 = std.simples
    p1 = std.projectives[0]
    assert hom_dim(s1, s1) == 1
    assert hom_dim(s1, s2) == 0
    assert hom_dim(p1, s1) == 1
    assert hom_dim(p1, p1) == 1
    assert hom_dim(std.projectives[1], p1) == 1
    for f in hom_basis(p1, s1):
        check_map(f)


def test_map_parts_identity_and_zero(kA2):
    std = standard_modules(kA2)
    p1 = std.projectives[0]
    ident = ModuleMap.identity(p1)
    parts = map_parts(ident)
    assert parts.kernel.total_dim == 0
    assert parts.image.total_dim == p1.total_dim
    assert parts.cokernel.total_dim == 0
    z = ModuleMap.zero_map(p1, std.simples[0])
    parts = map_parts(z)
    assert parts.kernel.total_dim == p1.total_dim
    assert parts.image.total_dim == 0
    assert parts.cokernel.total_dim == 1


def test_map_parts_cover_kernel(kA2):
    std = standard_modules(kA2)
    s1, s2 = std.simples
    sp, cover = projective_cover(s1)
    assert sp.module.dims == std.projectives[0].dims
    parts = map_parts(cover)
    assert is_isomorphic(parts.kernel, s2) is not None
    # f = mono o epi
    recomposed = parts.mono_part @ parts.epi_part
    assert all((a - b).is_zero() for a, b in zip(recomposed.mats, cover.mats))


def test_decompose_sum_of_simples(kA2):
    std = standard_modules(kA2)
    s1 = std.simples[0]
    total, _, _ = direct_sum([s1, s1])
    parts = decompose(total)
    assert len(parts) == 2
    for part, _ in parts:
        assert is_isomorphic(part, s1) is not None
    decompose_iso(total, parts)


def test_decompose_regular_module(kA2):
    std = standard_modules(kA2)
    total, _, _ = direct_sum([std.projectives[0], std.projectives[1]])
    parts = decompose(total)
    assert sorted(p.total_dim for p, _ in parts) == [1, 2]
    found = {tuple(p.dims) for p, _ in parts}
    assert found == {(1, 1), (0, 1)}


def test_decompose_shuffle_invariance(kA2):
    std = standard_modules(kA2)
    total, _, _ = direct_sum([std.simples[0], std.projectives[0], std.simples[1]])
    reference = None
    for seed in (0, 1, 2, 7):
        parts = decompose(total, seed=seed)
        multiset = sorted(tuple(p.dims) for p, _ in parts)
        if reference is None:
            reference = multiset
        assert multiset == reference
        decompose_iso(total, parts)


def test_is_isomorphic_basics(kA2):
    std = standard_modules(kA2)
    s1, s2 = std.simples
    assert is_isomorphic(s1, s1) is not None
    assert is_isomorphic(s1, s2) is None


def test_is_isomorphic_random_base_change():
    a = algebra_kA3(GF5, zero_relation=True)
    std = standard_modules(a)
    p1 = std.projectives[0]
    rng = np.random.RandomState(4)
    # conjugate the actions of P1 by a random invertible change of basis
    changes = []
    for d in p1.dims:
        while True:
            c = Matrix(a.field, rng.randint(0, 5, size=(d, d)))
            from exactcat.linalg import is_invertible, inverse

            if is_invertible(c):
                changes.append((c, inverse(c)))
                break
    act = {}
    for b in a.radical_indices:
        l, r = a.left[b], a.right[b]
        act[b] = changes[r][1] @ p1.act[b] @ changes[l][0]
    twisted = Module(a, p1.dims, act)
    check_module(twisted)
    witness = is_isomorphic(p1, twisted)
    assert witness is not None
    check_map(witness)


def test_projective_cover_of_projective(kA2):
    std = standard_modules(kA2)
    p1 = std.projectives[0]
    sp, cover = projective_cover(p1)
    assert cover.is_isomorphism()


def test_minimal_presentation_simple_kA2(kA2):
    std = standard_modules(kA2)
    pres = minimal_presentation(std.simples[0])
    assert pres.p0.verts == (0,)
    assert pres.p1.verts == (1,)
    check_map(pres.d)


def test_minimal_presentation_projective(kA2):
    std = standard_modules(kA2)
    pres = minimal_presentation(std.projectives[1])
    assert pres.p1.module.total_dim == 0


def test_minimal_presentation_dual_numbers(dual_numbers):
    std = standard_modules(dual_numbers)
    pres = minimal_presentation(std.simples[0])
    assert pres.p0.verts == (0,) and pres.p1.verts == (0,)
    # the differential is multiplication by x, so it is not zero
    assert not pres.d.is_zero()


def test_ext_zero_equals_hom(kA2):
    std = standard_modules(kA2)
    rng = np.random.RandomState(0)
    mods = std.simples + std.projectives + std.injectives
    for _ in range(20):
        m = mods[rng.randint(len(mods))]
        n = mods[rng.randint(len(mods))]
        assert ext_dim(0, m, n) == hom_dim(m, n)


def test_ext_one_kA2(kA2):
    std = standard_modules(kA2)
    s1, s2 = std.simples
    assert ext_dim(1, s1, s2) == 1
    assert ext_dim(1, s2, s1) == 0
    for n in std.simples:
        assert ext_dim(1, std.projectives[0], n) == 0


def test_proj_dims(kA2, dual_numbers):
    std = standard_modules(kA2)
    assert proj_dim(std.simples[0], 6) == 1
    assert proj_dim(std.projectives[0], 6) == 0
    sd = standard_modules(dual_numbers)
    assert proj_dim(sd.simples[0], 6) is None  # infinite


def test_homological_dims_semisimple():
    a = algebra_semisimple(GF2, 2)
    dims = homological_dims(a, 6)
    assert dims.global_dimension == 0
    assert dims.dominant_dimension is None  # at least the cutoff


def test_homological_dims_dual_numbers(dual_numbers):
    dims = homological_dims(dual_numbers, 6)
    assert dims.global_dimension is None  # infinite
    assert dims.dominant_dimension is None  # self-injective


def test_dominant_dimension_kA2(kA2):
    # I1 = S1 is not projective, and the cover data gives domdim(kA2) = 1:
    # 0 -> P2 -> P1 -> S1 with P1 projective-injective, next term not
    d = dominant_dimension(kA2, 6)
    assert d == 1


def test_transpose_of_projective_is_zero(kA2):
    std = standard_modules(kA2)
    assert transpose_module(std.projectives[0]).total_dim == 0


def test_transpose_dual_numbers(dual_numbers):
    std = standard_modules(dual_numbers)
    s = std.simples[0]
    tr = transpose_module(s)
    # presentation is multiplication by x, which is self-dual
    assert tr.total_dim == 1
    assert is_isomorphic(tr, simple_module(dual_numbers.opposite(), 0)) is not None


def test_transpose_simple_kA2(kA2):
    std = standard_modules(kA2)
    tr = transpose_module(std.simples[0])
    check_module(tr)
    # over kA2^op the transpose of S1 is the simple at vertex 2
    assert tr.dims == (0, 1)


def test_tau_kA2(kA2):
    std = standard_modules(kA2)
    tz = ar_translate(std.simples[0])
    assert is_isomorphic(tz, std.simples[1]) is not None


def test_ext_space_realize_round_trip(kA2):
    std = standard_modules(kA2)
    s1, s2 = std.simples
    ext = ExtSpace(s1, s2)
    assert ext.dim == 1
    ses = ext.realize([1])
    ses.validate()
    assert ses.mid.dims == (1, 1)
    assert not any(m.is_zero() for m in ses.mid.act.values())  # the middle is P1
    assert ext.class_of(ses).tolist() == [1]
    split = ext.realize([0])
    assert ext.class_of(split).tolist() == [0]


def test_ext_space_pushout_to_zero(kA2):
    std = standard_modules(kA2)
    s1, s2 = std.simples
    ext = ExtSpace(s1, s2)
    zero = Module.zero(kA2)
    other = ExtSpace(s1, zero)
    g = ModuleMap.zero_map(s2, zero)
    push = ext.pushout_matrix(other, g)
    assert push.cols == 1 and push.rows == 0  # Ext^1(S1, 0) = 0


def test_ar_sequence_kA2(kA2):
    index = all_indecomposables(kA2, dim_cap=6)
    std = standard_modules(kA2)
    s1 = index.modules[index.identify(std.simples[0])]
    ses = ar_sequence(s1, index)
    assert is_isomorphic(ses.sub, std.simples[1]) is not None
    assert is_isomorphic(ses.mid, std.projectives[0]) is not None
    # the middle is indecomposable: End is local of dimension 1
    assert len(decompose(ses.mid)) == 1


def test_ar_sequence_dual_numbers(dual_numbers):
    index = all_indecomposables(dual_numbers, dim_cap=6)
    std = standard_modules(dual_numbers)
    s = index.modules[index.identify(std.simples[0])]
    ses = ar_sequence(s, index)
    assert is_isomorphic(ses.sub, std.simples[0]) is not None
    assert is_isomorphic(ses.mid, std.projectives[0]) is not None


def test_ar_sequence_rejects_projective(kA2):
    index = all_indecomposables(kA2, dim_cap=6)
    std = standard_modules(kA2)
    with pytest.raises(RepmodError):
        ar_sequence(index.modules[index.identify(std.projectives[1])], index)


def test_all_indecomposables_counts():
    assert len(all_indecomposables(algebra_kA2(GF2), 8).modules) == 3
    assert len(all_indecomposables(algebra_dual_numbers(GF2), 8).modules) == 2
    assert len(all_indecomposables(algebra_kA3(GF2, True), 8).modules) == 5
    assert len(all_indecomposables(algebra_kA3(GF2, False), 8).modules) == 6
    assert len(all_indecomposables(algebra_semisimple(GF2, 3), 8).modules) == 3


def test_all_indecomposables_gf5():
    assert len(all_indecomposables(algebra_kA3(GF5, True), 8).modules) == 5
    assert len(all_indecomposables(algebra_dual_numbers(GF5), 8).modules) == 2


def test_knitting_matches_brute_force():
    for alg, cap in [
        (algebra_kA2(GF2), 3),
        (algebra_dual_numbers(GF2), 3),
        (algebra_kA3(GF2, True), 3),
        (algebra_kA3(GF2, False), 3),
    ]:
        index = all_indecomposables(alg, 8)
        brute = brute_force_indecomposables(alg, cap)
        knitted = sorted(m.dims for m in index.modules if m.total_dim <= cap)
        assert sorted(m.dims for m in brute) == knitted
        for m in brute:
            assert index.identify(m) is not None


def test_tr_squared_on_indecomposables():
    for alg in (algebra_kA2(GF2), algebra_kA3(GF5, True)):
        index = all_indecomposables(alg, 8)
        for i in index.nonprojective_ids():
            m = index.modules[i]
            back = transpose_module(transpose_module(m))
            assert is_isomorphic(back, m) is not None


def test_dual_module_involution(kA2):
    std = standard_modules(kA2)
    for m in std.projectives + std.simples:
        assert is_isomorphic(dual_module(dual_module(m)), m) is not None


def test_map_parts_random_property():
    # f = mono o epi and dim(source) = dim(kernel) + dim(image), on random maps
    from exactcat.repmod import hom_from_coords

    a = algebra_kA3(GF5, zero_relation=True)
    std = standard_modules(a)
    mods = std.simples + std.projectives + std.injectives
    rng = np.random.RandomState(17)
    for _ in range(30):
        m = mods[rng.randint(len(mods))]
        n = mods[rng.randint(len(mods))]
        homs = hom_basis(m, n)
        if not homs:
            continue
        f = hom_from_coords(rng.randint(0, 5, size=len(homs)), homs, m, n)
        parts = map_parts(f)
        recomposed = parts.mono_part @ parts.epi_part
        assert all((x - y).is_zero() for x, y in zip(recomposed.mats, f.mats))
        assert m.total_dim == parts.kernel.total_dim + parts.image.total_dim
        assert n.total_dim == parts.image.total_dim + parts.cokernel.total_dim


def test_homological_dims_per_indecomposable(kA2):
    index = all_indecomposables(kA2, 8)
    dims = homological_dims(kA2, 6, index)
    assert len(dims.proj_dims) == 3
    by_dims = {index.modules[i].dims: pd for i, pd in enumerate(dims.proj_dims)}
    assert by_dims[(1, 1)] == 0 and by_dims[(0, 1)] == 0 and by_dims[(1, 0)] == 1
