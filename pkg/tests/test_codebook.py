import pytest

from srr.codebook import (
    LrcProfile,
    SchemeError,
    StorageScheme,
    example1_profile,
    is_mds,
    lrc_layout,
    make_explicit,
    make_lrc,
    make_mds,
    make_replication,
    make_rm1,
    make_simplex,
    pyramid_profile,
)
from srr.galois import FieldSpec


@pytest.mark.parametrize("n,k,p,sys_", [(4, 2, 3, True), (8, 2, 11, False), (6, 3, 7, True), (10, 4, 13, True), (4, 3, 2, True)])
def test_mds_constructions(n, k, p, sys_):
    if p == 2 and n - k > 1:
        pytest.skip("binary MDS codes beyond single parity do not exist")
    s = make_mds(n, k, FieldSpec(p), systematic=sys_)
    assert s.n == n and is_mds(s)
    if sys_:
        assert s.columns[:k] == tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def test_mds_impossible_field():
    with pytest.raises(SchemeError):
        make_mds(8, 3, FieldSpec(2))


def test_simplex_and_rm_shapes():
    s = make_simplex(3)
    assert s.n == 7 and len(set(s.columns)) == 7
    assert s.describe()[:3] == ["a", "b", "a+b"]
    rm = make_rm1(4)
    assert rm.n == 8 and all(c[-1] == 1 for c in rm.columns)
    assert make_rm1(4, systematic=True).systematic_servers()


def test_validation_errors():
    gf2 = FieldSpec(2)
    with pytest.raises(SchemeError):
        make_explicit(gf2, 2, [(1, 0), (1, 0)])  # rank 1
    with pytest.raises(SchemeError):
        make_explicit(gf2, 2, [(1, 0), (0, 0), (0, 1)])
    with pytest.raises(SchemeError):
        make_explicit(gf2, 2, [(1, 0), (0, 2)])
    with pytest.raises(SchemeError):
        make_explicit(gf2, 2, [(1, 0), (0, 1)], mu=0)
    with pytest.raises(SchemeError):
        StorageScheme.from_json({"k": 2})


def test_json_round_trip_and_encode():
    s = make_mds(6, 3, FieldSpec(7), mu=2)
    t = StorageScheme.from_json(s.to_json())
    assert t == s
    data = [3, 1, 4]
    assert s.encode(data)[:3] == data
    assert make_replication(2, [2, 1]).describe() == ["a", "a", "b"]


def test_lrc_example_layout():
    s = make_lrc(example1_profile(), FieldSpec(5))
    assert s.n == 12
    assert s.describe()[:8] == ["a", "b", "c", "d", "a+b", "c+d", "a+2b", "3c+4d"]
    lay = lrc_layout(example1_profile())
    assert lay.group_servers == ((0, 1, 4, 6), (2, 3, 5, 7))
    assert lay.global_parities == (8, 9, 10, 11)
    assert LrcProfile.from_json(example1_profile().to_json()) == example1_profile()


def test_lrc_profile_validation():
    with pytest.raises(SchemeError):
        pyramid_profile(5, 4, 2, 1, FieldSpec(5))
    prof = pyramid_profile(4, 3, 2, 1, FieldSpec(5))
    assert make_lrc(prof, FieldSpec(5)).n == 4 + 2 + 1
    bad = LrcProfile.from_json({**example1_profile().to_json(), "groups": [
        {"objects": [0, 1], "parities": [[1, 1], [1, 1]]},
        {"objects": [2, 3], "parities": [[1, 1], [3, 4]]},
    ]})
    with pytest.raises(SchemeError):
        make_lrc(bad, FieldSpec(5))  # repeated local parity breaks the distance requirement
