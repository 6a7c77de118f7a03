import pytest

from geowronskian.fermat import (
    FermatConfig,
    degree_report,
    factor_columns,
    fermat_report,
    fermat_wronskian,
    fminus_vanishing_check,
    missing_letter,
    partition_fullsets,
    restriction_identity_check,
)
from geowronskian.jetdiff import DiffPoly, jet_var, torus_multidegree
from geowronskian.wordcomb import WordSet


def test_partition_examples():
    plus, minus = partition_fullsets(3, 2)
    assert [U.words for U in plus] == [((1, 0), (0, 1))]
    assert {U.words for U in minus} == {((1, 0), (2, 0)), ((0, 1), (0, 2))}
    plus, minus = partition_fullsets(2, 1)
    assert [U.words for U in plus] == [((1,),)] and minus == []
    for N in range(2, 6):
        for p in range(1, N):
            plus, minus = partition_fullsets(N, p)
            assert all(missing_letter(U) for U in minus)
            assert all(U.k <= N - p for U in plus)


def _hand_oracle_n2(delta):
    # delta * g1^(d-1) g2^(d-1) (g1 g2' - g2 g1')
    g1, g2 = jet_var(1, (0,), 1, 1), jet_var(2, (0,), 1, 1)
    d1, d2 = jet_var(1, (1,), 1, 1), jet_var(2, (1,), 1, 1)
    return (g1 * g2) ** (delta - 1) * (g1 * d2 - g2 * d1) * delta


@pytest.mark.parametrize("delta", [1, 2, 3, 5])
def test_n2_matches_hand_oracle(delta):
    cfg = FermatConfig(2, 1, delta)
    U = WordSet(1, ((1,),))
    W = fermat_wronskian(cfg, U)
    assert W == _hand_oracle_n2(delta)
    exps, cof = factor_columns(cfg, U, W)
    assert exps == [delta - 1, delta - 1]
    g1, g2 = jet_var(1, (0,), 1, 1), jet_var(2, (0,), 1, 1)
    assert cof == (g1 * jet_var(2, (1,), 1, 1) - g2 * jet_var(1, (1,), 1, 1)) * delta


def test_factor_examples():
    cfg = FermatConfig(3, 2, 3)
    U = WordSet(2, ((1, 0), (0, 1)))
    W = fermat_wronskian(cfg, U)
    exps, cof = factor_columns(cfg, U, W)
    assert exps == [2, 2, 2]
    div = jet_var(1, (0, 0), 2) ** 2 * jet_var(2, (0, 0), 2) ** 2 * jet_var(3, (0, 0), 2) ** 2
    assert cof * div == W
    cfg = FermatConfig(3, 2, 2)
    U = WordSet(2, ((1, 0), (2, 0)))
    W = fermat_wronskian(cfg, U)
    exps, cof = factor_columns(cfg, U, W)
    assert exps == [0, 0, 0] and cof == W
    assert torus_multidegree(W) == U.beta


def test_restriction_and_fminus():
    for N, p in [(2, 1), (3, 1), (3, 2)]:
        cfg = FermatConfig(N, p, 3)
        plus, minus = partition_fullsets(N, p)
        for U in plus + minus:
            assert restriction_identity_check(cfg, U)
            assert restriction_identity_check(cfg, U, powers=False)
        for U in minus:
            assert fminus_vanishing_check(cfg, U, "symbolic")
            assert fminus_vanishing_check(cfg, U, "random", trunc=4, seed=1)
    with pytest.raises(ValueError):
        fminus_vanishing_check(FermatConfig(3, 2, 2), WordSet(2, ((1, 0), (0, 1))))


def test_fplus_sets_do_not_vanish_on_graphs():
    # the missing-letter mechanism is what kills F-: sets with every letter survive
    cfg = FermatConfig(3, 2, 2)
    from geowronskian.polyring import Polynomial, parse_poly
    from geowronskian.wronskian import eval_wronskian
    fs = [parse_poly("z1^2", 2), parse_poly("z2^2", 2), Polynomial.constant(-1, 2)]
    assert eval_wronskian(WordSet(2, ((1, 0), (0, 1))), fs)


def test_degree_report():
    assert degree_report(3, 1)["threshold"] == 8
    assert degree_report(3, 1)["min_delta"] == 9
    for N in range(2, 7):
        assert degree_report(N, N - 1)["threshold"] == N + 1
    assert degree_report(2, 1)["threshold"] == 3
    flags = {r["delta"]: r["qualifies"] for r in degree_report(3, 1, range(7, 11))["table"]}
    assert flags == {7: False, 8: False, 9: True, 10: True}


def test_config_validation_and_report():
    with pytest.raises(ValueError):
        FermatConfig(2, 2, 3)
    with pytest.raises(ValueError):
        FermatConfig(3, 1, 0)
    rep = fermat_report(FermatConfig(3, 2, 4))
    assert rep["ok"] and len(rep["sets"]) == 3
    assert not FermatConfig(3, 1, 8).meets_threshold and FermatConfig(3, 1, 9).meets_threshold
