import json
import math

import mpmath
import pytest

from orbit_heights.certify import SamplingConfig
from orbit_heights.heights import orbit_height
from orbit_heights.mobius import SingularMatrixError
from orbit_heights.tables import (
    WITNESS_TOL,
    RowSpecError,
    TableRow,
    bundled_rows,
    find_row,
    instantiate,
    load_rows,
    verify_table_row,
)


def all_specs(p=5, q=1):
    for row in bundled_rows():
        for s in row.signs:
            yield instantiate(row, s, p, q)


def test_bundled_tables_are_complete():
    assert [r.row for r in bundled_rows(1)] == list(range(1, 10))
    assert [r.row for r in bundled_rows(2)] == list(range(1, 7))
    assert len(list(all_specs())) == 26


def test_load_rows_from_file(tmp_path):
    row = find_row(1, 4)
    path = tmp_path / "rows.jsonl"
    path.write_text(json.dumps({**row.__dict__, "signs": list(row.signs)}) + "\n\n")
    assert load_rows(path) == [row]


def test_find_row_missing():
    with pytest.raises(KeyError):
        find_row(3, 1)


@pytest.mark.parametrize(
    "table, row, sign, p, q",
    [(1, 1, 1, 0, 1), (1, 5, 1, 0, 1), (1, 7, 1, -1, 2), (1, 7, -1, 1, 2), (1, 2, 1, 4, 2), (1, 2, 1, 5, -1), (1, 4, -1, 5, 1)],
)
def test_exclusions(table, row, sign, p, q):
    with pytest.raises(RowSpecError):
        instantiate(find_row(table, row), sign, p, q)


def test_singular_instantiation():
    with pytest.raises(SingularMatrixError, match="singular matrix"):
        instantiate(find_row(1, 2), 1, -1, 1)


def test_table_1_row_3_upper_sign():
    spec = instantiate(find_row(1, 3), 1, 5, 1)
    assert spec.exp_D() == 2
    assert spec.witness() is not None  # 4 | p - q
    rep = verify_table_row(spec)
    assert rep.passed, rep.checks
    assert [c.name for c in rep.checks] == ["order", "orbits", "optimal_D", "witness", "certify"]


def test_table_1_row_4():
    rep = verify_table_row(instantiate(find_row(1, 4)))
    assert rep.passed
    assert abs(rep.claimed_D - math.log(5)) < 1e-12


def test_row_5_at_p_5():
    spec = instantiate(find_row(1, 5), 1, 5, 1)
    assert spec.exp_D() == 3
    with mpmath.workprec(200):
        assert abs(orbit_height(spec.group, spec.witness()).mid - mpmath.log(3)) < 1e-30


@pytest.mark.parametrize("spec", list(all_specs()), ids=lambda s: s.label)
def test_verify_every_row(spec):
    rep = verify_table_row(spec, SamplingConfig(circle_samples=4096, grid=200))
    assert rep.passed, [c for c in rep.checks if not c.passed]
    if spec.row.D_approx is None:
        assert [c.name for c in rep.checks] == ["order", "orbits"]
    elif spec.sign == 1:
        # the printed approximations are for the upper sign
        assert abs(rep.claimed_D - spec.row.D_approx) < 1e-4


def _witness_cases():
    for row in bundled_rows():
        pqs = [(p, q) for q in range(1, 4) for p in range(-7, 8) if math.gcd(p, q) == 1] if row.params else [(0, 1)]
        for s in row.signs:
            for p, q in pqs:
                try:
                    spec = instantiate(row, s, p, q)
                except (RowSpecError, SingularMatrixError):
                    continue
                if spec.witness() is not None:
                    yield spec


def test_witness_consistency_over_parameter_range():
    bad = []
    n = 0
    for spec in _witness_cases():
        n += 1
        h = orbit_height(spec.group, spec.witness())
        if abs(h.mid - spec.D()) > WITNESS_TOL:
            bad.append(spec.label)
    assert n > 100 and bad == []


def test_generic_orbit_data_fails_at_degenerate_parameter():
    # at p/q = -1 the lower-sign matrix also swaps i and -i, adding an orbit
    rep = verify_table_row(instantiate(find_row(1, 2), -1, -1, 1))
    assert not rep.passed
    assert [c.name for c in rep.checks if not c.passed][0] == "orbits"


def test_row_record_roundtrip():
    for row in bundled_rows():
        assert TableRow.from_dict(json.loads(json.dumps(row.__dict__))) == row
