import os
from fractions import Fraction

import pytest

import vclose

FIXTURES = os.environ.get("VCLOSE_FIXTURES_DIR", os.path.join(os.path.dirname(__file__), "..", "..", "fixtures"))
SWAP = [[[0, 1], [1, 0]]]


def read_fixture(name):
    with open(os.path.join(FIXTURES, name)) as f:
        return f.read()


def test_smith_normal_form_diag():
    u, d, v = vclose.smith_normal_form([[2, 0], [0, 3]])
    assert d == [[1, 0], [0, 6]]


def test_smith_normal_form_product():
    m = [[4, 6], [2, 8]]
    u, d, v = vclose.smith_normal_form(m)
    um = [[sum(u[i][k] * m[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    umv = [[sum(um[i][k] * v[k][j] for k in range(2)) for j in range(2)] for i in range(2)]
    assert umv == d


def test_torsion_data():
    assert vclose.torsion_data(2, [[3, 0]]) == (3, [3], 1)
    assert vclose.torsion_data(3) == (1, [], 3)


def test_project_swap():
    assert vclose.project(2, SWAP, [2, 5], [1]) == [Fraction(7, 2), Fraction(7, 2)]
    assert vclose.project(2, SWAP, [2, 5], [-1]) == [Fraction(-3, 2), Fraction(3, 2)]


def test_is_simple_swap():
    assert not vclose.is_simple(2, SWAP, [2, 5])["simple"]
    assert vclose.is_simple(2, SWAP, [1, 2])["simple"]


def test_characters():
    assert len(vclose.characters(4)) == 16


def test_dihedral_multiply():
    assert vclose.dihedral_multiply((3, 0), (2, 1)) == (5, 1)
    assert vclose.dihedral_multiply((0, 1), (4, 0)) == (-4, 1)
    big = 2**80
    assert vclose.dihedral_multiply((big, 0), (big, 0)) == (2 * big, 0)


def test_analyze_worked_example():
    report, equation = vclose.analyze(read_fixture("worked_example.spec"))
    assert report["verdict"] == "NotVerballyClosed"
    assert equation


def test_analyze_retract():
    report, equation = vclose.analyze(read_fixture("retract_a1_a2_5.spec"), verify=True, samples=200)
    assert report["verdict"] == "Retract"
    assert equation is None


def test_analyze_rejects_bad_input():
    with pytest.raises(vclose.VcloseError):
        vclose.analyze(read_fixture("malformed_word.spec"))


def test_selftest():
    assert vclose.selftest() == (True, "")
    passed, name = vclose.selftest(inject_project_sign=True)
    assert not passed and name
