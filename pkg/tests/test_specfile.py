import pytest

from geoverify.errors import FileError, SpecError, UnknownIdentifier
from geoverify.harness import (
    dumps,
    list_fixtures,
    load_fixture,
    load_manifold_spec,
    loads,
)
from geoverify.harness.specfile import split_list
from geoverify.solitons import SOLVE

MINIMAL = """
[manifold]
name = plane
coordinates = [u, v]

[metric]
g = [[1, 0],
     [0, exp(2*u)]]   # warped
"""


def test_minimal_spec_defaults():
    spec = loads(MINIMAL)
    assert spec.name == "plane" and spec.dimension == 2 and spec.epsilon == 1
    assert spec.structure is None and spec.soliton is None
    assert spec.sampling.mode == "random" and spec.sampling.count == 50
    assert spec.chart.domain == ((-1.0, 1.0), (-1.0, 1.0))


def test_split_list_nested():
    assert split_list("[[a, f(b, c)], [1, 2]]") == [["a", "f(b, c)"], ["1", "2"]]
    with pytest.raises(SpecError):
        split_list("[a, [b]")
    with pytest.raises(SpecError):
        split_list("[a,, b]")


@pytest.mark.parametrize("name", list_fixtures())
def test_fixture_round_trip(name):
    spec = load_fixture(name)
    assert loads(dumps(spec)) == spec
    assert dumps(loads(dumps(spec))) == dumps(spec)


def test_bundled_fixture_names():
    names = list_fixtures()
    for expected in ("example1-r5-g1", "example1-r5-g2", "example2-r3", "euclidean-r3", "trivial-ps-r1"):
        assert expected in names


def test_example2_contents(example2):
    assert example2.epsilon == -1
    assert example2.soliton.lam.sexpr() == "sub(exp(mul(2,z)),1)"
    assert example2.metric.entries[0][0].sexpr() == "exp(mul(neg(2),z))"


def test_solve_keyword():
    spec = loads(MINIMAL.replace("[metric]", "[soliton]\nlambda = solve\n\n[metric]") + "[structure]\nphi=[[0,0],[0,0]]\nxi=[1,0]\neta=[1,0]\n")
    assert spec.soliton.lam == SOLVE and spec.soliton.mu == SOLVE


@pytest.mark.parametrize(
    "text, fragment",
    [
        (MINIMAL.replace("[[1, 0],", "[[1, 0, 0],"), "dimension mismatch"),
        (MINIMAL.replace("name = plane", "name = plane\ndimension = 3"), "dimension mismatch"),
        (MINIMAL.replace("[0, exp(2*u)]", "[u, exp(2*u)]"), "symmetric"),
        (MINIMAL + "\n[extra]\na = 1\n", "unknown section"),
        (MINIMAL.replace("[metric]", "[metrics]"), "unknown section"),
        (MINIMAL.replace("name = plane", "name = plane\nepsilon = 2"), "epsilon"),
        (MINIMAL.replace("name = plane", "name = plane\nformat_version = 9"), "format_version"),
    ],
)
def test_spec_errors(text, fragment):
    with pytest.raises(SpecError) as info:
        loads(text)
    assert fragment in str(info.value)


def test_expression_error_location():
    with pytest.raises(UnknownIdentifier) as info:
        loads(MINIMAL.replace("exp(2*u)", "exp(2*w)"), "plane.manifold")
    assert "plane.manifold [metric] g" in str(info.value)


def test_load_from_path(tmp_path):
    path = tmp_path / "plane.manifold"
    path.write_text(MINIMAL)
    assert load_manifold_spec(path).name == "plane"
    with pytest.raises(FileError):
        load_manifold_spec(tmp_path / "absent.manifold")


def test_sampling_section():
    text = MINIMAL + "\n[sampling]\nmode = grid\ncount = 9\nseed = 3\nranges = [[0, 1], [-pi, pi]]\n"
    spec = loads(text)
    assert spec.sampling.mode == "grid" and spec.sampling.count == 9 and spec.sampling.seed == 3
    assert spec.chart.domain[1][1] == pytest.approx(3.141592653589793)
    with pytest.raises(SpecError):
        loads(text.replace("mode = grid", "mode = sobol"))
