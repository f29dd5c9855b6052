import pytest

from qhalg.exactlin import GF, QQ
from qhalg.quiver import InfiniteDimensionError, SpecError, load_algebra, parse_spec

A2 = "algebra A2\nvertices 1 2\narrow a : 1 -> 2\n"


def test_parse_single_arrow():
    spec = parse_spec(A2)
    assert spec.quiver.vertices == ["1", "2"]
    assert len(spec.quiver.arrows) == 1
    assert spec.relations == []
    assert spec.field is QQ


def test_parse_relation_b_a():
    spec = parse_spec("vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\nrelation b.a\n")
    assert len(spec.relations) == 1
    assert len(spec.relations[0].terms) == 1


@pytest.mark.parametrize("text, line", [
    ("vertices 1 2\narrow a : 1 -> 2\nrelation a\n", 3),  # length 1
    ("vertices 1 2\narrow a : 1 -> 2\narrow b : 1 -> 2\nrelation b.a\n", 4),  # not composable
    ("vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\narrow c : 1 -> 3\narrow d : 3 -> 3\n"
     "relation b.a - d.d\n", 6),  # not parallel
    ("vertices 1\narrow x : 1 -> 1\nrelation y.x\n", 3),  # unknown arrow
    ("vertices 1\nfrobnicate\n", 2),
    ("vertices 1 1\n", 1),
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(SpecError) as exc:
        parse_spec(text)
    assert exc.value.line == line


def test_error_column():
    with pytest.raises(SpecError) as exc:
        parse_spec("vertices 1 2\n   bogus directive\n")
    assert (exc.value.line, exc.value.col) == (2, 4)


def test_field_line_and_override():
    spec = parse_spec("field GF(5)\nvertices 1\n")
    assert spec.field is GF(5)
    assert parse_spec("field GF(5)\nvertices 1\n", QQ).field is QQ


def test_basis_of_a2():
    alg = load_algebra(A2)
    assert alg.labels == ["e_1", "e_2", "a"]
    assert alg.n == 2


def test_dual_numbers_and_infinite_loop():
    alg = load_algebra("vertices 1\narrow x : 1 -> 1\nrelation x.x\n")
    assert alg.labels == ["e_1", "x"]
    with pytest.raises(InfiniteDimensionError):
        load_algebra("vertices 1\narrow x : 1 -> 1\n", degree_bound=10)


def test_composition_order_in_labels():
    alg = load_algebra("vertices 1 2 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n")
    assert "b.a" in alg.labels
    ba = alg.labels.index("b.a")
    a, b = alg.labels.index("a"), alg.labels.index("b")
    # x*y is "first x, then y"
    assert alg.mul({a: 1}, {b: 1}) == {ba: 1}
    assert alg.mul({b: 1}, {a: 1}) == {}


def test_commutativity_relation():
    alg = load_algebra("vertices 1 2 3 4\narrow a : 1 -> 2\narrow b : 1 -> 3\n"
                       "arrow c : 2 -> 4\narrow d : 3 -> 4\nrelation c.a - d.b\n")
    assert alg.dim == 9
    a, c = alg.labels.index("a"), alg.labels.index("c")
    b, d = alg.labels.index("b"), alg.labels.index("d")
    assert alg.mul({a: 1}, {c: 1}) == alg.mul({b: 1}, {d: 1})


def test_coefficients_and_non_monomial_relation():
    alg = load_algebra("vertices 1 2\narrow a : 1 -> 2\narrow b : 2 -> 1\n"
                       "relation a.b.a - 2*a.b.a\nrelation b.a.b\n")
    assert alg.dim == len(alg.labels)
    assert all(len(l.split(".")) <= 2 for l in alg.labels)


def test_order_directive():
    alg = load_algebra(A2 + "order 2 1\n")
    assert alg.vertex_labels == ["2", "1"]
    assert alg.cartan() == [[1, 0], [1, 1]]
    with pytest.raises(SpecError):
        parse_spec(A2 + "order 1 1\n")
