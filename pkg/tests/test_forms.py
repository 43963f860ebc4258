from ccsymbol.forms import TopForm, dlog_wedge, jacobian, mixed_wedge, residue

from conftest import S


def test_residues():
    assert residue(TopForm(S("t1^-1*t2^-1", "Q", 2))) == 1
    assert residue(TopForm(S("t1^3", "Q"))) == 0
    assert residue(dlog_wedge([S("t1", "Q", 2), S("t2", "Q", 2)])) == 1


def test_dlog_wedge_density():
    w = dlog_wedge([S("t1", "Q", 2), S("t2", "Q", 2)])
    assert w.density.truncated() == S("t1^-1*t2^-1", "Q", 2)


def test_degenerate_wedge():
    assert residue(dlog_wedge([S("t1", "Q", 2), S("1 + t1", "Q", 2)])) == 0


def test_mixed_wedge_constant():
    fs = [S("t1", "GF(5)", 2), S("t2", "GF(5)", 2)]
    assert residue(mixed_wedge(S("3", "GF(5)", 2), fs)) == 3


def test_automorphism_changes_the_residue():
    # dt1/t1 ^ df/t2 with f in t1 only, then f -> f + t2
    f = S("1 + t1 + 2*t1^2", "Q", 2)
    t1, t2 = S("t1", "Q", 2), S("t2", "Q", 2)
    before = mixed_wedge(f * S("t2^-1", "Q", 2), [t1, f])
    g = f + t2
    after = mixed_wedge(g * S("t2^-1", "Q", 2), [t1, g])
    assert (residue(before), residue(after)) == (0, 1)


def test_jacobians():
    assert jacobian([S("t1", "Q", 3), S("t2", "Q", 3), S("t3", "Q", 3)]) == S("1", "Q", 3)
    assert jacobian([S("t1*(1 + t2)", "Q", 2), S("t2", "Q", 2)]) == S("1 + t2", "Q", 2)
    assert jacobian([S("t1 + t1^2", "Q")]) == S("1 + 2*t1", "Q")


def test_determinant_identity_frozen():
    fs = [S("2*t1^2*t2^-1 + e*t1^3", "Q[e]/(e^2)", 2), S("t1^-1*t2^3 + 5*t2^4", "Q[e]/(e^2)", 2)]
    # det((2, -1), (-1, 3)) = 5
    assert residue(dlog_wedge(fs)) == 5
