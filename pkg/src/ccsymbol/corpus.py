"""Worked examples run by ``ccsymbol selftest``.

Each case is (name, argv, expected fields).  The argv is exactly what a user
would type after the program name.
"""

CASES = [
    ("pi differs from a0", ["pi", "--ring", "Z/4", "1 + 3*t1 + 2*t1^-1"], {"value": "3"}),
    ("pi of a V- element", ["pi", "--ring", "Z/4", "1 + 2*t1^-1"], {"value": "1"}),
    ("nu past a nilpotent constant", ["nu", "--ring", "Z/4", "2 + t1"], {"value": "(1)"}),
    ("nu of t1 in two variables", ["nu", "--ring", "Q", "--nvars", "2", "t1"], {"value": "(1, 0)"}),
    ("decompose over Z/4", ["decompose", "--ring", "Z/4", "1 + 3*t1 + 2*t1^-1"],
     {"nu": "(0)", "c": "3", "plus": "1 + t1", "minus": "2*t1^-1 + 1", "exact": "true"}),
    ("decompose a monomial", ["decompose", "--ring", "GF(5)", "3*t1"],
     {"nu": "(1)", "c": "3", "plus": "1", "minus": "1"}),
    ("residue of a density", ["res", "--ring", "Q", "t1^-1*t2^-1"], {"value": "1"}),
    ("residue of dlog t1 ^ dlog t2", ["res", "--ring", "Q", "--dlog", "t1", "t2"], {"value": "1"}),
    ("residue of a degenerate wedge", ["res", "--ring", "Q", "--dlog", "t1", "1 + t1"], {"value": "0"}),
    ("residue 0 before the automorphism",
     ["res", "--ring", "Q", "--dlog", "t1", "1 + t1", "--coeff", "(1 + t1)*t2^-1"], {"value": "0"}),
    ("residue 1 after the automorphism",
     ["res", "--ring", "Q", "--dlog", "t1", "1 + t1 + t2", "--coeff", "(1 + t1 + t2)*t2^-1"], {"value": "1"}),
    ("sgn by multilinearity", ["sgn", "1,0", "0,1", "1,1"], {"value": "0"}),
    ("sgn of the basis with a repeat", ["sgn", "1,0", "0,1", "1,0"], {"value": "1"}),
    ("cc of t and 2t", ["cc", "--ring", "GF(5)", "t1", "2*t1"], {"value": "2"}),
    ("cc of 2+t and t", ["cc", "--ring", "GF(5)", "2 + t1", "t1"], {"value": "2"}),
    ("cc of t and t", ["cc", "--ring", "Q", "t1", "t1"], {"value": "-1"}),
    ("cc of a repeated tuple", ["cc", "--ring", "Q", "t1", "t2", "t1"], {"value": "-1"}),
    ("cc procedural of t and 2t", ["cc", "--ring", "GF(5)", "--engine", "procedural", "t1", "2*t1"],
     {"value": "2"}),
    ("cc log engine, dual numbers", ["cc", "--ring", "Q[e]/(e^2)", "--engine", "q", "1 + e*t1^-1", "1 + 3*t1"],
     {"value": "1 + 3*e"}),
    ("cc of a unit base and variables", ["cc", "--ring", "Q[e]/(e^2)", "1 + 5*e", "t1", "t2"],
     {"value": "1 + 5*e"}),
    ("cc over a product ring", ["cc", "--ring", "Z/4 x GF(5)", "[3, 2]*t1", "t1"], {"value": "[1, 3]"}),
    ("engines agree over GF(5)", ["cc-compare", "--ring", "GF(5)", "2 + t1 + 3*t1^2", "3*t1^-1 + t1"],
     {"agree": "true"}),
    ("engines agree over Q[e]/(e^3)",
     ["cc-compare", "--ring", "Q[e]/(e^3)", "2 + e*t1^-1 + t2", "t1*(1 + e*t2^-1)", "3*t2 + t1*t2"],
     {"agree": "true"}),
    ("engines agree over Z/4", ["cc-compare", "--ring", "Z/4", "1 + 2*t1^-1*t2 + t1", "t2 + 2*t1", "3*t1"],
     {"agree": "true"}),
    ("apply t -> t^2", ["endo-apply", "--ring", "Q", "--images", "t1^2", "--", "t1^3 + 1"],
     {"d": "2", "value": "1 + t1^6", "exact": "true"}),
    ("apply with a division", ["endo-apply", "--ring", "Q", "--box=-2:2", "--images", "t1 + t1^2", "--", "t1^-1"],
     {"d": "1", "value": "t1^-1 - 1 + t1 - t1^2", "exact": "false"}),
    ("reversion of t + t^2", ["endo-inverse", "--ring", "Q", "--box=-3:3", "--images", "t1 + t1^2", "--", "t1"],
     {"d": "1", "value": "t1 - t1^2 + 2*t1^3"}),
]
