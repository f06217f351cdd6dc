"""Dense sympy re-derivations used to cross-check the exact engine.

Nothing here imports the package's geometry code: forms are plain dicts on
sorted index tuples, connections are lists of sympy matrices, and every
quantity is computed from its textbook definition with explicit loops.
"""

import itertools

import sympy as sp

from hktlie.scalar import Scalar


def to_sym(x) -> sp.Expr:
    x = x if isinstance(x, Scalar) else Scalar(x)
    return sp.Rational(x.rat.numerator, x.rat.denominator) + sp.Rational(x.sqrt2.numerator, x.sqrt2.denominator) * sp.sqrt(2)


def mat(M) -> sp.Matrix:
    return sp.Matrix([[to_sym(x) for x in row] for row in M])


def structure_tensor(g):
    """``B[i][j]`` is the coordinate column of ``[e_i, e_j]``."""
    n = g.dim
    B = [[sp.zeros(n, 1) for _ in range(n)] for _ in range(n)]
    for (i, j), row in g.structure.items():
        for k, c in row.items():
            B[i][j][k] += to_sym(c)
            B[j][i][k] -= to_sym(c)
    return B


def bracket(B, x, y):
    n = len(B)
    out = sp.zeros(n, 1)
    for i in range(n):
        if x[i] == 0:
            continue
        for j in range(n):
            if y[j] != 0:
                out += x[i] * y[j] * B[i][j]
    return out


def evaluate(form: dict, vectors) -> sp.Expr:
    """Determinant-convention evaluation of a dict form on column vectors."""
    total = 0
    for key, c in form.items():
        sub = sp.Matrix([[v[i] for v in vectors] for i in key])
        total += c * sub.det()
    return sp.expand(total)


def basis(n, i):
    v = sp.zeros(n, 1)
    v[i] = 1
    return v


def d(form: dict, degree: int, B) -> dict:
    """Chevalley-Eilenberg differential from the invariant formula."""
    n = len(B)
    es = [basis(n, i) for i in range(n)]
    out = {}
    for key in itertools.combinations(range(n), degree + 1):
        xs = [es[i] for i in key]
        total = 0
        for a, b in itertools.combinations(range(degree + 1), 2):
            rest = [xs[m] for m in range(degree + 1) if m not in (a, b)]
            total += (-1) ** (a + b) * evaluate(form, [bracket(B, xs[a], xs[b])] + rest)
        total = sp.simplify(total)
        if total != 0:
            out[key] = total
    return out


def kaehler(J, G) -> dict:
    n = J.shape[0]
    out = {}
    for i, j in itertools.combinations(range(n), 2):
        v = sp.simplify((J[:, i].T * G * basis(n, j))[0])
        if v != 0:
            out[(i, j)] = v
    return out


def torsion_form(s) -> dict:
    """``c = -J d omega`` for ``J1`` evaluated triple by triple."""
    n = s.dim
    J, G = mat(s.J(1)), mat(s.metric.gram)
    B = structure_tensor(s.algebra)
    domega = d(kaehler(J, G), 2, B)
    out = {}
    for key in itertools.combinations(range(n), 3):
        v = sp.simplify(-evaluate(domega, [J[:, i] for i in key]))
        if v != 0:
            out[key] = v
    return out


def orthonormal_frame(G):
    n = G.shape[0]
    frame = []
    for i in range(n):
        v = basis(n, i)
        for f in frame:
            v = v - (f.T * G * v)[0] * f
        v = v / sp.sqrt((v.T * G * v)[0])
        frame.append(sp.simplify(v))
    return frame


def lee_form(s, c: dict) -> dict:
    """``theta(X) = -1/2 sum_i c(J X, f_i, J f_i)`` over a g-orthonormal frame."""
    n = s.dim
    J, G = mat(s.J(1)), mat(s.metric.gram)
    frame = orthonormal_frame(G)
    out = {}
    for m in range(n):
        jx = J * basis(n, m)
        v = sum(evaluate(c, [jx, f, J * f]) for f in frame)
        v = sp.simplify(-v / 2)
        if v != 0:
            out[(m,)] = v
    return out


def obata(s):
    """Solve for all ``n^3`` Christoffel symbols of a torsion-free connection
    commuting with the triple; returns the list of ``nabla_{e_i}`` or None if
    the solution is not unique."""
    n = s.dim
    B = structure_tensor(s.algebra)
    syms = sp.symbols(f"x0:{n ** 3}")
    C = [sp.Matrix(n, n, syms[i * n * n:(i + 1) * n * n]) for i in range(n)]
    eqs = []
    for M in C:
        for J in s.complex:
            Js = mat(J)
            eqs.extend(list(M * Js - Js * M))
    for i, j in itertools.combinations(range(n), 2):
        eqs.extend(list(C[i][:, j] - C[j][:, i] - B[i][j]))
    sol = sp.linsolve([e for e in eqs if e != 0], syms)
    (values,) = sol
    if any(v.free_symbols for v in values):
        return None
    return [m.subs(dict(zip(syms, values))) for m in C]


def codifferential(beta: dict, degree: int, s) -> dict:
    """``d* = G_{k-1}^{-1} d^T G_k`` on coordinate vectors of forms."""
    n = s.dim
    B = structure_tensor(s.algebra)
    ginv = mat(s.metric.gram).inv()
    low = list(itertools.combinations(range(n), degree - 1))
    high = list(itertools.combinations(range(n), degree))

    def gram(keys):
        return sp.Matrix(len(keys), len(keys), lambda a, b: ginv.extract(list(keys[a]), list(keys[b])).det())

    dmat = sp.zeros(len(high), len(low))
    for col, key in enumerate(low):
        for k, v in d({key: 1}, degree - 1, B).items():
            dmat[high.index(k), col] = v
    b = sp.Matrix([beta.get(k, 0) for k in high])
    x = gram(low).inv() * dmat.T * gram(high) * b
    return {k: sp.simplify(v) for k, v in zip(low, x) if sp.simplify(v) != 0}


def as_dict(form) -> dict:
    """A package :class:`KForm` as a sympy dict form."""
    return {k: to_sym(v) for k, v in form.coeffs.items()}
