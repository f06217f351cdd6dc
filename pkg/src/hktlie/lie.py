"""Lie algebras by structure constants and their exterior algebra.

Indices are 0-based in code.  Rendering and parsing of monomials use the
conventional 1-based labels, so ``KForm.parse("2*e^{256}", 8)`` stores the
key ``(1, 4, 5)``.

Forms use the determinant convention ``e^{12}(e_1, e_2) = 1`` and the
Chevalley-Eilenberg differential is fixed by ``d a(X, Y) = -a([X, Y])`` on
1-forms, extended to all degrees as a graded derivation.
"""

from __future__ import annotations

import itertools
import re
from typing import Iterable, Mapping, Sequence

from .scalar import ONE, ZERO, Scalar, ScalarSyntaxError, as_scalar, parse_scalar

__all__ = [
    "LieAlgebra",
    "KForm",
    "FormSyntaxError",
    "wedge",
    "ce_differential",
    "jacobi_defect",
    "permutation_sign",
]


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; 0 if it has repeats."""
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


class LieAlgebra:
    """A finite-dimensional Lie algebra ``[e_i, e_j] = sum_k c^k_ij e_k``.

    ``brackets`` maps pairs ``(i, j)`` with ``i < j`` (0-based) to a mapping
    ``k -> coefficient``.  Only those pairs are stored; the bracket
    operation antisymmetrises.
    """

    def __init__(self, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]] | None = None):
        if dim <= 0:
            raise ValueError("dimension must be positive")
        self.dim = dim
        table: dict[tuple[int, int], dict[int, Scalar]] = {}
        for (i, j), out in (brackets or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise IndexError(f"bracket index ({i + 1}, {j + 1}) out of range for dim {dim}")
            if i == j:
                if any(as_scalar(v) for v in out.values()):
                    raise ValueError(f"[e{i + 1}, e{i + 1}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            row = table.setdefault((i, j), {})
            for k, v in out.items():
                if not 0 <= k < dim:
                    raise IndexError(f"bracket output e{k + 1} out of range for dim {dim}")
                v = as_scalar(v) * sign
                nv = row.get(k, ZERO) + v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            if not row:
                del table[(i, j)]
        self._table = table
        self._full: list[list[dict[int, Scalar]]] | None = None

    @classmethod
    def from_triples(cls, dim: int, triples: Iterable[tuple[int, int, int, object]]) -> "LieAlgebra":
        """Build from 1-based ``(i, j, k, c)`` meaning ``[e_i, e_j] += c e_k``."""
        br: dict[tuple[int, int], dict[int, object]] = {}
        for i, j, k, c in triples:
            row = br.setdefault((i - 1, j - 1), {})
            row[k - 1] = as_scalar(row.get(k - 1, ZERO)) + as_scalar(c)
        return cls(dim, br)

    @classmethod
    def from_structure_equations(cls, equations: Sequence[str]) -> "LieAlgebra":
        """Build from differentials of the dual basis, e.g.
        ``["0", "-1/2*e^{12}", "-1/2*e^{13}", "-e^{23} - e^{14}"]``.

        ``d e^k = -sum_{i<j} c^k_ij e^{ij}``, so each monomial ``a e^{ij}`` of
        ``d e^k`` contributes ``[e_i, e_j] = -a e_k``.
        """
        dim = len(equations)
        br: dict[tuple[int, int], dict[int, Scalar]] = {}
        for k, text in enumerate(equations):
            form = KForm.parse(text, dim, degree=2)
            for (i, j), a in form.coeffs.items():
                br.setdefault((i, j), {})[k] = -a
        return cls(dim, br)

    @property
    def structure(self) -> dict[tuple[int, int], dict[int, Scalar]]:
        """Stored structure constants for ``i < j`` (0-based), copied."""
        return {k: dict(v) for k, v in self._table.items()}

    def _full_table(self) -> list[list[dict[int, Scalar]]]:
        if self._full is None:
            n = self.dim
            full = [[{} for _ in range(n)] for _ in range(n)]
            for (i, j), row in self._table.items():
                full[i][j] = row
                full[j][i] = {k: -v for k, v in row.items()}
            self._full = full
        return self._full

    def basis_bracket(self, i: int, j: int) -> dict[int, Scalar]:
        """Sparse ``[e_i, e_j]``."""
        return self._full_table()[i][j]

    def bracket(self, x: Sequence[Scalar], y: Sequence[Scalar]) -> tuple:
        """Bracket of two dense coordinate vectors."""
        full = self._full_table()
        acc = [ZERO] * self.dim
        xs = [(i, a) for i, a in enumerate(x) if a]
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in xs:
            fi = full[i]
            for j, b in ys:
                out = fi[j]
                if out:
                    ab = a * b
                    for k, c in out.items():
                        acc[k] = acc[k] + ab * c
        return tuple(acc)

    def ad(self, i: int):
        """Matrix of ``ad(e_i)``."""
        full = self._full_table()
        cols = [full[i][j] for j in range(self.dim)]
        return tuple(tuple(cols[j].get(k, ZERO) for j in range(self.dim)) for k in range(self.dim))

    def is_abelian(self) -> bool:
        return not self._table

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self.dim == other.dim and self._table == other._table

    def __hash__(self):
        return hash((self.dim, tuple(sorted((k, tuple(sorted(v.items(), key=lambda t: t[0]))) for k, v in self._table.items()))))

    def __repr__(self):
        parts = []
        for (i, j), row in sorted(self._table.items()):
            rhs = " + ".join(f"{c.literal()}*e{k + 1}" for k, c in sorted(row.items()))
            parts.append(f"[e{i + 1},e{j + 1}]={rhs}")
        return f"LieAlgebra(dim={self.dim}, {'; '.join(parts) or 'abelian'})"


def jacobi_defect(g: LieAlgebra) -> tuple[Scalar, tuple[int, int, int] | None]:
    """Largest Jacobi residual over basis triples and an offending triple.

    Returns ``(ZERO, None)`` when the Jacobi identity holds.  The residual of
    ``(i, j, k)`` is the largest absolute coordinate of
    ``[[e_i, e_j], e_k] + [[e_j, e_k], e_i] + [[e_k, e_i], e_j]``; the witness
    is 0-based.
    """
    n = g.dim
    worst, witness = ZERO, None

    def lift(d):
        v = [ZERO] * n
        for k, c in d.items():
            v[k] = c
        return v

    for i, j, k in itertools.combinations(range(n), 3):
        total = [ZERO] * n
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            ab = g.basis_bracket(a, b)
            if not ab:
                continue
            ek = [ZERO] * n
            ek[c] = ONE
            total = [s + t for s, t in zip(total, g.bracket(lift(ab), ek))]
        for x in total:
            if x and abs(x) > worst:
                worst, witness = abs(x), (i, j, k)
    return worst, witness


class FormSyntaxError(ValueError):
    """A monomial expression such as ``2*e^{256}`` could not be parsed."""


class KForm:
    """Alternating k-form on an n-dimensional space, stored in the basis
    ``e^{i_1 ... i_k}`` with strictly increasing (0-based) index tuples.
    Zero coefficients are never stored, so equality is dict equality.
    """

    __slots__ = ("degree", "dim", "coeffs")

    def __init__(self, degree: int, dim: int, coeffs: Mapping[tuple[int, ...], object] | None = None):
        if not 0 <= degree:
            raise ValueError("degree must be non-negative")
        self.degree = degree
        self.dim = dim
        clean: dict[tuple[int, ...], Scalar] = {}
        for key, v in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != degree:
                raise ValueError(f"monomial {key} has wrong degree for a {degree}-form")
            if any(not 0 <= i < dim for i in key):
                raise IndexError(f"monomial {key} out of range for dim {dim}")
            sign = permutation_sign(key)
            if not sign:
                continue
            skey = tuple(sorted(key))
            nv = clean.get(skey, ZERO) + as_scalar(v) * sign
            if nv:
                clean[skey] = nv
            else:
                clean.pop(skey, None)
        self.coeffs = clean

    @classmethod
    def _raw(cls, degree: int, dim: int, coeffs: dict) -> "KForm":
        f = object.__new__(cls)
        f.degree, f.dim = degree, dim
        f.coeffs = {k: v for k, v in coeffs.items() if v}
        return f

    @classmethod
    def zero(cls, degree: int, dim: int) -> "KForm":
        return cls._raw(degree, dim, {})

    @classmethod
    def basis(cls, dim: int, *indices: int) -> "KForm":
        """``e^{i1 i2 ...}`` from 1-based labels."""
        return cls(len(indices), dim, {tuple(i - 1 for i in indices): ONE})

    # -- algebra ----------------------------------------------------------------

    def _check(self, other: "KForm"):
        if not isinstance(other, KForm):
            raise TypeError("expected a KForm")
        if other.dim != self.dim:
            raise ValueError(f"forms live on different spaces ({self.dim} vs {other.dim})")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, ZERO) + v
        return KForm._raw(self.degree, self.dim, out)

    def __neg__(self) -> "KForm":
        return KForm._raw(self.degree, self.dim, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, s) -> "KForm":
        s = as_scalar(s)
        return KForm._raw(self.degree, self.dim, {k: s * v for k, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self.degree == other.degree and self.dim == other.dim and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.degree, self.dim, frozenset(self.coeffs.items())))

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, key: tuple[int, ...]) -> Scalar:
        sign = permutation_sign(key)
        if not sign:
            return ZERO
        return self.coeffs.get(tuple(sorted(key)), ZERO) * sign

    # -- evaluation and pullback ------------------------------------------------

    def __call__(self, *vectors: Sequence[Scalar]) -> Scalar:
        """Evaluate on ``degree`` coordinate vectors (determinant convention)."""
        if len(vectors) != self.degree:
            raise ValueError(f"a {self.degree}-form takes {self.degree} vectors")
        if self.degree == 0:
            return self.coeffs.get((), ZERO)
        supports = [[(i, x) for i, x in enumerate(v) if x] for v in vectors]
        acc = ZERO
        # expand multilinearly over the supports; sparse vectors keep this cheap
        for combo in itertools.product(*supports):
            idx = tuple(i for i, _ in combo)
            c = self[idx]
            if c:
                for _, x in combo:
                    c = c * x
                acc = acc + c
        return acc

    def pullback(self, a) -> "KForm":
        """Pull back along the linear map with matrix ``a``:
        ``(a^* w)(X1, ...) = w(a X1, ...)``."""
        n = self.dim
        rows = [[(j, x) for j, x in enumerate(a[i]) if x] for i in range(n)]
        out: dict[tuple[int, ...], Scalar] = {}
        for key, c in self.coeffs.items():
            for combo in itertools.product(*(rows[i] for i in key)):
                idx = tuple(j for j, _ in combo)
                sign = permutation_sign(idx)
                if not sign:
                    continue
                v = c * sign
                for _, x in combo:
                    v = v * x
                sk = tuple(sorted(idx))
                out[sk] = out.get(sk, ZERO) + v
        return KForm._raw(self.degree, n, out)

    def to_vector(self) -> tuple:
        """1-forms only: coefficient vector."""
        if self.degree != 1:
            raise ValueError("only 1-forms have a coefficient vector")
        return tuple(self.coeffs.get((i,), ZERO) for i in range(self.dim))

    @classmethod
    def from_vector(cls, v: Sequence[Scalar]) -> "KForm":
        return cls._raw(1, len(v), {(i,): as_scalar(x) for i, x in enumerate(v)})

    # -- rendering ----------------------------------------------------------------

    def _label(self, key: tuple[int, ...]) -> str:
        sep = "," if self.dim >= 10 else ""
        return "e^{" + sep.join(str(i + 1) for i in key) + "}"

    def render(self) -> str:
        """Monomial notation, e.g. ``-1/2*e^{268} + 2*e^{378}``; ``0`` if empty."""
        return render_terms((self.coeffs[k], self._label(k) if k else "") for k in sorted(self.coeffs))

    __str__ = render

    def __repr__(self):
        return f"KForm({self.degree}, {self.dim}, {self.render()!r})"

    _TERM = re.compile(
        r"\s*([+-]?)\s*(?:(\([^()]*\)|\d+(?:/\d+)?)\s*\*?\s*)?(e\^\{([0-9,\s]*)\}|e\^(\d)|1(?![\d/]))\s*"
    )

    @classmethod
    def parse(cls, text: str, dim: int, degree: int | None = None) -> "KForm":
        """Parse monomial notation (inverse of :meth:`render`).

        Indices are 1-based; when ``dim >= 10`` they must be comma separated.
        ``"0"`` parses to the zero form of the requested ``degree``.
        """
        s = text.strip()
        if s == "0":
            if degree is None:
                raise FormSyntaxError("the zero form needs an explicit degree")
            return cls.zero(degree, dim)
        pos = 0
        out: dict[tuple[int, ...], Scalar] = {}
        deg = degree
        first = True
        while pos < len(s):
            m = cls._TERM.match(s, pos)
            if not m or m.end() == pos:
                raise FormSyntaxError(f"cannot parse form {text!r} at column {pos + 1}")
            sign, coef, mono, idx, single = m.groups()
            if not sign and not first:
                raise FormSyntaxError(f"missing operator in {text!r} at column {pos + 1}")
            first = False
            if coef is None:
                c = ONE
            else:
                try:
                    c = parse_scalar(coef.strip("()"))
                except ScalarSyntaxError as exc:
                    raise FormSyntaxError(str(exc)) from exc
            if sign == "-":
                c = -c
            if mono == "1":
                key: tuple[int, ...] = ()
            elif single is not None:
                key = (int(single) - 1,)
            else:
                body = idx.replace(" ", "")
                if "," in body:
                    key = tuple(int(t) - 1 for t in body.split(",") if t)
                else:
                    if dim >= 10 and len(body) > 1:
                        raise FormSyntaxError(f"ambiguous monomial e^{{{body}}} in dimension {dim}; use commas")
                    key = tuple(int(ch) - 1 for ch in body)
            if deg is None:
                deg = len(key)
            elif len(key) != deg:
                raise FormSyntaxError(f"mixed degrees in {text!r}")
            if any(not 0 <= i < dim for i in key):
                raise FormSyntaxError(f"index out of range in {text!r} for dim {dim}")
            sgn = permutation_sign(key)
            if not sgn:
                continue
            sk = tuple(sorted(key))
            out[sk] = out.get(sk, ZERO) + c * sgn
            pos = m.end()
        return cls._raw(deg or 0, dim, out)


def render_terms(terms) -> str:
    """Render ``(coefficient, label)`` pairs as ``c1*label1 + c2*label2``.

    Unit coefficients are dropped, irrational ones parenthesised, an empty
    label prints the bare coefficient; no terms gives ``0``.
    """
    parts = []
    for c, lab in terms:
        c = as_scalar(c)
        if not c:
            continue
        neg = False
        if c.is_rational():
            neg = c.rat < 0
            mag = abs(c.rat)
            coef = "" if (mag == 1 and lab) else (f"{mag.numerator}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}")
        else:
            coef = f"({c.literal()})"
        body = f"{coef}*{lab}" if coef and lab else (coef or lab)
        parts.append(("-" if neg else "+", body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sgn, body in parts[1:]:
        text += f" {sgn} {body}"
    return text


def _merge(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    """Sign and sorted key of ``e^a ^ e^b``; sign 0 on overlap."""
    if set(a) & set(b):
        return 0, ()
    # count inversions between a and b (each is sorted)
    inv = 0
    for x in a:
        for y in b:
            if x > y:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(a + b))


def wedge(alpha: KForm, beta: KForm) -> KForm:
    """Exterior product; zero when the degrees exceed the dimension."""
    alpha._check(beta)
    deg = alpha.degree + beta.degree
    if deg > alpha.dim:
        return KForm.zero(deg, alpha.dim)
    out: dict[tuple[int, ...], Scalar] = {}
    for ka, va in alpha.coeffs.items():
        for kb, vb in beta.coeffs.items():
            s, key = _merge(ka, kb)
            if s:
                v = va * vb
                out[key] = out.get(key, ZERO) + (v if s > 0 else -v)
    return KForm._raw(deg, alpha.dim, out)


def _dual_differentials(g: LieAlgebra) -> list[dict[tuple[int, int], Scalar]]:
    """``d e^k = -sum_{i<j} c^k_ij e^{ij}`` for every k."""
    out: list[dict[tuple[int, int], Scalar]] = [{} for _ in range(g.dim)]
    for (i, j), row in g._table.items():
        for k, c in row.items():
            out[k][(i, j)] = -c
    return out


def ce_differential(alpha: KForm, g: LieAlgebra) -> KForm:
    """Chevalley-Eilenberg differential of a left-invariant form.

    Implemented as the graded derivation extending ``d`` on 1-forms:
    ``d(e^{i1} ^ ... ^ e^{ik}) = sum_r (-1)^(r-1) e^{i1} ^ .. d e^{ir} .. ^ e^{ik}``.
    """
    if alpha.dim != g.dim:
        raise ValueError(f"form of dim {alpha.dim} on algebra of dim {g.dim}")
    deg = alpha.degree + 1
    if deg > g.dim:
        return KForm.zero(deg, g.dim)
    de = _dual_differentials(g)
    out: dict[tuple[int, ...], Scalar] = {}
    for key, c in alpha.coeffs.items():
        for r, i in enumerate(key):
            if not de[i]:
                continue
            before, after = key[:r], key[r + 1:]
            base = c if r % 2 == 0 else -c
            for pair, v in de[i].items():
                s1, k1 = _merge(before, pair)
                if not s1:
                    continue
                s2, k2 = _merge(k1, after)
                if not s2:
                    continue
                term = base * v
                out[k2] = out.get(k2, ZERO) + (term if s1 * s2 > 0 else -term)
    return KForm._raw(deg, g.dim, out)
