"""Classification of a (partial) geometric structure into a flat report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import linalg as la
from .errors import HKTError
from .geometry import (
    GeomStructure,
    bismut,
    check_hypercomplex,
    codifferential,
    hkt_check,
    is_abelian_hypercomplex,
    is_integrable,
    kaehler_form,
    lee_form,
    torsion_3form,
)
from .lie import KForm, ce_differential, jacobi_defect

__all__ = ["FLAGS", "FORMS", "Report", "classify"]

FLAGS = (
    "hypercomplex",
    "abelian_hypercomplex",
    "hermitian",
    "kahler",
    "hyper_hermitian",
    "hkt",
    "strong",
    "weak",
    "balanced",
    "conformally_balanced",
    "hyper_kahler",
    "torsion_coclosed",
)
FORMS = ("c", "dc", "theta", "dtheta", "dstar_c")
DEGREES = {"c": 3, "dc": 4, "theta": 1, "dtheta": 2, "dstar_c": 2}


@dataclass(frozen=True)
class Report:
    """Flags are ``True``/``False``, or ``None`` when the question does not
    apply (no metric, no triple, torsion form unavailable...)."""

    name: str
    dim: int
    complex_integrable: tuple
    flags: dict
    omegas: tuple = ()
    forms: dict = field(default_factory=dict)
    notes: tuple = ()

    def flag(self, key: str):
        return self.flags[key]

    def form(self, key: str) -> KForm | None:
        return self.forms.get(key)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "complex_integrable": list(self.complex_integrable),
            "flags": {k: self.flags[k] for k in FLAGS},
            "omega": [w.render() for w in self.omegas],
            "forms": {k: (self.forms[k].render() if self.forms.get(k) is not None else None) for k in FORMS},
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        def show(v):
            return "n/a" if v is None else str(v).lower()

        lines = [f"structure: {self.name} (dim {self.dim})"]
        if self.complex_integrable:
            lines.append("complex_integrable: " + ", ".join(f"J{a}={show(v)}" for a, v in enumerate(self.complex_integrable, 1)))
        width = max(len(k) for k in FLAGS)
        for k in FLAGS:
            lines.append(f"  {k:<{width}}  {show(self.flags[k])}")
        for a, w in enumerate(self.omegas, 1):
            lines.append(f"omega{a} = {w.render()}")
        for k in FORMS:
            f = self.forms.get(k)
            lines.append(f"{k} = {'n/a' if f is None else f.render()}")
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Report":
        """Inverse of :meth:`to_dict` (forms are reparsed exactly)."""
        n = data["dim"]
        forms = {k: KForm.parse(v, n, DEGREES[k]) for k, v in data["forms"].items() if v is not None}
        return cls(
            data["name"],
            n,
            tuple(data["complex_integrable"]),
            dict(data["flags"]),
            tuple(KForm.parse(w, n, 2) for w in data["omega"]),
            forms,
            tuple(data["notes"]),
        )


def _compatible(J, metric) -> bool:
    G = metric.gram
    return la.matmul(la.matmul(la.transpose(J), G), J) == G


def classify(s: GeomStructure, name: str = "") -> Report:
    """Evaluate every flag that makes sense for ``s``.

    The torsion-form family (``c``, ``dc``, Lee form, ...) is computed from the
    Bismut connection of ``J1`` when ``s`` is Hermitian with a single complex
    structure, or HKT with a triple (then all three Bismut connections agree).
    """
    g = s.algebra
    n = g.dim
    flags = dict.fromkeys(FLAGS)
    notes = []
    defect, wit = jacobi_defect(g)
    if defect:
        notes.append(f"Jacobi identity fails on e{wit[0] + 1}, e{wit[1] + 1}, e{wit[2] + 1}")
        return Report(name, n, (), flags, notes=tuple(notes))

    square_ok = [la.madd(la.matmul(J, J), la.identity(n)) == la.zeros(n) for J in s.complex]
    integrable = tuple(is_integrable(J, g)[0] if ok else False for J, ok in zip(s.complex, square_ok))
    metric = s.metric

    if s.is_triple:
        flags["hypercomplex"] = check_hypercomplex(*s.complex, g).ok
        flags["abelian_hypercomplex"] = flags["hypercomplex"] and is_abelian_hypercomplex(*s.complex, g)[0]

    omegas = ()
    if metric is not None and s.complex:
        compat = [ok and _compatible(J, metric) for J, ok in zip(s.complex, square_ok)]
        flags["hermitian"] = compat[0] and integrable[0]
        if all(compat):
            omegas = tuple(kaehler_form(J, metric) for J in s.complex)
        if flags["hermitian"]:
            flags["kahler"] = ce_differential(omegas[0], g).is_zero()
        if s.is_triple:
            flags["hyper_hermitian"] = bool(flags["hypercomplex"]) and all(compat)
            if flags["hyper_hermitian"]:
                flags["hkt"] = hkt_check(s).hkt

    torsion_ready = flags["hkt"] if s.is_triple else flags["hermitian"]
    forms = {}
    if torsion_ready:
        try:
            c = torsion_3form(bismut(s, 1), s)
        except HKTError as exc:
            notes.append(f"torsion form unavailable: {exc}")
        else:
            dc = ce_differential(c, g)
            theta = lee_form(s, c, 1)
            dtheta = ce_differential(theta, g)
            dstar = codifferential(c, s)
            forms = {"c": c, "dc": dc, "theta": theta, "dtheta": dtheta, "dstar_c": dstar}
            flags["strong"] = dc.is_zero()
            flags["weak"] = not dc.is_zero()
            flags["balanced"] = theta.is_zero()
            flags["conformally_balanced"] = dtheta.is_zero()
            flags["torsion_coclosed"] = dstar.is_zero()
            if s.is_triple:
                flags["hyper_kahler"] = c.is_zero()
    return Report(name, n, integrable, flags, omegas, forms, tuple(notes))
