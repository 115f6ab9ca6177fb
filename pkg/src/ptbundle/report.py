"""
Input grammar and the JSON analysis report.

Every float in a report is rounded to FLOAT_DIGITS significant digits and
documents are dumped with sorted keys, so identical input and tolerances
give byte-identical output.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass

from . import __version__
from .errors import NonPositiveSyllable, ParseError
from .farey import build_strip, minimal_paths
from .hyperbolic import regular_ideal_volume, solve_geometric, volume
from .sl2z import MatSL2, TwistWord, rl_factorize, word_to_matrix
from .surfaces import build_surface, guts_report
from .triangulation import build_layered_triangulation

FLOAT_DIGITS = 15
DEFAULT_SOLVER_TOL = 1e-12
BOUND_TOL = 1e-9
DEFAULT_MAX_PATHS = 64
SECTIONS = ("factor", "strip", "surfaces", "guts", "triangulation", "volume")

SIGN_NOTE = ("bundles with monodromy A and -A can differ; every section below is "
             "computed from the positive twist word and the sign is carried as metadata")

_INT = re.compile(r"\s*([+-]?\d+)\s*")


def _ints(text, expected=None, what="value"):
    out, pos = [], 0
    for i, chunk in enumerate(text.split(",")):
        m = _INT.fullmatch(chunk)
        if not m:
            raise ParseError(f"expected an integer {what}, got {chunk.strip()!r}", pos)
        out.append(int(m.group(1)))
        pos += len(chunk) + 1
    if expected is not None and len(out) != expected:
        raise ParseError(f"expected {expected} integers, got {len(out)}", len(text))
    return out


def parse_matrix(text: str) -> MatSL2:
    return MatSL2(*_ints(text, 4, "matrix entry"))


def parse_word(text: str) -> TwistWord:
    syllables, pos = [], 0
    for chunk in text.split(";"):
        try:
            l, m = _ints(chunk, 2, "exponent")
        except ParseError as e:
            raise ParseError(str(e).split(" (at")[0], pos + (e.position or 0)) from None
        if l < 1 or m < 1:
            raise NonPositiveSyllable(f"non-positive syllable ({l},{m}) at position {pos}")
        syllables.append((l, m))
        pos += len(chunk) + 1
    return TwistWord(tuple(syllables))


@dataclass(frozen=True)
class Tolerances:
    solver: float = DEFAULT_SOLVER_TOL
    bound: float = BOUND_TOL
    source: str = "default"

    @classmethod
    def resolve(cls, flag=None):
        if flag is not None:
            return cls(float(flag), source="flag")
        env = os.environ.get("PTB_TOLERANCE")
        if env:
            return cls(float(env), source="env:PTB_TOLERANCE")
        return cls()

    def as_dict(self):
        return {"solver": self.solver, "bound": self.bound, "source": self.source}


def _round(x):
    if isinstance(x, float):
        return float(f"{x:.{FLOAT_DIGITS}g}") + 0.0
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


def dumps(doc) -> str:
    return json.dumps(_round(doc), sort_keys=True)


def _word_dict(w: TwistWord):
    return {"syllables": [list(s) for s in w.syllables], "sign": w.sign,
            "n": w.length, "letters": w.letters()}


class Analysis:
    """Lazily computed sections of the report for one monodromy."""

    def __init__(self, source, tolerances=None, max_paths=DEFAULT_MAX_PATHS):
        self.tol = tolerances or Tolerances()
        self.max_paths = max_paths
        if isinstance(source, MatSL2):
            self.matrix = source
            fac = rl_factorize(source)
            self.word = TwistWord(fac.word.syllables)
            self.sign = fac.word.sign
            self._factor = {"word": _word_dict(fac.word),
                            "conjugator": fac.conjugator.rows(),
                            "conjugator_found": fac.conjugator_found}
        else:
            self.matrix = None
            self.word = source
            self.sign = source.sign
            self._factor = {"word": _word_dict(source),
                            "conjugator": MatSL2.identity().rows(),
                            "conjugator_found": True}
        self._factor["canonical"] = _word_dict(self.word.canonical())
        self._factor["monodromy"] = word_to_matrix(self.word).rows()
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def strip(self):
        return self._get("strip", lambda: build_strip(self.word))

    @property
    def paths(self):
        return self._get("paths", lambda: minimal_paths(self.strip, self.max_paths))

    @property
    def surfaces(self):
        return self._get("surfaces", lambda: [build_surface(p) for p in self.paths])

    @property
    def geometry(self):
        def run():
            t = build_layered_triangulation(self.word)
            angles, shapes = solve_geometric(t, self.tol.solver)
            return t, angles, shapes, volume(angles, self.tol.bound)
        return self._get("geometry", run)

    def section(self, name):
        return getattr(self, "_section_" + name)()

    def _section_factor(self):
        return self._factor

    def _section_strip(self):
        s = self.strip
        return {"n": s.n, "triangle_count": len(s.triangles),
                "triangles": [[str(v) for v in t.vertices] for t in s.triangles]}

    def _section_surfaces(self):
        out = []
        for p, S in zip(self.paths, self.surfaces):
            entry = {"vertices": [str(v) for v in p.vertices], "k": p.period,
                     "parity": "even" if p.period % 2 == 0 else "odd",
                     "chi": S.chi, "sidedness": S.sided.value,
                     "cells": {"V": S.V, "E": S.E, "F": S.F}, "double": None}
            if S.double is not None:
                D = S.double
                entry["double"] = {"chi": D.chi, "sidedness": D.sided.value,
                                   "cells": {"V": D.V, "E": D.E, "F": D.F}}
            out.append(entry)
        return out

    def _section_guts(self):
        out = []
        for p, S in zip(self.paths, self.surfaces):
            g = guts_report(p, S)
            out.append({"k": g.k, "parity": g.parity,
                        "square_neighborhoods": g.square_neighborhoods,
                        "seifert_solid_tori": g.seifert_solid_tori,
                        "handlebody_ibundle": g.handlebody_ibundle,
                        "guts_empty": g.guts_empty, "chi_surface": g.chi_surface,
                        "agol_lower_bound": g.agol_lower_bound})
        return out

    def _section_triangulation(self):
        t, _, _, _ = self.geometry
        return {"n": t.n, "edge_classes": len(t.edge_classes),
                "edge_degrees": [len(c) for c in t.edge_classes]}

    def _section_volume(self):
        _, angles, shapes, v = self.geometry
        return {"volume": v.volume, "n": v.n, "bound": v.bound,
                "v3": regular_ideal_volume(),
                "bound_satisfied": bool(v.bound_satisfied), "equality_gap": v.equality_gap,
                "residual": shapes.residual,
                "angles": angles.angles.tolist(),
                "shapes": [[z.real, z.imag] for z in shapes.shapes]}

    def meta(self):
        return {"input": {"matrix": self.matrix.rows() if self.matrix else None,
                          "word": None if self.matrix else str(self.word)},
                "sign": self.sign, "sign_note": SIGN_NOTE,
                "version": __version__, "tolerances": self.tol.as_dict(),
                "precision": {"float_significant_digits": FLOAT_DIGITS}}

    def report(self, sections=SECTIONS):
        doc = {name: self.section(name) for name in sections}
        if tuple(sections) == SECTIONS:
            doc.update(self.meta())
        return doc


def analyze(source, tolerances=None, max_paths=DEFAULT_MAX_PATHS) -> dict:
    return Analysis(source, tolerances, max_paths).report()
