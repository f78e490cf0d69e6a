"""Reading theory files.

One directive per line, ``#`` starts a comment::

    atoms: a f n r          # optional extra vocabulary
    fact: <>(a & ~f)        # hard information (Boolean or flat alethic)
    default: r => a         # normality conditional
    norm: O(f | a)          # obligation
    query: O(n | a)         # any query form
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .formula import (
    NORMALITY, OBLIGATION, FormulaSyntaxError, Query, atoms_of, parse_alethic, parse_query, parse_rule,
)
from .norms import Theory

DIRECTIVES = ("atoms", "fact", "default", "norm", "query")
_LINE_RE = re.compile(r"\s*([A-Za-z_]+)\s*:(.*)\Z")
_ATOM_RE = re.compile(r"[a-z][a-z0-9_]*\Z")


class TheoryFileError(FormulaSyntaxError):
    def __init__(self, message: str, source: str = "<string>", line: int | None = None):
        self.source = source
        self.line = line
        where = f"{source}:{line}: " if line is not None else f"{source}: "
        ValueError.__init__(self, where + message)


@dataclass
class TheoryFile:
    theory: Theory
    queries: list[Query] = field(default_factory=list)
    query_texts: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    source: str = "<string>"


def parse_theory_text(text: str, source: str = "<string>", allow_incoherent: bool = False) -> TheoryFile:
    atoms: list[str] = []
    gamma, r_norm, r_oblig, queries, query_texts = [], [], [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise TheoryFileError(f"expected 'directive: value', got {line!r}", source, lineno)
        directive, value = m.group(1), m.group(2).strip()
        if directive not in DIRECTIVES:
            raise TheoryFileError(f"unknown directive {directive!r}", source, lineno)
        if not value and directive != "atoms":
            raise TheoryFileError(f"empty {directive}", source, lineno)
        try:
            if directive == "atoms":
                names = value.replace(",", " ").split()
                bad = [a for a in names if not _ATOM_RE.match(a) or a in ("true", "false")]
                if bad:
                    raise FormulaSyntaxError(f"invalid atom names {bad}")
                atoms.extend(names)
            elif directive == "fact":
                gamma.append(parse_alethic(value))
            elif directive == "default":
                r_norm.append(parse_rule(value, NORMALITY))
            elif directive == "norm":
                r_oblig.append(parse_rule(value, OBLIGATION))
            else:
                queries.append(parse_query(value))
                query_texts.append(value)
        except FormulaSyntaxError as exc:
            raise TheoryFileError(str(exc), source, lineno) from exc

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        theory = Theory.build(gamma, r_norm, r_oblig, atoms, allow_incoherent=allow_incoherent)
    notes = [str(w.message) for w in caught]
    return TheoryFile(theory, queries, query_texts, notes, source)


def load_theory(path, allow_incoherent: bool = False) -> TheoryFile:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_theory_text(text, str(path), allow_incoherent)


def dump_theory(theory: Theory, queries=()) -> str:
    """Render a theory (and queries) in the file format."""
    lines = []
    extra = set(theory.vocab)
    extra -= set(atoms_of(*theory.gamma, *theory.r_norm, *theory.r_oblig))
    if extra:
        lines.append("atoms: " + " ".join(sorted(extra)))
    lines += [f"fact: {phi}" for phi in theory.gamma]
    lines += [f"default: {r}" for r in theory.r_norm]
    lines += [f"norm: {r}" for r in theory.r_oblig]
    lines += [f"query: {q}" for q in queries]
    return "\n".join(lines) + "\n"
