"""Plain-text file formats.

``prmat`` matrix files::

    # optional comment lines
    prmat <rows> <cols>
    <cols floats separated by single spaces>   (one line per row)

Floats are rendered with 17 significant digits, which round-trips every
float64 exactly.

Instance files are ``key: value`` lines followed by an inline ``basis:``
prmat block::

    n: 4
    m: 2
    seed: 7
    generator_id: primal_feasible/v1
    witness_tag: PrimalInterior
    witness: 0.5 0.25 ...
    basis:
    prmat 4 2
    ...

``witness`` and ``witness_tag`` may be ``none``. Instead of an inline
block, ``basis: <relative path>`` may name a separate prmat file.
"""

import os

import numpy as np

from .instances import Instance


class FormatError(ValueError):
    pass


def fmt(v):
    return format(float(v), ".17g")


def render_matrix(a):
    a = np.asarray(a, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    rows, cols = a.shape
    lines = [f"prmat {rows} {cols}"]
    lines += [" ".join(fmt(v) for v in row) for row in a]
    return "\n".join(lines) + "\n"


def _content_lines(text):
    return [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def parse_matrix_lines(lines):
    """Parse a prmat block from pre-filtered lines; returns ``(matrix, rest)``."""
    if not lines:
        raise FormatError("empty matrix block")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "prmat":
        raise FormatError(f"bad prmat header {lines[0]!r}")
    try:
        rows, cols = int(head[1]), int(head[2])
    except ValueError as exc:
        raise FormatError(f"bad prmat header {lines[0]!r}") from exc
    body = lines[1:1 + rows]
    if len(body) != rows:
        raise FormatError(f"expected {rows} rows, found {len(body)}")
    data = np.empty((rows, cols))
    for r, ln in enumerate(body):
        vals = ln.split()
        if len(vals) != cols:
            raise FormatError(f"row {r} has {len(vals)} entries, expected {cols}")
        try:
            data[r] = [float(v) for v in vals]
        except ValueError as exc:
            raise FormatError(f"row {r}: {exc}") from exc
    if not np.all(np.isfinite(data)):
        raise FormatError("non-finite entry")
    return data, lines[1 + rows:]


def parse_matrix(text):
    data, rest = parse_matrix_lines(_content_lines(text))
    if rest:
        raise FormatError("trailing content after matrix")
    return data


def read_matrix(path):
    with open(path, encoding="utf-8") as f:
        return parse_matrix(f.read())


def write_matrix(path, a):
    with open(path, "w", encoding="utf-8") as f:
        f.write(render_matrix(a))


def read_vector(path):
    """A vector stored either as an ``n x 1``/``1 x n`` prmat or as bare floats."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    lines = _content_lines(text)
    if lines and lines[0].startswith("prmat"):
        a = parse_matrix(text)
        if 1 not in a.shape:
            raise FormatError(f"expected a vector, got shape {a.shape}")
        return a.ravel()
    try:
        return np.array([float(v) for ln in lines for v in ln.split()])
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def render_instance(inst):
    w = "none" if inst.witness is None else " ".join(fmt(v) for v in inst.witness)
    lines = [
        f"n: {inst.n}",
        f"m: {inst.m}",
        f"seed: {inst.seed}",
        f"generator_id: {inst.generator_id}",
        f"witness_tag: {inst.witness_tag or 'none'}",
        f"witness: {w}",
        "basis:",
    ]
    return "\n".join(lines) + "\n" + render_matrix(inst.basis)


def parse_instance(text, base_dir="."):
    lines = _content_lines(text)
    fields = {}
    basis = None
    while lines:
        ln = lines.pop(0)
        key, sep, value = ln.partition(":")
        if not sep:
            raise FormatError(f"expected 'key: value', got {ln!r}")
        key, value = key.strip(), value.strip()
        if key == "basis":
            if value:
                basis = read_matrix(os.path.join(base_dir, value))
            else:
                basis, lines = parse_matrix_lines(lines)
            continue
        fields[key] = value
    missing = {"n", "m"} - fields.keys()
    if missing or basis is None:
        raise FormatError(f"instance missing fields: {sorted(missing | ({'basis'} if basis is None else set()))}")
    n, m = int(fields["n"]), int(fields["m"])
    if basis.shape != (n, m):
        raise FormatError(f"declared n={n}, m={m} but basis is {basis.shape[0]}x{basis.shape[1]}")
    w = fields.get("witness", "none")
    witness = None if w in ("", "none") else np.array([float(v) for v in w.split()])
    if witness is not None and witness.size != n:
        raise FormatError(f"witness has {witness.size} entries, expected {n}")
    tag = fields.get("witness_tag", "none")
    return Instance(n, m, basis, witness, None if tag == "none" else tag,
                    int(fields.get("seed", 0)), fields.get("generator_id", "manual"))


def read_instance(path):
    with open(path, encoding="utf-8") as f:
        return parse_instance(f.read(), os.path.dirname(os.path.abspath(path)))


def write_instance(path, inst):
    with open(path, "w", encoding="utf-8") as f:
        f.write(render_instance(inst))
