"""The ``hforge`` command line tool.

Exit codes: 0 success, 1 a checked property failed, 2 bad input or usage.
"""
from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from .errors import ConsistencyError, InputError, ResourceError
from .finab import max_order
from .io import dumps, load_form, load_phase_form, read_json, write_json

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
EXAMPLES = ("d4", "heis", "perturbed", "freenil3")


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    code = EXIT_VIOLATION if isinstance(exc, ConsistencyError) else EXIT_INPUT
    sys.exit(code)


def _guarded(fn):
    """Map library errors to exit codes."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (InputError, ResourceError, ConsistencyError) as exc:
            _fail(exc)
    return wrapper


def _emit(data, out) -> None:
    if out is None:
        click.echo(dumps(data), nl=False)
    else:
        write_json(out, data)
        click.echo(f"wrote {out}")


@click.group()
@click.version_option(package_name="hforge")
def main():
    """Heisenberg groups of bilinear forms over finite abelian groups."""


@main.command("build-heisenberg")
@click.option("--form", "form_path", required=True, type=click.Path(dir_okay=False), help="bilinear form JSON")
@click.option("--expanded", is_flag=True, help="use the expanded torus T + G0 + Gamma0")
@click.option("--out", type=click.Path(dir_okay=False), help="output group JSON (stdout if omitted)")
@_guarded
def build_heisenberg(form_path, expanded, out):
    """Write the Cayley table of H(beta) with labels c(x,xi)."""
    from .heis import HeisGroup, heis_from_form_expanded

    b = load_form(read_json(form_path))
    if expanded:
        obj = heis_from_form_expanded(b)
        data = obj.ext.total.to_json()
        data["torus"] = obj.ext.torus.to_json()
        data["phase"] = obj.ext.phase.to_json()
    else:
        h = HeisGroup(b)
        data = h.group.to_json()
        data["torus"] = b.torus.to_json()
    _emit(data, out)


@main.command()
@click.option("--suite", default="all", show_default=True,
              type=click.Choice(["nil2", "symplectic", "heisenberg", "cohomology", "roundtrip", "all"]))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--corpus", "corpus_path", type=click.Path(dir_okay=False), help="corpus JSON instead of the default")
@click.option("--max-order", "max_order_", type=int, help="largest |H| in the default corpus (default: HFORGE_MAX_ORDER or 256)")
@click.option("--out", type=click.Path(dir_okay=False), help="also write the report to this file")
def verify(suite, seed, corpus_path, max_order_, out):
    """Run verification suites and print a PASS/FAIL line per check."""
    from .corpus import corpus_from_json
    from .verify import SuiteConfig, run

    try:
        bound = max_order_ if max_order_ is not None else max_order()
        corpus = corpus_from_json(read_json(corpus_path)) if corpus_path else None
        report = run(SuiteConfig(suite=suite, seed=seed, max_order=bound, corpus=corpus))
    except (InputError, ResourceError) as exc:
        _fail(exc)
    text = report.text()
    click.echo(text)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    sys.exit(EXIT_OK if report.ok else EXIT_VIOLATION)


@main.command()
@click.argument("name")
@click.option("--param", type=int, help="N for heis and perturbed")
@click.option("--out", "out_dir", default=".", show_default=True, type=click.Path(file_okay=False),
              help="output directory")
@_guarded
def example(name, param, out_dir):
    """Write the files of a named example: d4, heis, perturbed, freenil3."""
    from . import corpus

    if name not in EXAMPLES:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    out = Path(out_dir)
    files = {}
    if name == "d4":
        files["d4.form.json"] = corpus.d4_form().to_json()
    elif name == "heis":
        n = 3 if param is None else param
        files[f"heis{n}.form.json"] = corpus.heis_form(n).to_json()
    elif name == "perturbed":
        n = 2 if param is None else param
        ex = corpus.perturbed(n)
        for key in ("gamma0", "alpha", "perturbed"):
            files[f"{key}{n}.cocycle.json"] = ex[key].to_json()
    else:
        from .sympl import lagrangian_bisections
        omega, gamma = corpus.freenil3()
        files["freenil3.form.json"] = omega.to_json()
        files["freenil3.cocycle.json"] = gamma.to_json()
        files["freenil3.bisections.json"] = [[s.to_json() for s in pair] for pair in lagrangian_bisections(omega)]
    for fname, data in files.items():
        write_json(out / fname, data)
        click.echo(f"wrote {out / fname}")


@main.command()
@click.option("--form", "form_path", required=True, type=click.Path(dir_okay=False),
              help="bilinear form JSON (its phase form is used) or alternating form JSON")
@click.option("--dot", "dot_path", type=click.Path(dir_okay=False), help="write the Hasse diagram as DOT")
@_guarded
def lattice(form_path, dot_path):
    """Closed-subgroup lattice of a phase form; prints a JSON summary."""
    from .sympl import closed_lattice, lagrangian_bisections, lagrangian_extremality

    w = load_phase_form(read_json(form_path))
    lat = closed_lattice(w)
    ext = lagrangian_extremality(w)
    summary = {
        "phase": w.p.to_json(),
        "torus": w.torus.to_json(),
        "nondegenerate": bool(w.is_nondegenerate()),
        "closed": [s.to_json() for s in lat.nodes],
        "covers": [list(c) for c in lat.covers],
        "lagrangians": sorted([list(w.p.element(i)) for i in ids] for ids in ext["lagrangian"]),
        "lagrangian_bisections": len(lagrangian_bisections(w)),
    }
    if dot_path:
        Path(dot_path).write_text(lat.to_dot(), encoding="utf-8")
    click.echo(dumps(summary), nl=False)


@main.command()
@click.option("--op", required=True, type=click.Choice(["classify", "equivalent", "qmap", "sqrt"]))
@click.option("--cocycle", "path1", required=True, type=click.Path(dir_okay=False), help="cocycle JSON")
@click.option("--cocycle2", "path2", type=click.Path(dir_okay=False), help="second cocycle for --op equivalent")
@click.option("--out", type=click.Path(dir_okay=False), help="output JSON (stdout if omitted)")
@_guarded
def cohomology(op, path1, path2, out):
    """Cocycle operations.

    classify reports d2, the class and q(gamma); equivalent compares two
    extensions; qmap writes q(gamma); sqrt writes omega/2 for an alternating
    form (or for q of a cocycle) with values in a torus of odd order.
    """
    from .cohom import (Cochain, Cocycle, are_equivalent, cocycle_defect, extension_from_cocycle,
                        is_coboundary, q_map, sqrt_section, strictly_central_by_cocycle)
    from .sympl import AlternatingForm

    raw = read_json(path1)
    if op == "classify":
        c = Cochain.from_json(raw)
        bad = cocycle_defect(c)
        if bad is not None:
            _emit({"cocycle": False, "d2_defect": [list(e) for e in bad]}, out)
            sys.exit(EXIT_VIOLATION)
        g = Cocycle.from_cochain(c)
        w = q_map(g)
        _emit({"cocycle": True, "coboundary": is_coboundary(g) is not None,
               "symmetric": bool(w.is_trivial()), "strictly_central": strictly_central_by_cocycle(g),
               "q": w.to_json()}, out)
    elif op == "equivalent":
        if path2 is None:
            raise InputError("--op equivalent needs --cocycle2")
        e1 = extension_from_cocycle(Cocycle.from_json(raw))
        e2 = extension_from_cocycle(Cocycle.from_json(read_json(path2)))
        phi = are_equivalent(e1, e2)
        _emit({"equivalent": phi is not None, "map": None if phi is None else phi.images.tolist()}, out)
    elif op == "qmap":
        _emit(q_map(Cocycle.from_json(raw)).to_json(), out)
    else:
        try:
            w = AlternatingForm.from_json(raw)
        except InputError:
            w = q_map(Cocycle.from_json(raw))
        _emit(sqrt_section(w).to_json(), out)


if __name__ == "__main__":  # pragma: no cover
    main()
