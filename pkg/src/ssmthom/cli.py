"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 mathematical failure (inconsistent or
underdetermined system, zero Euler class, unstable unfolding), 3 invalid or
insufficient catalog.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .algebra import coefficient_str, parse_coefficient
from .apps import hierarchy_test, locus_report, sum_check
from .bases import BasisError, BasisExpansion, expand, format_expansion, latex_expansion
from .catalog import (
    CatalogError,
    GenotypeSpec,
    bundled_catalog,
    load_catalog,
    mather_bound,
    validate_catalog,
)
from .solver import SolverError, ssm_thom
from .unfolding import UnfoldingError, derive_entry

EXIT_OK, EXIT_USAGE, EXIT_MATH, EXIT_CATALOG = 0, 1, 2, 3

BASIS_NAMES = {"chern": "chern", "schur": "schur", "tilde": "schur_tilde"}


class MathFailure(click.ClickException):
    exit_code = EXIT_MATH


class CatalogFailure(click.ClickException):
    exit_code = EXIT_CATALOG


class UsageFailure(click.ClickException):
    exit_code = EXIT_USAGE


def _emit(text: str) -> None:
    click.echo(text)


def _catalog(ell: int | None, path: str | None):
    try:
        if path is not None:
            cat = load_catalog(path)
            if ell is not None and cat.ell != ell:
                raise UsageFailure(f"catalog {path} is for ell={cat.ell}, not ell={ell}")
            return cat
        if ell is None:
            raise UsageFailure("--ell is required without --catalog")
        return bundled_catalog(ell)
    except CatalogError as exc:
        raise CatalogFailure(str(exc)) from exc


def _check_degree(cat, d: int) -> None:
    if d < 0:
        raise UsageFailure("degree must be non-negative")
    if d > mather_bound(cat.ell):
        raise UsageFailure(f"degree {d} exceeds the Mather bound {mather_bound(cat.ell)} for ell={cat.ell}")
    if d > cat.max_codim:
        raise CatalogFailure(
            f"degree {d} exceeds catalog max_codim {cat.max_codim} for ell={cat.ell}"
        )


def _entry(cat, name: str):
    try:
        return cat.get(name)
    except KeyError as exc:
        raise UsageFailure(f"unknown entry {name!r} for ell={cat.ell}") from exc


# ---------------------------------------------------------------------------
# JSON documents for expansions


def expansion_document(entry: str, ell: int, e: BasisExpansion) -> dict:
    basis = next(k for k, v in BASIS_NAMES.items() if v == e.basis)
    return {
        "entry": entry,
        "ell": ell,
        "degree": e.degree,
        "basis": basis,
        "terms": [
            {"partition": list(p), "coefficient": coefficient_str(c)} for p, c in e.ordered()
        ],
    }


def expansion_from_document(doc: dict) -> BasisExpansion:
    coeffs = {tuple(t["partition"]): parse_coefficient(t["coefficient"]) for t in doc["terms"]}
    return BasisExpansion(BASIS_NAMES[doc["basis"]], int(doc["degree"]), coeffs)


def dumps(doc) -> str:
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli() -> None:
    """SSM-Thom polynomials of contact singularities by interpolation."""


@cli.command()
@click.option("--entry", required=True, help="Singularity name or presentation, e.g. A2, I24, b'24.")
@click.option("--ell", type=int, default=None, help="Relative dimension.")
@click.option("--degree", type=int, required=True, help="Truncation degree.")
@click.option("--basis", type=click.Choice(list(BASIS_NAMES)), default="chern", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json", "latex"]), default="text", show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(), default=None)
def compute(entry, ell, degree, basis, fmt, catalog_path):
    """Compute T(entry) up to the given degree."""
    cat = _catalog(ell, catalog_path)
    _check_degree(cat, degree)
    e = _entry(cat, entry)
    try:
        T = ssm_thom(e.name, cat.ell, degree, cat)
        exp = expand(T.series, BASIS_NAMES[basis])
    except (SolverError, BasisError) as exc:
        raise MathFailure(str(exc)) from exc
    if fmt == "json":
        _emit(dumps(expansion_document(e.name, cat.ell, exp)))
    elif fmt == "latex":
        _emit(latex_expansion(exp))
    else:
        _emit(format_expansion(exp))


def _genotype_from_file(path: str) -> tuple[GenotypeSpec, dict]:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageFailure(f"cannot read genotype file {path}: {exc}") from exc
    try:
        rels = data.get("relations", [])
        if all(isinstance(r, str) for r in rels):
            variables = [(v["name"], v["weight"]) for v in data.get("variables", [])]
            g = GenotypeSpec.build(variables, rels)
        else:
            g = GenotypeSpec.from_dict(data)
    except (KeyError, TypeError, ValueError, CatalogError) as exc:
        raise UsageFailure(f"malformed genotype file {path}: {exc}") from exc
    problems = g.check()
    if problems:
        raise UsageFailure(f"invalid genotype in {path}: " + "; ".join(problems))
    return g, data


@cli.command()
@click.argument("genotype_file", type=click.Path())
@click.option("--ell", type=int, required=True)
@click.option("--jet-bound", type=int, default=None, help="Fix the jet truncation instead of searching.")
@click.option("--name", default=None)
def derive(genotype_file, ell, jet_bound, name):
    """Derive a catalog entry from a genotype JSON file.

    The file holds {"variables": [{"name": "x", "weight": [1, 0]}, ...],
    "relations": ["x^2", "y^3"]} and optionally "name" and "presentation".
    """
    if ell < 0:
        raise UsageFailure("ell must be non-negative")
    g, data = _genotype_from_file(genotype_file)
    try:
        entry = derive_entry(
            g,
            ell,
            jet_bound=jet_bound,
            name=name or data.get("name", ""),
            presentation=data.get("presentation", ""),
        )
    except (UnfoldingError, CatalogError, ArithmeticError) as exc:
        raise MathFailure(str(exc)) from exc
    except ValueError as exc:
        raise UsageFailure(str(exc)) from exc
    doc = entry.to_dict()
    _emit(json.dumps(doc, indent=1))


@cli.command()
@click.option("--entry", required=True)
@click.option("--ell", type=int, required=True)
@click.option("--source-dim", type=int, required=True, help="Dimension m of the source projective space.")
@click.option("--target-dim", type=int, required=True, help="Dimension n of the target projective space.")
@click.option("--map-degree", type=int, default=None, help="Degree of the polynomial map.")
@click.option("--symbolic", default=None, help="Name of a symbolic map degree, e.g. d.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--catalog", "catalog_path", type=click.Path(), default=None)
def apply(entry, ell, source_dim, target_dim, map_degree, symbolic, fmt, catalog_path):
    """Characteristic classes of the entry's locus for a map P^m -> P^n."""
    if target_dim - source_dim != ell:
        raise UsageFailure(f"target-dim - source-dim = {target_dim - source_dim}, expected ell={ell}")
    if (map_degree is None) == (symbolic is None):
        raise UsageFailure("give exactly one of --map-degree and --symbolic")
    if source_dim < 1:
        raise UsageFailure("source-dim must be positive")
    cat = _catalog(ell, catalog_path)
    e = _entry(cat, entry)
    # classes in P^m need T through degree m
    d = source_dim
    if d > min(cat.max_codim, mather_bound(ell)):
        raise CatalogFailure(
            f"P^{source_dim} needs degree {d}, beyond the catalog range {cat.max_codim} for ell={ell}"
        )
    try:
        T = ssm_thom(e.name, ell, d, cat)
        report = locus_report(T, source_dim, target_dim, symbolic if symbolic else map_degree)
    except SolverError as exc:
        raise MathFailure(str(exc)) from exc
    if fmt == "json":
        doc = {
            "entry": e.name,
            "ell": ell,
            "source_dim": source_dim,
            "target_dim": target_dim,
            "map_degree": symbolic if symbolic else map_degree,
            "chern": [str(c) for c in report.chern],
            "ssm": str(report.ssm),
            "csm": str(report.csm),
            "degree": coefficient_str(report.profile.degree),
            "chi": [coefficient_str(c) for c in report.profile.chi],
        }
        _emit(dumps(doc))
    else:
        for line in report.lines():
            _emit(line)


@cli.command()
@click.option("--lower", required=True)
@click.option("--upper", required=True)
@click.option("--ell", type=int, default=None)
@click.option("--degree", type=int, default=None, help="Defaults to the codimension of --upper.")
@click.option("--catalog", "catalog_path", type=click.Path(), default=None)
def hierarchy(lower, upper, ell, degree, catalog_path):
    """Is LOWER in the closure of UPPER?  Tests the restricted Thom polynomial."""
    cat = _catalog(ell, catalog_path)
    lo, up = _entry(cat, lower), _entry(cat, upper)
    d = up.codim if degree is None else degree
    _check_degree(cat, d)
    if d < up.codim:
        raise UsageFailure(f"degree {d} is below codim {up.codim} of {up.name}")
    try:
        verdict = hierarchy_test(lo.name, up.name, cat.ell, d, cat)
    except SolverError as exc:
        raise MathFailure(str(exc)) from exc
    _emit(str(verdict))


@cli.command()
@click.option("--ell", type=int, default=None)
@click.option("--degree", type=int, required=True)
@click.option("--tilde/--no-tilde", default=None, help="Also check the Schur-tilde expansion.")
@click.option("--catalog", "catalog_path", type=click.Path(), default=None)
def sumcheck(ell, degree, tilde, catalog_path):
    """The sum of T over the whole catalog must equal 1."""
    cat = _catalog(ell, catalog_path)
    _check_degree(cat, degree)
    try:
        report = sum_check(cat, degree, tilde)
    except (SolverError, BasisError) as exc:
        raise MathFailure(str(exc)) from exc
    if report.passed:
        _emit("PASS")
        return
    _emit("FAIL")
    for line in report.detail:
        _emit(line)
    raise click.exceptions.Exit(EXIT_MATH)


@cli.group()
def catalog() -> None:
    """Inspect and validate singularity catalogs."""


@catalog.command("validate")
@click.option("--ell", type=int, default=None)
@click.option("--degree", type=int, default=None, help="Defaults to the catalog's max_codim.")
@click.option("--catalog", "catalog_path", type=click.Path(), default=None)
@click.option("--verbose", "-v", is_flag=True, help="List every individual check.")
def catalog_validate(ell, degree, catalog_path, verbose):
    cat = _catalog(ell, catalog_path)
    d = cat.max_codim if degree is None else degree
    report = validate_catalog(cat, d)
    _emit(report.summary(len(cat)))
    lines = report.lines() if verbose else [l for l in report.lines() if l.startswith("FAIL")]
    for line in lines:
        _emit(line)
    if not report.passed:
        raise click.exceptions.Exit(EXIT_CATALOG)


@catalog.command("list")
@click.option("--ell", type=int, default=None)
@click.option("--catalog", "catalog_path", type=click.Path(), default=None)
def catalog_list(ell, catalog_path):
    cat = _catalog(ell, catalog_path)
    width = max(len(e.name) for e in cat)
    for e in cat:
        _emit(f"{e.name:<{width}}  codim {e.codim:>2}  rank {e.torus_rank}  {e.presentation}")


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and return the process exit code."""
    try:
        rv = cli.main(args=argv, prog_name="ssmthom", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code if isinstance(exc, (MathFailure, CatalogFailure)) else EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
