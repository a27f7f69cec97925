"""Command-line interface for the molq workbench.

Every command prints one JSON document on stdout. Exit codes: 0 for success
or a true verdict, 1 for a false verdict, 2 for usage and input errors.
"""

import functools
import json
import logging
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import click

from molq.codec import (
    decode_certificate,
    decode_frame,
    decode_limit,
    decode_matrix,
    decode_subspace,
    decode_subspace_checked,
    decode_testset,
    describe,
    dumps,
    encode_certificate,
    encode_delta,
    encode_frame,
    encode_limit,
    encode_matrix,
    encode_outcome,
    encode_subspace,
    load_json,
)
from molq.config import Settings, load_settings
from molq.frames import canonical_frame, line_atoms, normalize_frame, verify_frame
from molq.lattice import Subspace, SubspaceLattice, evaluate
from molq.limit import double, metric, realify, testset_enumerate
from molq.linalg import Matrix
from molq.parser import TermParser, TermSyntaxError, parse
from molq.ring import (
    ProjMatrix,
    block_double,
    mp_inverse,
    proj_join,
    proj_meet,
    proj_ortho,
    proj_to_subspace,
)
from molq.sampling import make_rng, random_subspace
from molq.scalars import Field
from molq.suites import SUITES, run_suite
from molq.terms import (
    Term,
    modular_law_term,
    orthomodular_law_term,
    tdn_term,
    tdn_variables,
    to_text,
)
from molq.testset import holds_over, refute_product_testset, refute_testset, verify_certificate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_USAGE = 2

LAWS = {"modular": modular_law_term, "orthomodular": orthomodular_law_term}


@dataclass
class AppContext:
    """State shared by all commands."""

    settings: Settings
    pretty: bool = False


def emit(data: Dict[str, Any], verdict: bool = True):
    """Print the JSON report and exit with the verdict's code."""
    app: AppContext = click.get_current_context().find_object(AppContext)
    click.echo(dumps(data, pretty=app.pretty if app else False))
    sys.exit(EXIT_OK if verdict else EXIT_FALSE)


def handle_errors(command):
    """Report library errors on stderr and exit 2."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except TermSyntaxError as e:
            click.echo(f"Error: syntax error: {e}", err=True)
        except (ValueError, FileNotFoundError, RuntimeError) as e:
            click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USAGE)

    return wrapper


def _settings() -> Settings:
    return click.get_current_context().find_object(AppContext).settings


def _term_from(term: Optional[str], law: Optional[str] = None) -> Term:
    if law:
        return LAWS[law]()
    if not term:
        raise ValueError("Give a term with --term")
    return parse(term)


def _parse_sub(text: str, lattice: SubspaceLattice) -> Subspace:
    """Value of one ``name=...`` binding: 0, 1, @file.json or inline JSON."""
    if text == "0":
        return lattice.bottom
    if text == "1":
        return lattice.top
    if text.startswith("@"):
        data = load_json(text[1:])
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid inline subspace JSON: {e}") from None
    u = decode_subspace(data)
    if not lattice.contains(u):
        raise ValueError(f"Subspace {u} is not an element of {lattice}")
    return u


def _substitution(bindings: List[str], lattice: SubspaceLattice) -> Dict[str, Subspace]:
    substitution = {}
    for binding in bindings:
        name, sep, value = binding.partition("=")
        if not sep or not name:
            raise ValueError(f"Bindings look like name=@file.json, got {binding!r}")
        substitution[name.strip()] = _parse_sub(value.strip(), lattice)
    return substitution


field_option = click.option(
    "--field",
    "field_tag",
    type=click.Choice([f.value for f in Field]),
    default=Field.RATIONAL.value,
    help="Scalar field: Q or Qi (default: Q)",
)


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    help="YAML settings file (default: $MOLQ_CONFIG)",
)
@click.option("--pretty", is_flag=True, help="Indent the JSON output")
@click.option("--verbose", "-v", count=True, help="Log to stderr (-v info, -vv debug)")
@click.option("--seed", type=int, help="Seed for randomized commands (default: 0)")
@click.pass_context
def main(ctx, config_path, pretty, verbose, seed):
    """Exact-arithmetic workbench for modular ortholattices of subspaces.

    Examples:

        # Evaluate a term
        molq eval --dim 2 --term "x | x'" --sub x=@axis1.json

        # Refute a finite test set
        molq refute --dim 2 --testset T.json

        # Run an axiom suite
        molq axioms --suite mol --samples 100
    """
    if verbose:
        logging.basicConfig(
            level=logging.DEBUG if verbose > 1 else logging.INFO,
            format="%(asctime)s %(name)s %(levelname)s %(message)s",
            stream=sys.stderr,
        )
    try:
        settings = load_settings(config_path, seed=seed)
    except (ValueError, FileNotFoundError) as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(EXIT_USAGE)
    ctx.obj = AppContext(settings, pretty)


@main.command("parse")
@click.option("--term", "-t", help="Term text")
@click.option(
    "--file", "-f", "file_path", type=click.Path(exists=True), help="File with one term per line"
)
@handle_errors
def parse_command(term, file_path):
    """Parse terms and show their structure."""
    if file_path:
        terms = list(TermParser.parse_file(file_path))
    else:
        terms = [_term_from(term)]
    reports = [
        {
            "text": to_text(t),
            "ast": repr(t),
            "variables": t.variables(),
            "size": t.size(),
            "depth": t.depth(),
        }
        for t in terms
    ]
    emit(reports[0] if not file_path else {"terms": reports})


@main.command("print")
@click.option("--term", "-t", required=True, help="Term text")
@handle_errors
def print_command(term):
    """Print a term in fully parenthesized form."""
    emit({"text": to_text(parse(term))})


@main.command("eval")
@click.option("--dim", "-d", required=True, type=int, help="Ambient dimension")
@field_option
@click.option("--term", "-t", required=True, help="Term text")
@click.option("--sub", "-s", "bindings", multiple=True, help="Binding name=@file.json, 0 or 1")
@handle_errors
def eval_command(dim, field_tag, term, bindings):
    """Evaluate a term in L(F^dim)."""
    lattice = SubspaceLattice(dim, Field(field_tag))
    value = evaluate(parse(term), _substitution(list(bindings), lattice), lattice)
    emit(
        {
            "value": describe(value),
            "is_top": value == lattice.top,
            "space": encode_subspace(value),
        }
    )


@main.command("taut-check")
@click.option("--dim", "-d", required=True, type=int, help="Ambient dimension")
@field_option
@click.option("--term", "-t", help="Term text")
@click.option("--law", type=click.Choice(sorted(LAWS)), help="Check a built-in law instead")
@click.option("--testset", type=click.Path(exists=True), help="Check exhaustively over this set")
@click.option("--samples", type=int, help="Random substitutions without --testset")
@click.option("--budget", type=int, help="Substitution budget")
@handle_errors
def taut_check_command(dim, field_tag, term, law, testset, samples, budget):
    """Check that a term evaluates to 1, exhaustively over a test set or on samples."""
    settings = _settings()
    lattice = SubspaceLattice(dim, Field(field_tag))
    t = _term_from(term, law)
    if testset:
        elements = decode_testset(load_json(testset))
        outcome = holds_over(
            t,
            elements,
            lattice,
            budget=budget or settings.budget,
            workers=settings.workers,
        )
        emit({"term": to_text(t), "mode": "testset", **encode_outcome(outcome)}, outcome.holds)

    rng = make_rng(settings.seed)
    count = samples if samples is not None else settings.samples
    names = t.variables()
    for k in range(count):
        sub = {v: random_subspace(rng, lattice.field, dim) for v in names}
        value = evaluate(t, sub, lattice)
        if value != lattice.top:
            emit(
                {
                    "term": to_text(t),
                    "mode": "sampled",
                    "holds": False,
                    "count": k + 1,
                    "counterexample": {v: encode_subspace(x) for v, x in sub.items()},
                    "value": encode_subspace(value),
                },
                False,
            )
    emit({"term": to_text(t), "mode": "sampled", "holds": True, "count": count})


@main.command("refute")
@click.option("--dim", "-d", type=int, help="Ambient dimension d >= 2")
@click.option(
    "--factor",
    "factors",
    multiple=True,
    type=int,
    help="Dimension m of a factor L(Q^m) of a product lattice; repeat for each factor",
)
@click.option("--testset", required=True, type=click.Path(exists=True), help="Test set JSON")
@click.option("--budget", type=int, help="Substitution budget")
@click.option("--workers", type=int, help="Processes for the exhaustive check")
@handle_errors
def refute_command(dim, factors, testset, budget, workers):
    """Show that a finite test set is not universal for L(Q^dim) or a product."""
    settings = _settings()
    elements = decode_testset(load_json(testset))
    budget = budget or settings.budget
    workers = workers or settings.workers
    if factors:
        cert = refute_product_testset(elements, factors, budget=budget, workers=workers)
    elif dim is not None:
        cert = refute_testset(elements, dim, budget=budget, workers=workers)
    else:
        raise ValueError("Give --dim, or --factor once per factor of a product")
    emit(encode_certificate(cert), False)


@main.command("verify-cert")
@click.option("--cert", "cert_path", required=True, type=click.Path(exists=True))
@click.option("--testset", required=True, type=click.Path(exists=True), help="Test set JSON")
@handle_errors
def verify_cert_command(cert_path, testset):
    """Re-check a refutation certificate against its test set."""
    settings = _settings()
    check = verify_certificate(
        decode_certificate(load_json(cert_path)),
        decode_testset(load_json(testset)),
        budget=settings.budget,
        workers=settings.workers,
    )
    emit({"valid": check.valid, "problems": check.problems}, check.valid)


@main.group("gen-term")
def gen_term():
    """Generate derived terms."""


@gen_term.command("tdn")
@click.option("--d", "d", required=True, type=int, help="Frame order d >= 2")
@click.option("--n", "n", required=True, type=int, help="Number of x-variables n >= 2")
@handle_errors
def gen_tdn(d, n):
    """The witness term for frames of order d and n points."""
    t = tdn_term(d, n)
    emit({"term": to_text(t), "variables": tdn_variables(d, n), "size": t.size()})


@main.group("frame")
def frame_group():
    """Frame construction and checks."""


@frame_group.command("canonical")
@click.option("--d", "d", required=True, type=int, help="Frame order d >= 2")
@field_option
@handle_errors
def frame_canonical(d, field_tag):
    """The canonical d-frame of F^d."""
    emit(encode_frame(canonical_frame(d, Field(field_tag))))


@frame_group.command("verify")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Frame JSON")
@handle_errors
def frame_verify(in_path):
    """Check the frame laws."""
    report = verify_frame(decode_frame(load_json(in_path)))
    emit(
        {"frame": report.valid, "trivial": report.trivial, "violations": report.violations},
        report.valid,
    )


@frame_group.command("normalize")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Frame JSON")
@handle_errors
def frame_normalize(in_path):
    """Replace a non-frame by the trivial frame at the join of its components."""
    frame = decode_frame(load_json(in_path))
    normalized = normalize_frame(frame.d, frame.components())
    emit({"changed": normalized != frame, "frame": encode_frame(normalized)})


@frame_group.command("atoms")
@click.option("--d", "d", type=int, help="Use the canonical d-frame")
@click.option("--in", "in_path", type=click.Path(exists=True), help="Frame JSON")
@click.option("--n", "n", required=True, type=int, help="Number of atoms")
@handle_errors
def frame_atoms(d, in_path, n):
    """n distinct complements of a1 on the line a0 | a1."""
    if in_path:
        frame = decode_frame(load_json(in_path))
    elif d is not None:
        frame = canonical_frame(d)
    else:
        raise ValueError("Give --d or --in")
    emit({"atoms": [encode_subspace(x) for x in line_atoms(frame, n)]})


@main.group("limit")
def limit_group():
    """The dyadic limit of subspace lattices."""


@limit_group.command("double")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Element JSON")
@handle_errors
def limit_double(in_path):
    """Embed an element into the next level."""
    emit(encode_limit(double(decode_limit(load_json(in_path)))))


@limit_group.command("dim")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Element JSON")
@handle_errors
def limit_dim(in_path):
    """Normalized dimension."""
    emit(encode_delta(decode_limit(load_json(in_path))))


@limit_group.command("metric")
@click.option("--x", "x_path", required=True, type=click.Path(exists=True))
@click.option("--y", "y_path", required=True, type=click.Path(exists=True))
@handle_errors
def limit_metric(x_path, y_path):
    """Distance delta(x | y) - delta(x & y)."""
    value = metric(decode_limit(load_json(x_path)), decode_limit(load_json(y_path)))
    emit({"metric": str(value)})


@limit_group.command("enumerate")
@click.option("--level", "-n", required=True, type=int, help="Level n")
@click.option("--samples", type=int, help="Seeded random elements after the coordinate ones")
@handle_errors
def limit_enumerate(level, samples):
    """Deterministic prefix of the test set at one level."""
    settings = _settings()
    count = samples if samples is not None else settings.enumerate_samples
    elements = [
        {**encode_limit(x), "delta": encode_delta(x)}
        for x in testset_enumerate(
            level, samples=count, seed=settings.seed, max_level=settings.max_level
        )
    ]
    emit({"level": level, "count": len(elements), "elements": elements})


@limit_group.command("realify")
@click.option(
    "--in", "in_path", required=True, type=click.Path(exists=True), help="Subspace of Q(i)^k"
)
@handle_errors
def limit_realify(in_path):
    """Send a subspace of Q(i)^k into L(Q^2k).

    ``canonicalized`` reports whether the input basis was not already in rref.
    """
    u, changed = decode_subspace_checked(load_json(in_path))
    emit({**encode_subspace(realify(u)), "canonicalized": changed})


@main.group("ring")
def ring_group():
    """Matrix *-rings and their projection lattices."""


def _matrix(path: str) -> Matrix:
    return decode_matrix(load_json(path))


def _projection(path: str) -> ProjMatrix:
    return ProjMatrix(_matrix(path))


@ring_group.command("mp")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Matrix JSON")
@handle_errors
def ring_mp(in_path):
    """Moore-Penrose pseudo-inverse."""
    emit({"pinv": encode_matrix(mp_inverse(_matrix(in_path)))})


@ring_group.command("meet")
@click.option("--e", "e_path", required=True, type=click.Path(exists=True))
@click.option("--f", "f_path", required=True, type=click.Path(exists=True))
@handle_errors
def ring_meet(e_path, f_path):
    """Meet of two projections."""
    emit({"projection": encode_matrix(proj_meet(_projection(e_path), _projection(f_path)).p)})


@ring_group.command("join")
@click.option("--e", "e_path", required=True, type=click.Path(exists=True))
@click.option("--f", "f_path", required=True, type=click.Path(exists=True))
@handle_errors
def ring_join(e_path, f_path):
    """Join of two projections."""
    emit({"projection": encode_matrix(proj_join(_projection(e_path), _projection(f_path)).p)})


@ring_group.command("ortho")
@click.option("--e", "e_path", required=True, type=click.Path(exists=True))
@handle_errors
def ring_ortho(e_path):
    """Orthocomplement 1 - e of a projection."""
    emit({"projection": encode_matrix(proj_ortho(_projection(e_path)).p)})


@ring_group.command("to-subspace")
@click.option("--e", "e_path", required=True, type=click.Path(exists=True))
@handle_errors
def ring_to_subspace(e_path):
    """Column space of a projection."""
    emit(encode_subspace(proj_to_subspace(_projection(e_path))))


@ring_group.command("double")
@click.option("--in", "in_path", required=True, type=click.Path(exists=True), help="Matrix JSON")
@handle_errors
def ring_double(in_path):
    """Block-diagonal doubling of a square matrix."""
    emit({"matrix": encode_matrix(block_double(_matrix(in_path)))})


@main.command("axioms")
@click.option("--suite", required=True, type=click.Choice(sorted(SUITES)), help="Suite to run")
@click.option("--seed", type=int, help="Suite seed (default: global --seed)")
@click.option("--samples", type=int, help="Samples per configuration")
@handle_errors
def axioms_command(suite, seed, samples):
    """Run a seeded randomized axiom suite."""
    settings = _settings()
    report = run_suite(
        suite,
        samples=samples if samples is not None else settings.samples,
        seed=seed if seed is not None else settings.seed,
    )
    emit(
        {
            "suite": report.suite,
            "seed": report.seed,
            "samples": report.samples,
            "checks": report.checks,
            "passed": report.passed,
            "failures": report.failures[:20],
            "elapsed": round(report.elapsed, 3),
        },
        report.passed,
    )


if __name__ == "__main__":
    main()
