"""Command-line surface: classification with certificates, class bounds,
noise thresholds, quantum evaluation and optimization, catalog verification,
pure-state grid scans, and fixture export.

Exit codes: 0 member / success, 1 nonmember / failed check, 2 error.
Human-readable tables go to stdout; machine-readable artifacts are written
only to files named by flags.  Identical command line and seed give
byte-identical artifact files (reports embed the seed, never timestamps).
"""

import json
import os
import sys
from pathlib import Path

import click

from . import fixtures
from .behavior import load_behavior, save_behavior
from .inequalities import (CatalogMissing, expr_ordered_witness, expr_split,
                           expr_split_first, expr_split_second,
                           load_catalog, load_expression, save_expression,
                           verify_bound, verify_facet)
from .membership import CLASSES, classify, maximize
from .quantum import (QuantumScenario, born_behavior, ghz_state, load_angles,
                      optimize_threshold, save_angles, scan_pure_states,
                      scan_report_lines, seesaw_maximize, w_state)
from .rational import format_rational, is_rational

_BUILTIN_EXPRS = {
    "split": expr_split,
    "split-first": expr_split_first,
    "split-second": expr_split_second,
    "ordered-witness": expr_ordered_witness,
}
_STATES = {"ghz": ghz_state, "w": w_state}


def _fail(message):
    if isinstance(message, BaseException):
        message = message.args[0] if message.args else str(message)
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _fmt(value, digits=6):
    if is_rational(value):
        s = format_rational(value)
        return s if "/" not in s else f"{s} = {float(value):.{digits}f}"
    return f"{float(value):.{digits}f}"


def _write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _load_behavior_file(path):
    try:
        return load_behavior(path)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _fail(f"cannot read behavior file {path}: {exc}")


def _expression_options(func):
    func = click.option("--family", type=int, default=None,
                        help="Catalog family number (1-185).")(func)
    func = click.option("--ineq", "ineq_file",
                        type=click.Path(exists=False), default=None,
                        help="Expression file written by this package.")(func)
    func = click.option("--builtin", type=click.Choice(sorted(_BUILTIN_EXPRS)),
                        default=None, help="A built-in expression.")(func)
    return func


def _resolve_expression(family, ineq_file, builtin, default=None):
    chosen = sum(x is not None for x in (family, ineq_file, builtin))
    if chosen > 1:
        _fail("choose at most one of --family, --ineq, --builtin")
    if chosen == 0:
        if default is not None:
            return _BUILTIN_EXPRS[default]()
        _fail("an expression is required: --family N, --ineq FILE, "
              "or --builtin NAME")
    if family is not None:
        try:
            return load_catalog().family(family).expression
        except CatalogMissing as exc:
            _fail(exc)
    if ineq_file is not None:
        try:
            return load_expression(ineq_file)
        except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            _fail(f"cannot read expression file {ineq_file}: {exc}")
    return _BUILTIN_EXPRS[builtin]()


@click.group()
def main():
    """Locality-class analysis of three-party binary behaviors."""


@main.command("classify")
@click.argument("behavior_file", type=click.Path())
@click.option("--class", "tag", type=click.Choice(CLASSES), required=True,
              help="Locality class to test membership in.")
@click.option("--mode", type=click.Choice(["auto", "exact", "double"]),
              default="auto", show_default=True,
              help="auto keeps the file's arithmetic; exact snaps doubles "
                   "to rationals; double floats everything.")
@click.option("--certificate", "cert_file", type=click.Path(), default=None,
              help="Write the certificate (decomposition or separating "
                   "functional) to this JSON file.")
def cmd_classify(behavior_file, tag, mode, cert_file):
    """Decide class membership of a behavior file, with certificate."""
    b = _load_behavior_file(behavior_file)
    if mode == "exact":
        b = b.to_rational()
    elif mode == "double":
        b = b.to_double()
    try:
        result = classify(b, tag)
    except ValueError as exc:
        _fail(f"solver error: {exc}")
    verdict = "member" if result.member else "nonmember"
    click.echo(f"class      {tag}")
    click.echo(f"verdict    {verdict}")
    if result.threshold is not None:
        click.echo(f"t*         {_fmt(result.threshold)}")
    if cert_file:
        doc = {"input": os.path.basename(behavior_file), "class": tag,
               "member": result.member}
        if result.threshold is not None:
            doc["threshold"] = (format_rational(result.threshold)
                                if is_rational(result.threshold)
                                else float(result.threshold))
        if result.certificate is not None:
            doc["certificate"] = result.certificate.to_dict()
        if result.functional is not None:
            doc["functional"] = result.functional.to_dict()
        _write_json(cert_file, doc)
        click.echo(f"certificate written to {cert_file}")
    sys.exit(0 if result.member else 1)


@main.command("maximize")
@_expression_options
@click.option("--class", "tag", type=click.Choice(CLASSES), required=True)
@click.option("--full-hull", is_flag=True,
              help="For s2, maximize over the unrestricted hull instead of "
                   "its no-signalling slice.")
def cmd_maximize(family, ineq_file, builtin, tag, full_hull):
    """Maximum of an expression over a locality class (exact)."""
    expr = _resolve_expression(family, ineq_file, builtin)
    try:
        result = maximize(expr, tag, restrict_to_ns=not full_hull)
    except ValueError as exc:
        _fail(f"solver error: {exc}")
    click.echo(f"expression {expr.name}")
    click.echo(f"class      {tag}")
    click.echo(f"maximum    {_fmt(result.value)}")


@main.command("evaluate")
@click.argument("behavior_file", type=click.Path())
@_expression_options
def cmd_evaluate(behavior_file, family, ineq_file, builtin):
    """Value of an expression on a behavior file."""
    b = _load_behavior_file(behavior_file)
    expr = _resolve_expression(family, ineq_file, builtin)
    value = expr.evaluate(b)
    click.echo(f"expression {expr.name}")
    click.echo(f"value      {_fmt(value, digits=9)}")


@main.command("threshold")
@click.option("--state", type=click.Choice(sorted(_STATES)), required=True)
@click.option("--class", "tag", type=click.Choice(CLASSES), required=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="PRNG seed for measurement restarts.")
@click.option("--restarts", type=int, default=8, show_default=True)
@click.option("--catalog-starts", type=int, default=4, show_default=True,
              help="Measurement starts seeded from the best catalog "
                   "inequalities; 0 uses random starts only.")
@click.option("--angles-out", type=click.Path(), default=None,
              help="Write the optimal measurement angles to this file.")
def cmd_threshold(state, tag, seed, restarts, catalog_starts, angles_out):
    """White-noise visibility at which the state leaves a class."""
    try:
        result = optimize_threshold(state, tag, restarts=restarts, seed=seed,
                                    catalog_starts=catalog_starts)
    except ValueError as exc:
        _fail(f"solver error: {exc}")
    click.echo(f"state      {state}")
    click.echo(f"class      {tag}")
    click.echo(f"p          {result.p:.6f}")
    if angles_out:
        save_angles(result.observables, angles_out)
        click.echo(f"angles written to {angles_out}")


@main.command("quantum-eval")
@click.option("--state", type=click.Choice(sorted(_STATES)), required=True)
@click.option("--visibility", type=float, default=1.0, show_default=True,
              help="Mix the state with white noise: v*rho + (1-v)*I/8.")
@click.option("--angles", "angles_file", type=click.Path(), required=True,
              help="Measurement angles file (one JSON record per line).")
@_expression_options
@click.option("--behavior-out", type=click.Path(), default=None,
              help="Write the Born-rule behavior to this file.")
def cmd_quantum_eval(state, visibility, angles_file, family, ineq_file,
                     builtin, behavior_out):
    """Born-rule behavior of a state + angles, and an expression value."""
    expr = _resolve_expression(family, ineq_file, builtin)
    try:
        observables = load_angles(angles_file)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _fail(f"cannot read angles file {angles_file}: {exc}")
    qstate = _STATES[state]().with_white_noise(visibility)
    b = born_behavior(QuantumScenario(qstate, observables))
    value = expr.evaluate(b)
    click.echo(f"state      {state} (visibility {visibility:g})")
    click.echo(f"expression {expr.name}")
    click.echo(f"value      {_fmt(value, digits=9)}")
    if behavior_out:
        save_behavior(b, behavior_out)
        click.echo(f"behavior written to {behavior_out}")


@main.command("quantum-optimize")
@click.option("--state", type=click.Choice(sorted(_STATES)), required=True)
@_expression_options
@click.option("--restarts", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True,
              help="PRNG seed for measurement restarts.")
@click.option("--angles-out", type=click.Path(), default=None,
              help="Write the best measurement angles to this file.")
@click.option("--behavior-out", type=click.Path(), default=None,
              help="Write the optimized behavior to this file.")
def cmd_quantum_optimize(state, family, ineq_file, builtin, restarts, seed,
                         angles_out, behavior_out):
    """Seesaw-maximize an expression over measurements on a state."""
    expr = _resolve_expression(family, ineq_file, builtin)
    result = seesaw_maximize(expr, _STATES[state](), restarts=restarts,
                             seed=seed)
    click.echo(f"state      {state}")
    click.echo(f"expression {expr.name}")
    click.echo(f"value      {result.value:.9f}")
    click.echo(f"sweeps     {result.sweeps}")
    if angles_out:
        save_angles(result.observables, angles_out)
        click.echo(f"angles written to {angles_out}")
    if behavior_out:
        scen = QuantumScenario(_STATES[state](), result.observables)
        save_behavior(born_behavior(scen), behavior_out)
        click.echo(f"behavior written to {behavior_out}")


def _parse_families(spec, catalog):
    if spec.strip().lower() == "all":
        return sorted(catalog)
    out = []
    for chunk in spec.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "-" in chunk:
            lo, hi = chunk.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    return out


@main.command("catalog-verify")
@click.option("--families", default="all", show_default=True,
              help="Family list like '1-20,99,185', or 'all'.")
@click.option("--classes", default="ns2,t2,s2", show_default=True,
              help="Comma-separated bound columns to recompute.")
@click.option("--facets", is_flag=True,
              help="Also verify each family is a facet of the two-group "
                   "no-signalling polytope.")
@click.option("--catalog", "catalog_path", type=click.Path(), default=None,
              help="Alternate catalog data file (defaults to the bundled "
                   "one).")
def cmd_catalog_verify(families, classes, facets, catalog_path):
    """Recompute declared catalog bounds (and optionally facet ranks)."""
    try:
        catalog = load_catalog(catalog_path)
    except CatalogMissing as exc:
        _fail(exc)
    try:
        fams = _parse_families(families, catalog)
    except ValueError:
        _fail(f"cannot parse family list {families!r}")
    tags = [t.strip() for t in classes.split(",") if t.strip()]
    for t in tags:
        if t not in ("ns2", "t2", "s2"):
            _fail(f"no declared bound column for class {t!r}")
    failures = 0
    for n in fams:
        cells = []
        for t in tags:
            try:
                chk = verify_bound(n, t, catalog_path)
            except CatalogMissing as exc:
                _fail(exc)
            mark = "OK" if chk.passed else f"FAIL({format_rational(chk.computed)})"
            failures += 0 if chk.passed else 1
            cells.append(f"{t}={format_rational(chk.declared)} {mark}")
        line = f"family {n:3d}  " + "  ".join(cells)
        if facets:
            fc = verify_facet(n, catalog_path)
            mark = "OK" if fc.passed else f"FAIL(rank {fc.affine_rank})"
            failures += 0 if fc.passed else 1
            line += f"  facet {mark}"
        click.echo(line)
    click.echo(f"{len(fams)} families checked, {failures} failures")
    sys.exit(0 if failures == 0 else 1)


@main.command("scan")
@click.option("--grid", type=int, default=4, show_default=True,
              help="Grid resolution per amplitude and phase (>= 2).")
@click.option("--seed", type=int, default=0, show_default=True,
              help="PRNG seed for seesaw restarts.")
@click.option("--restarts", type=int, default=10, show_default=True)
@click.option("--jobs", type=int, default=0, show_default="all cores",
              help="Worker processes; results are identical for any value, "
                   "use 1 to stay single-threaded.")
@_expression_options
@click.option("--out", "out_file", type=click.Path(), default=None,
              help="Write the full line-oriented report to this file.")
def cmd_scan(grid, seed, restarts, jobs, family, ineq_file, builtin,
             out_file):
    """Seesaw an expression on a grid of pure three-qubit states."""
    if grid < 2:
        raise click.UsageError("--grid must be at least 2")
    expr = _resolve_expression(family, ineq_file, builtin, default="split")
    if jobs <= 0:
        jobs = os.cpu_count() or 1
    report = scan_pure_states(resolution=grid, expr=expr, restarts=restarts,
                              seed=seed, jobs=jobs)
    click.echo(f"expression    {report.expression}")
    click.echo(f"bound         {report.bound:g}")
    click.echo(f"grid states   {len(report.entries)} "
               f"(skipped {len(report.skipped)} by guards)")
    click.echo(f"min violation {report.min_violation:.8f}")
    click.echo(f"non-violating {len(report.non_violating)}")
    for e in report.non_violating:
        lams = ",".join(f"{l:.6f}" for l in e.params.lams)
        click.echo(f"  lams={lams} phase={e.params.phase:.6f} "
                   f"value={e.value:.8f}")
    if out_file:
        lines = list(scan_report_lines(report))
        lines.insert(1, f"# seed={seed} restarts={restarts}")
        Path(out_file).write_text("\n".join(lines) + "\n")
        click.echo(f"report written to {out_file}")
    sys.exit(0 if not report.non_violating else 1)


@main.command("fixtures-export")
@click.option("--out-dir", type=click.Path(), default=".", show_default=True,
              help="Directory for the exported fixture files.")
def cmd_fixtures_export(out_dir):
    """Write the reference behaviors, angles, and expressions to files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model = fixtures.corr1_t2_model()
    scenario = fixtures.ghz_witness_scenario()
    written = []

    def _put(name, writer, *args):
        path = out / name
        writer(*args, path)
        written.append(path)

    _put("corr1.behavior.json", save_behavior, fixtures.corr1_target())
    _put("corr1_model_bob_first.behavior.json", save_behavior,
         model.behavior("B<C"))
    _put("corr1_model_charles_first.behavior.json", save_behavior,
         model.behavior("C<B"))
    _put("split_mixture.behavior.json", save_behavior, fixtures.s2_mixture())
    _put("ghz_witness_quantum.behavior.json", save_behavior,
         born_behavior(scenario))
    _put("ghz_witness_model.behavior.json", save_behavior,
         fixtures.ghz_witness_s2_model().behavior())
    _put("ghz_witness.angles.jsonl", save_angles, scenario.observables)
    _put("split.expr.json", save_expression, expr_split())
    _put("ordered_witness.expr.json", save_expression, expr_ordered_witness())
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
