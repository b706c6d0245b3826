"""Command-line interface.

    hgff relations list
    hgff eval --params "1/2,1/2;1,1" --x -1 --q 13 --backend both
    hgff verify --filter 'new:*' --pmin 5 --pmax 199 --jobs 4 --out report.json
    hgff data fetch --label 27.3.b.b --endpoint URL
"""

from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import click

from .errors import HgffError


@click.group()
def main():
    """Finite-field hypergeometric functions and their modular-form relations."""


@main.group()
def relations():
    """Inspect the relation registry."""


@relations.command("list")
def relations_list():
    from .relations import registry

    for spec in registry():
        cond = spec.prime_condition.describe()
        click.echo(
            f"{spec.id:18s} [{spec.status:11s}] ({spec.backend:7s}) "
            f"p <= {spec.pmax_default:<4d} {cond:26s} {spec.description}"
        )


def _parse_label_list(text: str) -> list[Fraction]:
    return [Fraction(tok.strip()) for tok in text.split(",") if tok.strip()]


@main.command("eval")
@click.option("--params", "params_text", required=True, help="upper;lower rational labels, e.g. '1/2,1/2;1,1'")
@click.option("--x", "x_text", required=True, help="argument, an integer or fraction evaluated in F_q")
@click.option("--q", "q_value", required=True, type=int, help="prime power p^n with n <= 3")
@click.option("--backend", type=click.Choice(["complex", "padic", "both"]), default="complex")
@click.option("--precision", type=int, default=128, help="working precision in bits (complex backend)")
@click.option("--padic-digits", type=int, default=0, help="p-adic precision exponent k (0 = automatic)")
def eval_cmd(params_text, x_text, q_value, backend, precision, padic_digits):
    """Evaluate one hypergeometric value on the requested backend(s)."""
    from .charsums import gauss_table
    from .fields import factorize, make_field
    from .hypff import eval_F, params_from_labels
    from .padic import GParams, eval_G, precision_for_weight

    try:
        upper_text, lower_text = params_text.split(";")
        upper = _parse_label_list(upper_text)
        lower = _parse_label_list(lower_text)
        x = Fraction(x_text)
        fac = factorize(q_value)
        if len(fac) != 1:
            raise click.UsageError(f"q = {q_value} is not a prime power")
        (p, n), = fac.items()
        if n > 3:
            raise click.UsageError("extension degree capped at 3")
        if backend in ("complex", "both"):
            fld = make_field(p, n)
            params = params_from_labels(
                fld, upper, lower, fld.element_from_rational(x.numerator, x.denominator)
            )
            val = eval_F(params, gauss_table(fld, precision))
            click.echo(f"complex: {val!r}")
        if backend in ("padic", "both"):
            if n != 1:
                raise click.UsageError("p-adic backend needs q = p")
            k = padic_digits or precision_for_weight(p, 2 * len(upper) - 2)
            # the complex argument x corresponds to 1/x on the p-adic side
            res = eval_G(p, GParams(tuple(upper), tuple(lower), 1 / x), k)
            click.echo(f"padic:   {res.value} (mod {p}^{k})")
    except HgffError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}")


@main.command()
@click.option("--filter", "id_filter", default="*", help="relation id glob, e.g. 'rv:*'")
@click.option("--pmin", type=int, default=3)
@click.option("--pmax", type=int, default=199)
@click.option("--jobs", type=int, default=1)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="write the JSON report here")
@click.option("--strict-conjectures", is_flag=True, help="conjectural failures also fail the run")
@click.option("--timing", is_flag=True, help="include timings in the JSON (breaks byte-determinism)")
@click.option("--data-dir", type=click.Path(file_okay=False), default=None, help="newform data directory")
@click.option("--endpoint", default=None, help="fetch missing labels from this endpoint first")
def verify(id_filter, pmin, pmax, jobs, out, strict_conjectures, timing, data_dir, endpoint):
    """Check relations over a prime range and report per-row outcomes."""
    from .engine import EngineOptions, run_suite

    opts = EngineOptions(data_dir=Path(data_dir) if data_dir else None)
    if endpoint:
        _prefetch(id_filter, endpoint, opts)
    code, payload = run_suite(
        id_filter=id_filter,
        pmin=pmin,
        pmax=pmax,
        jobs=jobs,
        out=out,
        strict_conjectures=strict_conjectures,
        include_timing=timing,
        opts=opts,
    )
    counts = payload["counts"]
    for row in payload["results"]:
        if row["outcome"] != "exact":
            click.echo(
                f"{row['relation']:18s} p={row['p']:<4d} {row['outcome']:10s} {row['detail']}"
            )
    click.echo(
        f"summary: {counts['exact']} exact, {counts['up_to_sign']} up-to-sign, "
        f"{counts['fail']} fail, {counts['skipped']} skipped"
    )
    if out:
        click.echo(f"report written to {out}")
    sys.exit(code)


def _prefetch(id_filter, endpoint, opts):
    import fnmatch

    from .errors import FetchError, LabelNotFound
    from .newforms import fetch_newform, load_label
    from .relations import registry

    for spec in registry():
        if not fnmatch.fnmatch(spec.id, id_filter):
            continue
        if spec.oracle and spec.oracle.kind == "data":
            try:
                load_label(spec.oracle.label, opts.data_dir)
            except LabelNotFound:
                try:
                    fetch_newform(spec.oracle.label, endpoint, opts.data_dir)
                    click.echo(f"fetched {spec.oracle.label}")
                except (FetchError, LabelNotFound) as exc:
                    click.echo(f"could not fetch {spec.oracle.label}: {exc}", err=True)


@main.group()
def data():
    """Newform data files."""


@data.command()
@click.option("--label", required=True)
@click.option("--endpoint", required=True, help="LMFDB-compatible endpoint serving <label>.json")
@click.option("--data-dir", type=click.Path(file_okay=False), default=None)
def fetch(label, endpoint, data_dir):
    """Fetch one newform record and store it in the data directory."""
    from .newforms import fetch_newform

    try:
        path = fetch_newform(label, endpoint, Path(data_dir) if data_dir else None)
    except HgffError as exc:
        raise click.ClickException(f"{type(exc).__name__}: {exc}")
    click.echo(f"wrote {path}")


@data.command("list")
@click.option("--data-dir", type=click.Path(file_okay=False), default=None)
def data_list(data_dir):
    """Show which labels required by the registry are present."""
    from .newforms import data_dir as default_dir
    from .relations import registry

    d = Path(data_dir) if data_dir else default_dir()
    labels = sorted(
        {s.oracle.label for s in registry() if s.oracle and s.oracle.kind == "data"}
    )
    for label in labels:
        status = "present" if (d / f"{label}.json").exists() else "MISSING"
        click.echo(f"{label:14s} {status}")


if __name__ == "__main__":
    main()
