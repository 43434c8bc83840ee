"""Command-line front end.

Exit codes: 0 success (and passing checks), 1 validation failure or a failed
check, 2 unexpected runtime error.  All randomness flows from --seed.
"""
from __future__ import annotations

import csv
import functools
import sys

import click
import numpy as np

from bppsim import dominance, harness, ising, payments, sst_models, strategies, uniqueness


def _run(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            fn(*args, **kwargs)
        except click.ClickException:
            raise
        except (ValueError, OSError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
        except Exception as exc:  # noqa: BLE001
            click.echo(f"runtime error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _write_rows(output, header, rows):
    out = open(output, "w", newline="") if output else sys.stdout
    try:
        w = csv.writer(out)
        w.writerow(header)
        for row in rows:
            w.writerow(row)
    finally:
        if output:
            out.close()


@click.group()
@click.option("--seed", default=0, show_default=True, help="Master random seed.")
@click.option("--trials", default=100, show_default=True, help="Trials per agent.")
@click.option("--output", default=None, type=click.Path(), help="Output CSV path (default stdout).")
@click.option("--format", "fmt", default="csv", type=click.Choice(["csv"]), show_default=True)
@click.pass_context
def main(ctx, seed, trials, output, fmt):
    """Bonus-penalty peer prediction toolkit."""
    ctx.obj = {"seed": seed, "trials": trials, "output": output, "format": fmt}


@main.command()
@click.option("--config", required=True, type=click.Path(exists=True), help="key=value model file.")
@click.pass_context
@_run
def model(ctx, config):
    """Load a model fixture and report its a-priori-similarity check."""
    m = sst_models.load_model_config(config)
    click.echo(f"model: {type(m).__name__} n_items={m.n_items}")
    rng = np.random.default_rng(ctx.obj["seed"])
    bad = sst_models.check_apriori_similar(m, rng=rng)
    if bad is not None:
        click.echo(f"a-priori similarity FAILED at pair {bad[0]}, residual {bad[1]}")
        sys.exit(1)
    click.echo("a-priori similar: ok")


@main.command("check-sst")
@click.option("--config", required=True, type=click.Path(exists=True))
@click.option("--weak", is_flag=True, help="Check weak instead of strong transitivity.")
@click.pass_context
@_run
def check_sst(ctx, config, weak):
    """Check per-theta (strong) stochastic transitivity on a sampled theta."""
    m = sst_models.load_model_config(config)
    rng = np.random.default_rng(ctx.obj["seed"])
    theta = sst_models.sample_theta(m, rng)
    q = sst_models.pairwise_matrix(m, theta)
    witness = sst_models.check_weak_st(q) if weak else sst_models.check_sst(q)
    if witness is not None:
        click.echo(f"violation at triple {witness}")
        sys.exit(1)
    click.echo("transitivity: ok")


@main.command("check-ud")
@click.option("--triple", required=True,
              help="8 comma-separated probabilities, lexicographic (s_i,s_j,s_k), -1 first.")
@_run
def check_ud(triple):
    """Uniform-dominance check for a serialized triple distribution."""
    P = dominance.TripleDistribution.deserialize(triple)
    rep = dominance.is_uniformly_dominant(P)
    click.echo(f"delta_plus={rep.delta_plus:.12g} delta_minus={rep.delta_minus:.12g}")
    if not rep.dominant:
        click.echo("not uniformly dominant")
        sys.exit(1)
    click.echo("uniformly dominant")


@main.command()
@click.option("--assignment", "assignment_path", required=True, type=click.Path(exists=True),
              help="CSV agent_id,item_u,item_v.")
@click.option("--reports", "reports_path", required=True, type=click.Path(exists=True),
              help="CSV agent_id,report with report in {-1,1} (or {0,1}).")
@click.pass_context
@_run
def pay(ctx, assignment_path, reports_path):
    """Pay every agent under the comparison mechanism's peer selection."""
    assignment = payments.load_assignment_csv(assignment_path)
    reports = {}
    with open(reports_path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#"):
                continue
            if len(row) != 2:
                raise ValueError(f"line {line_no}: expected agent_id,report")
            r = int(row[1])
            reports[int(row[0])] = -1 if r == 0 else r
    bad = payments.check_admissible(assignment.pair_set)
    if bad is not None:
        raise ValueError(f"assignment not admissible: pair {bad} lacks a pivot")
    rng = np.random.default_rng(ctx.obj["seed"])
    selection = {
        i: [payments.select_peers_comparison(assignment, i, rng)]
        for i in assignment.entries
    }
    paid = payments.pay_all(reports, selection)
    rows = [(a, format(paid[a], ".12g")) for a in sorted(paid)]
    _write_rows(ctx.obj["output"], ["agent_id", "payment"], rows)


@main.command()
@click.option("--triple", required=True, help="Serialized triple distribution.")
@click.option("--grid", default=101, show_default=True, help="Sweep resolution per axis.")
@click.pass_context
@_run
def equilibria(ctx, triple, grid):
    """Sweep symmetric strategies and classify the equilibria found."""
    P = dominance.TripleDistribution.deserialize(triple)
    report = strategies.classify_symmetric_equilibria(P, grid_resolution=grid)
    rows = [
        (format(r[0], ".10g"), format(r[1], ".10g"), int(r[2]), r[3], format(r[4], ".12g"))
        for r in report.rows
    ]
    _write_rows(ctx.obj["output"],
                ["sigma_11", "sigma_m11", "is_eq", "classification", "expected_payment"],
                rows)
    click.echo(f"equilibrium classes: {sorted(report.classes_found())}", err=True)


@main.command("ising")
@click.option("--edges", "edges_path", required=True, type=click.Path(exists=True))
@click.option("--beta", required=True, type=float, help="Uniform coupling.")
@click.option("--alpha", default=0.0, show_default=True, type=float, help="Uniform bias.")
@click.option("--i", "node_i", type=int, default=None, help="Paid node for a dominance check.")
@click.option("--j", "node_j", type=int, default=None, help="Friend node.")
@click.option("--k", "node_k", type=int, default=None, help="Non-friend node.")
@_run
def ising_cmd(edges_path, beta, alpha, node_i, node_j, node_k):
    """Degree/coupling condition and, optionally, an exact dominance check."""
    g = ising.load_graph_csv(edges_path)
    d = g.max_degree
    holds, lhs, rhs = ising.degree_coupling_condition(beta, beta, d)
    click.echo(f"max_degree={d} condition_lhs={lhs:.6g} condition_rhs={rhs:.6g} holds={holds}")
    if node_i is None:
        sys.exit(0 if holds else 1)
    m = ising.IsingModel.uniform(g, beta, alpha)
    rep = ising.uniform_dominance_network(m, node_i, node_j, node_k)
    click.echo(f"delta_plus={rep.delta_plus:.12g} delta_minus={rep.delta_minus:.12g} "
               f"dominant={rep.dominant}")
    sys.exit(0 if rep.dominant else 1)


@main.group("uniqueness")
def uniqueness_group():
    """Payment-function characterization tools."""


@uniqueness_group.command("audit")
@click.option("--payment", "payment_path", required=True, type=click.Path(exists=True),
              help="File holding 8 comma-separated reals, lexicographic (s_i,s_j,s_k).")
@click.pass_context
@_run
def uniqueness_audit(ctx, payment_path):
    """Certify a payment as affine bonus-penalty or exhibit a counterexample."""
    with open(payment_path) as f:
        u = uniqueness.payment_table([float(x) for x in f.read().strip().split(",")])
    rng = np.random.default_rng(ctx.obj["seed"])
    verdict, detail = uniqueness.uniqueness_search(u, rng=rng)
    if verdict == "certificate":
        lam, mu = detail
        click.echo(f"certificate: lambda={lam:.12g} mu={list(np.ravel(mu))}")
        sys.exit(0)
    if verdict == "counterexample":
        click.echo(f"counterexample triple: {detail.serialize()}")
        sys.exit(1)
    click.echo("inconclusive")
    sys.exit(1)


@main.group()
def experiment():
    """Dataset-level payment experiments."""


def _emit_payments(ctx, setting, pay_vec, shift):
    rows = [
        (i, setting, format(p + shift, ".12g"))
        for i, p in enumerate(pay_vec)
        if not np.isnan(p)
    ]
    _write_rows(ctx.obj["output"], ["agent_id", "setting", "payment"], rows)


@experiment.command()
@click.option("--rankings", "rankings_path", required=True, type=click.Path(exists=True))
@click.option("--setting", default="truth", type=click.Choice(harness.SETTINGS), show_default=True)
@click.option("--shift", default=0.0, show_default=True, type=float,
              help="Constant added to every payment (limited liability).")
@click.option("--debug", is_flag=True, help="Assert the transitivity-indicator identity per trial.")
@click.pass_context
@_run
def comparison(ctx, rankings_path, setting, shift, debug):
    """Comparison-mechanism experiment on a ranking dataset."""
    ds = harness.load_rankings(rankings_path)
    vec = harness.experiment_comparison(ds, trials=ctx.obj["trials"], setting=setting,
                                        master_seed=ctx.obj["seed"], debug=debug)
    _emit_payments(ctx, setting, vec, shift)
    stats = harness.summarize(vec + shift)
    click.echo(f"mean={stats['mean']:.6g} fraction_positive={stats['fraction_positive']:.4g}",
               err=True)


@experiment.command()
@click.option("--edges", "edges_path", required=True, type=click.Path(exists=True))
@click.option("--labels", "labels_path", required=True, type=click.Path(exists=True))
@click.option("--setting", default="truth", type=click.Choice(harness.SETTINGS), show_default=True)
@click.option("--prior", default=None, type=float,
              help="Uninformed-report prior; default: empirical +1 fraction.")
@click.option("--shift", default=0.0, show_default=True, type=float)
@click.pass_context
@_run
def network(ctx, edges_path, labels_path, setting, prior, shift):
    """Network-mechanism experiment on a labeled social graph."""
    ds = harness.load_network(edges_path, labels_path)
    vec = harness.experiment_network(ds, trials=ctx.obj["trials"], setting=setting,
                                    master_seed=ctx.obj["seed"], prior=prior)
    _emit_payments(ctx, setting, vec, shift)
    stats = harness.summarize(vec + shift)
    click.echo(f"mean={stats['mean']:.6g} fraction_positive={stats['fraction_positive']:.4g}",
               err=True)


@main.command("ecdf")
@click.option("--payments", "payments_path", required=True, type=click.Path(exists=True),
              help="CSV agent_id,setting,payment (or agent_id,payment).")
@click.pass_context
@_run
def ecdf_cmd(ctx, payments_path):
    """Emit empirical-CDF points (value, cumulative fraction) as CSV."""
    vals = []
    with open(payments_path, newline="") as f:
        for line_no, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].startswith("#") or row[-1] == "payment":
                continue
            vals.append(float(row[-1]))
    v, fr = harness.ecdf(np.array(vals))
    rows = [(format(x, ".12g"), format(y, ".12g")) for x, y in zip(v, fr)]
    _write_rows(ctx.obj["output"], ["value", "cumulative_fraction"], rows)


if __name__ == "__main__":
    main()
