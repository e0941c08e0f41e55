"""Operator-facing command line: keygen, signing, verification, size
accounting, soundness simulation, and attack experiments.

Exit codes: 0 success/accept, 1 verification reject or attack found no
solution, 2 usage error or malformed input. Summary output is line-oriented
key=value on stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import os
import secrets
import random
import sys
from pathlib import Path

import click

from . import attacks
from .graphs import (
    Coloring,
    PartitionSpec,
    generate_planted,
    is_valid_coloring,
    read_graph_file,
    write_graph_file,
)
from .protocol import simulate_soundness
from .sigscheme import (
    MalformedInputError,
    SignaturePlain,
    deserialize_public_key,
    deserialize_secret_key,
    deserialize_signature,
    keygen,
    serialize_public_key,
    serialize_secret_key,
    serialize_signature,
    shared_savings,
    sign_merkle,
    sign_plain,
    signature_size_bits,
    verify_merkle,
    verify_plain,
)


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("EIDOLON_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise click.UsageError(f"EIDOLON_SEED must be an integer, got {env!r}")
    return secrets.randbits(64)


def _read_message(msg_file: str) -> bytes:
    if msg_file == "-":
        return sys.stdin.buffer.read()
    return Path(msg_file).read_bytes()


def _write_secret(path: str, data: bytes) -> None:
    p = Path(path)
    p.write_bytes(data)
    try:
        p.chmod(0o600)
    except OSError:
        pass


def _fmt_size(bits: float) -> str:
    size_bytes = bits / 8
    if size_bytes >= 1 << 20:
        return f"{size_bytes / (1 << 20):.2f} MiB"
    return f"{size_bytes / 1024:.2f} KiB"


@click.group()
def main():
    """Graph-coloring signature scheme and attack harness."""


@main.command("keygen")
@click.option("--n", type=int, required=True, help="Number of vertices.")
@click.option("--k", type=int, required=True, help="Number of colors (>= 3).")
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--seed", type=int, default=None, help="Deterministic seed (default: OS entropy or EIDOLON_SEED).")
@click.option("--out-pk", type=click.Path(), required=True)
@click.option("--out-sk", type=click.Path(), required=True)
def cmd_keygen(n, k, density, seed, out_pk, out_sk):
    """Generate a planted-instance key pair."""
    rng = random.Random(_resolve_seed(seed))
    try:
        pk, sk = keygen(n, k, density, rng)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    Path(out_pk).write_bytes(serialize_public_key(pk))
    _write_secret(out_sk, serialize_secret_key(sk))
    sizes = PartitionSpec.balanced(n, k).sizes
    click.echo(f"n={n}")
    click.echo(f"k={k}")
    click.echo(f"m={pk.graph.m}")
    click.echo(f"sizes={list(sizes)}")


def _load_pk(path: str):
    try:
        return deserialize_public_key(Path(path).read_bytes())
    except (MalformedInputError, OSError) as exc:
        click.echo(f"error: cannot load public key: {exc}", err=True)
        sys.exit(2)


@main.command("sign")
@click.option("--pk", "pk_path", type=click.Path(exists=True), required=True)
@click.option("--sk", "sk_path", type=click.Path(exists=True), required=True)
@click.option("--msg-file", required=True, help="Message file, or '-' for stdin.")
@click.option("--t", type=int, required=True, help="Number of Fiat-Shamir rounds.")
@click.option("--variant", type=click.Choice(["plain", "merkle", "merkle-shared"]), default="merkle", show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), required=True)
def cmd_sign(pk_path, sk_path, msg_file, t, variant, seed, out):
    """Sign a message."""
    pk = _load_pk(pk_path)
    try:
        sk = deserialize_secret_key(Path(sk_path).read_bytes())
    except MalformedInputError as exc:
        click.echo(f"error: cannot load secret key: {exc}", err=True)
        sys.exit(2)
    message = _read_message(msg_file)
    rng = random.Random(_resolve_seed(seed))
    if t < 1:
        raise click.UsageError(f"--t must be >= 1, got {t}")
    if variant == "plain":
        sig = sign_plain(pk, sk, message, t, rng)
    else:
        sig = sign_merkle(pk, sk, message, t, rng, shared_paths=(variant == "merkle-shared"))
    blob = serialize_signature(sig, pk)
    Path(out).write_bytes(blob)
    click.echo(f"variant={variant}")
    click.echo(f"t={t}")
    click.echo(f"size_bytes={len(blob)}")
    m = pk.graph.m
    click.echo(f"soundness_bound={(1 - 1 / m) ** t:.3e}")
    if variant == "merkle-shared":
        suffix, with_sib = shared_savings(sig, pk.graph.n)
        click.echo(f"shared_per_round_suffix={suffix:.4f}")
        click.echo(f"shared_per_round_with_sibling_levels={with_sib:.4f}")


@main.command("verify")
@click.option("--pk", "pk_path", type=click.Path(exists=True), required=True)
@click.option("--msg-file", required=True)
@click.option("--sig", "sig_path", type=click.Path(exists=True), required=True)
def cmd_verify(pk_path, msg_file, sig_path):
    """Verify a signature; exits 0 on accept, 1 on reject, 2 on malformed input."""
    pk = _load_pk(pk_path)
    message = _read_message(msg_file)
    try:
        sig = deserialize_signature(Path(sig_path).read_bytes(), pk, message)
    except MalformedInputError as exc:
        click.echo(f"error: malformed signature: {exc}", err=True)
        sys.exit(2)
    if isinstance(sig, SignaturePlain):
        result = verify_plain(pk, message, sig)
    else:
        result = verify_merkle(pk, message, sig)
    if result.ok:
        click.echo("accept")
        sys.exit(0)
    where = "" if result.round_index is None else f" (round {result.round_index})"
    click.echo(f"reject: {result.reason}{where}", err=True)
    sys.exit(1)


@main.command("sizes")
@click.option("--n", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--variant", type=click.Choice(["plain", "merkle", "merkle-shared", "all"]), default="all", show_default=True)
@click.option("--s-bar", type=float, default=None, help="Average shared sibling hashes per round (enables the shared row).")
def cmd_sizes(n, t, variant, s_bar):
    """Analytic signature sizes for the given parameters."""
    rows = []
    wanted = ["plain", "merkle", "merkle-shared"] if variant == "all" else [variant]
    for var in wanted:
        if var == "merkle-shared":
            if s_bar is None:
                continue
            bits = signature_size_bits(n, t, var, s_bar=s_bar)
        else:
            bits = signature_size_bits(n, t, var)
        rows.append((var, bits))
    def fmt(x: float) -> str:
        return str(int(x)) if float(x).is_integer() else f"{x:.1f}"

    for var, bits in rows:
        click.echo(
            f"{var:14s} bits={fmt(bits):>12s} bytes={fmt(bits / 8):>11s} ({_fmt_size(bits)})"
        )


@main.command("soundness")
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--t-bad", type=int, default=1, show_default=True, help="Minimum number of conflicting edges in the cheating coloring.")
@click.option("--rounds", type=int, required=True)
@click.option("--trials", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=None)
def cmd_soundness(n, k, density, t_bad, rounds, trials, seed):
    """Empirical vs analytic escape rate for a cheating prover."""
    rng = random.Random(_resolve_seed(seed))
    g, planted = generate_planted(PartitionSpec.balanced(n, k), density, rng)
    if g.m == 0:
        raise click.UsageError("instance came out edgeless; raise n or density")
    if t_bad < 1 or t_bad > g.m:
        raise click.UsageError(f"--t-bad must be in 1..{g.m}")
    # perturb the planted coloring until enough edges conflict
    colors = list(planted.colors)
    conflicts = 0
    while conflicts < t_bad:
        v = rng.randrange(n)
        colors[v] = rng.randrange(k)
        bad = Coloring(colors=tuple(colors), k=k)
        _, conflict_edges = is_valid_coloring(g, bad)
        conflicts = len(conflict_edges)
    bad = Coloring(colors=tuple(colors), k=k)
    rate = simulate_soundness(g, bad, rounds, trials, rng)
    analytic = (1 - conflicts / g.m) ** rounds
    click.echo(f"m={g.m}")
    click.echo(f"conflicts={conflicts}")
    click.echo(f"rounds={rounds}")
    click.echo(f"trials={trials}")
    click.echo(f"empirical_escape={rate:.6g}")
    click.echo(f"analytic_escape={analytic:.6g}")


@main.command("attack")
@click.option("--graph", "graph_path", type=click.Path(exists=True), default=None, help="Graph in the shared text format.")
@click.option("--pk", "pk_path", type=click.Path(exists=True), default=None)
@click.option("--solvers", default="dsatur,exact", show_default=True)
@click.option("--time-limit", type=float, default=60.0, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(), default=None)
def cmd_attack(graph_path, pk_path, solvers, time_limit, csv_path):
    """Attack one instance; exits 1 if no solver recovered a small coloring."""
    if (graph_path is None) == (pk_path is None):
        raise click.UsageError("give exactly one of --graph or --pk")
    if graph_path is not None:
        g, k = read_graph_file(graph_path)
    else:
        pk = _load_pk(pk_path)
        g, k = pk.graph, pk.k
    reports = []
    for solver in [s.strip() for s in solvers.split(",") if s.strip()]:
        report = attacks.attack_graph(g, k, solver, time_limit)
        reports.append(report)
        click.echo(
            f"solver={report.solver} colors_used={report.colors_used} "
            f"recovered={int(report.recovered)} wall_ms={report.wall_ms:.1f} "
            f"timeout={int(report.timeout)}"
        )
    if csv_path:
        attacks.write_csv(reports, csv_path)
    sys.exit(0 if any(r.recovered for r in reports) else 1)


@main.command("experiment")
@click.option("--n-min", type=int, required=True)
@click.option("--n-max", type=int, required=True)
@click.option("--n-step", type=int, default=10, show_default=True)
@click.option("--trials", type=int, default=3, show_default=True)
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--solvers", default="dsatur,exact", show_default=True)
@click.option("--time-limit", type=float, default=60.0, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(), required=True)
def cmd_experiment(n_min, n_max, n_step, trials, density, solvers, time_limit, seed, jobs, csv_path):
    """Planted-recovery sweep over a range of instance sizes."""
    config = attacks.ExperimentConfig(
        n_values=tuple(range(n_min, n_max + 1, n_step)),
        density=density,
        trials=trials,
        solvers=tuple(s.strip() for s in solvers.split(",") if s.strip()),
        time_limit=time_limit,
        seed=_resolve_seed(seed),
        jobs=jobs,
    )
    reports = attacks.recovery_experiment(config)
    attacks.write_csv(reports, csv_path)
    click.echo(f"reports={len(reports)}")
    click.echo(f"csv={csv_path}")


@main.command("export-graph")
@click.option("--pk", "pk_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
def cmd_export_graph(pk_path, out):
    """Export the public graph in the shared text format."""
    pk = _load_pk(pk_path)
    write_graph_file(out, pk.graph, pk.k)
    click.echo(f"n={pk.graph.n}")
    click.echo(f"m={pk.graph.m}")
    click.echo(f"k={pk.k}")


if __name__ == "__main__":
    main()
