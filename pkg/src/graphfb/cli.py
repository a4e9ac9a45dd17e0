"""Command-line front end: decompose, analyze, synthesize, verify, response, fixtures.

Exit codes: 0 on success, 1 when a verified property fails, 2 on usage or
parse errors.  Every command is deterministic given its inputs, seed, and
configuration.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import fixtures as fx
from .filterbank import (
    SeparableBank,
    channel_energy_report,
    stage_orthogonality_residuals,
    verify_commutation,
    verify_pr_conditions,
)
from .graph import (
    BipartiteDecomposition,
    Graph,
    greedy_coloring,
    harary_decompose,
    image_graph,
    is_bipartite,
    validate_decomposition,
)
from .io import (
    FormatError,
    format_float,
    load_decomposition,
    load_graph,
    load_signal,
    load_subband_tree,
    save_coloring,
    save_decomposition,
    save_graph,
    save_signal,
    save_spectrum,
    save_subband_tree,
    save_table,
)
from .kernels import (
    KernelSet,
    chebyshev_fit,
    ideal_kernel,
    meyer_kernel,
    qmf_companions,
)
from .spectral import (
    DEFAULT_DENSE_LIMIT,
    eigendecompose,
    normalized_laplacian,
    spectrum_symmetric_about_one,
    verify_spectral_folding,
)

FOLDING_TOL = 1e-8
SYMMETRY_TOL = 1e-8
PROJECTOR_TOL = 1e-8
PR_TOL = 1e-8
ORTHOGONALITY_TOL = 1e-8
COMMUTATION_TOL = 1e-10
PROJECTOR_SIZE_CAP = 128


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Resolved command-line options for one invocation."""

    command: str
    graph_path: Optional[str] = None
    signal_path: Optional[str] = None
    subbands_path: Optional[str] = None
    decomposition_dir: Optional[str] = None
    reference_path: Optional[str] = None
    kernel: str = "meyer"
    mode: str = "exact"
    order: Optional[int] = None
    dense_limit: int = DEFAULT_DENSE_LIMIT
    seed: int = 0
    out_dir: str = "."
    zero_channels: tuple[str, ...] = ()
    kind: Optional[str] = None
    image_kind: str = "rect"
    width: int = 64
    height: int = 64
    points: int = 1000
    name: Optional[str] = None
    n: Optional[int] = None

    @property
    def library_mode(self) -> str:
        return "polynomial" if self.mode == "poly" else "exact"

    def validate(self) -> None:
        if self.mode not in ("exact", "poly"):
            raise UsageError(f"unknown mode {self.mode!r}")
        if self.mode == "poly" and (self.order is None or self.order < 1):
            raise UsageError("polynomial mode requires --order of at least 1")
        if self.kernel not in ("meyer", "ideal"):
            raise UsageError(f"unknown kernel {self.kernel!r}")

    def check_dense(self, n_vertices: int) -> None:
        if self.mode == "exact" and n_vertices > self.dense_limit:
            raise UsageError(
                f"exact mode needs {n_vertices} <= dense limit {self.dense_limit}; "
                "raise --dense-limit or use --mode poly"
            )

    def kernel_set(self) -> KernelSet:
        base = meyer_kernel() if self.kernel == "meyer" else ideal_kernel()
        return qmf_companions(base)


def _derive_decomposition(graph: Graph) -> tuple[int, BipartiteDecomposition]:
    coloring = greedy_coloring(graph)
    return coloring.k, harary_decompose(graph, coloring)


def _out_path(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, name)


def _build_bank(cfg: RunConfig, graph: Graph, decomp: BipartiteDecomposition) -> SeparableBank:
    return SeparableBank(
        graph,
        decomp,
        cfg.kernel_set(),
        cfg.library_mode,
        cfg.order,
        cfg.dense_limit,
    )


def _poly_roundtrip_bound(cfg: RunConfig, n_stages: int) -> float:
    """Upper bound on the cascade round-trip relative error from kernel residuals."""
    base = meyer_kernel() if cfg.kernel == "meyer" else ideal_kernel()
    poly = chebyshev_fit(base, cfg.order)
    grid = np.linspace(0.0, 2.0, 4001)
    deviation = np.abs(poly(grid) ** 2 + poly(2.0 - grid) ** 2 - base.gain**2).max()
    return float((1.0 + deviation / base.gain**2) ** n_stages - 1.0)


def cmd_decompose(cfg: RunConfig) -> int:
    graph = load_graph(cfg.graph_path)
    k, decomp = _derive_decomposition(graph)
    written = save_decomposition(decomp, cfg.out_dir)
    print(f"colors {k}")
    print(f"stages {decomp.n_stages}")
    for i, stage in enumerate(decomp.stages, start=1):
        print(
            f"stage {i} edges {len(stage.edges)} "
            f"low {len(stage.partition.low)} high {len(stage.partition.high)}"
        )
    for path in written:
        print(f"written {path}")
    return 0


def cmd_analyze(cfg: RunConfig) -> int:
    graph = load_graph(cfg.graph_path)
    signal = load_signal(cfg.signal_path, graph)
    cfg.check_dense(graph.n_vertices)
    k, decomp = _derive_decomposition(graph)
    bank = _build_bank(cfg, graph, decomp)
    tree = bank.analyze(signal)
    subband_path = _out_path(cfg, "subbands.txt")
    save_subband_tree(tree, subband_path)
    print(f"colors {k}")
    print(f"stages {decomp.n_stages}")
    for channel in tree.channels:
        print(f"channel {channel.label or '-'} {len(channel.vertices)}")
    total = tree.total_coefficients()
    status = "ok" if total == graph.n_vertices else "VIOLATION"
    print(f"critical-sampling {total} of {graph.n_vertices} {status}")
    if cfg.mode == "poly":
        bound = _poly_roundtrip_bound(cfg, decomp.n_stages)
        print(f"predicted-roundtrip-bound {format_float(bound)}")
    print(f"written {subband_path}")
    return 0 if total == graph.n_vertices else 1


def cmd_synthesize(cfg: RunConfig) -> int:
    graph = load_graph(cfg.graph_path)
    cfg.check_dense(graph.n_vertices)
    tree = load_subband_tree(cfg.subbands_path)
    _, decomp = _derive_decomposition(graph)
    bank = _build_bank(cfg, graph, decomp)
    unknown = set(cfg.zero_channels) - set(tree.labels)
    if unknown:
        raise UsageError(f"unknown channel labels {sorted(unknown)}")
    working = tree.with_zeroed(cfg.zero_channels) if cfg.zero_channels else tree
    reconstruction = bank.synthesize(working)
    signal_path = _out_path(cfg, "reconstruction.signal")
    save_signal(reconstruction, signal_path)

    lines = []
    reference = None
    if cfg.reference_path:
        reference = load_signal(cfg.reference_path, graph)
        diff = reconstruction.values - reference.values
        ref_norm = float(np.linalg.norm(reference.values))
        rel = float(np.linalg.norm(diff)) / ref_norm if ref_norm > 0 else 0.0
        lines.append(("max-abs-error", float(np.abs(diff).max(initial=0.0))))
        lines.append(("relative-l2-error", rel))
    report = channel_energy_report(bank, working, reference or reconstruction)
    for label in report.labels:
        lines.append((f"energy-{label or '-'}", report.energies[label]))
    lines.append(("total-channel-energy", report.total_energy()))
    lines.append(("reconstruction-energy", float(np.sum(reconstruction.values**2))))
    report_path = _out_path(cfg, "reconstruction_report.txt")
    with open(report_path, "w", encoding="utf-8", newline="\n") as fh:
        for name, value in lines:
            fh.write(f"{name} {format_float(value)}\n")
    for name, value in lines:
        print(f"{name} {format_float(value)}")
    print(f"written {signal_path}")
    print(f"written {report_path}")
    return 0


def _verify_checks(cfg: RunConfig, graph: Graph) -> list[tuple[str, str, str]]:
    checks: list[tuple[str, str, str]] = []
    kernels = cfg.kernel_set()

    if cfg.decomposition_dir:
        decomp = load_decomposition(cfg.decomposition_dir)
    else:
        _, decomp = _derive_decomposition(graph)
    try:
        validate_decomposition(graph, decomp)
        checks.append(("decomposition-structure", "PASS", f"stages={decomp.n_stages}"))
    except ValueError as exc:
        checks.append(("decomposition-structure", "FAIL", str(exc)))
        return checks

    labels = [decomp.channel_label(v) for v in range(graph.n_vertices)]
    counts: dict[str, int] = {}
    for label in labels:
        counts[label] = counts.get(label, 0) + 1
    total = sum(counts.values())
    ok = total == graph.n_vertices
    checks.append(
        ("critical-sampling", "PASS" if ok else "FAIL", f"coefficients={total}")
    )

    spectrum = eigendecompose(normalized_laplacian(graph), cfg.dense_limit)
    partition = is_bipartite(graph)
    symmetric = spectrum_symmetric_about_one(spectrum, SYMMETRY_TOL)
    agree = (partition is not None) == symmetric
    checks.append(
        (
            "bipartite-spectrum-agreement",
            "PASS" if agree else "FAIL",
            f"bipartite={partition is not None} symmetric={symmetric}",
        )
    )
    if partition is None:
        checks.append(("spectral-folding", "SKIP", "not bipartite"))
    else:
        report = verify_spectral_folding(graph, partition, spectrum)
        status = "PASS" if report.max_residual < FOLDING_TOL else "FAIL"
        checks.append(("spectral-folding", status, format_float(report.max_residual)))

    if graph.n_vertices <= PROJECTOR_SIZE_CAP:
        worst = 0.0
        projectors = [spectrum.projector(g) for g in range(len(spectrum.groups))]
        for a, pa in enumerate(projectors):
            for b, pb in enumerate(projectors):
                target = pa if a == b else np.zeros_like(pa)
                worst = max(worst, float(np.linalg.norm(pa @ pb - target)))
        status = "PASS" if worst < PROJECTOR_TOL else "FAIL"
        checks.append(("projector-algebra", status, format_float(worst)))
    else:
        checks.append(("projector-algebra", "SKIP", "graph too large"))

    grid = np.concatenate([np.linspace(0.0, 2.0, 1001), spectrum.effective_eigenvalues])
    if cfg.mode == "poly":
        base = meyer_kernel() if cfg.kernel == "meyer" else ideal_kernel()
        poly = chebyshev_fit(base, cfg.order)
        poly_set = KernelSet(
            h0=_as_kernel(poly, base.gain),
            h1=_as_kernel(poly.mirrored(), base.gain),
            g0=_as_kernel(poly, base.gain),
            g1=_as_kernel(poly.mirrored(), base.gain),
        )
        report = verify_pr_conditions(poly_set, grid)
        status = "PASS" if report.aliasing_residual < PR_TOL else "FAIL"
        checks.append(("pr-aliasing", status, format_float(report.aliasing_residual)))
        checks.append(("pr-distortion", "SKIP", format_float(report.distortion_residual)))
        checks.append(("pr-orthogonality", "SKIP", format_float(report.orthogonality_residual)))
        checks.append(("orthogonality", "SKIP", "polynomial mode"))
    else:
        report = verify_pr_conditions(kernels, grid)
        checks.append(
            (
                "pr-aliasing",
                "PASS" if report.aliasing_residual < PR_TOL else "FAIL",
                format_float(report.aliasing_residual),
            )
        )
        checks.append(
            (
                "pr-distortion",
                "PASS" if report.distortion_residual < PR_TOL else "FAIL",
                format_float(report.distortion_residual),
            )
        )
        checks.append(
            (
                "pr-orthogonality",
                "PASS" if report.orthogonality_residual < PR_TOL else "FAIL",
                format_float(report.orthogonality_residual),
            )
        )
        bank = _build_bank(cfg, graph, decomp)
        residuals = stage_orthogonality_residuals(bank)
        worst = max(residuals, default=0.0)
        status = "PASS" if worst < ORTHOGONALITY_TOL else "FAIL"
        checks.append(("orthogonality", status, format_float(worst)))

    if decomp.n_stages >= 2:
        residual = verify_commutation(
            graph, decomp, kernels, cfg.library_mode, cfg.order, cfg.dense_limit
        )
        status = "PASS" if residual < COMMUTATION_TOL else "FAIL"
        checks.append(("commutation", status, format_float(residual)))
    else:
        checks.append(("commutation", "SKIP", "single stage"))

    if cfg.out_dir != ".":
        save_spectrum(spectrum, _out_path(cfg, "spectrum.txt"))
    return checks


def _as_kernel(poly, gain):
    from .kernels import polynomial_spectral_kernel

    return polynomial_spectral_kernel(poly, gain)


def cmd_verify(cfg: RunConfig) -> int:
    graph = load_graph(cfg.graph_path)
    if graph.n_vertices > cfg.dense_limit:
        raise UsageError(
            f"verification needs {graph.n_vertices} <= dense limit {cfg.dense_limit}"
        )
    checks = _verify_checks(cfg, graph)
    failed = [c for c in checks if c[1] == "FAIL"]
    for name, status, value in checks:
        print(f"check {name} {status} {value}")
    print(f"verify {'FAIL' if failed else 'PASS'}")
    return 1 if failed else 0


def cmd_response(cfg: RunConfig) -> int:
    if cfg.kind == "kernel-grid":
        base = meyer_kernel() if cfg.kernel == "meyer" else ideal_kernel()
        if cfg.mode == "poly":
            low = chebyshev_fit(base, cfg.order)
            high = low.mirrored()
        else:
            kernels = qmf_companions(base)
            low, high = kernels.h0, kernels.h1
        grid = np.linspace(0.0, 2.0, cfg.points)
        path = _out_path(cfg, "kernel_response.txt")
        save_table(
            path,
            ("lambda", "h0", "h1"),
            zip(grid, np.asarray(low(grid)), np.asarray(high(grid))),
        )
        print(f"written {path}")
        return 0
    if cfg.kind == "image-dft":
        if cfg.image_kind not in ("rect", "horizontal", "vertical", "diagonal"):
            raise UsageError(
                f"image-dft needs a bipartite lattice kind, got {cfg.image_kind!r}"
            )
        graph = image_graph(cfg.width, cfg.height, cfg.image_kind)
        center = (cfg.height // 2) * cfg.width + cfg.width // 2
        impulse = np.zeros(graph.n_vertices)
        impulse[center] = 1.0
        base = meyer_kernel() if cfg.kernel == "meyer" else ideal_kernel()
        if cfg.mode == "poly":
            support = 2 * cfg.order + 3
            if cfg.width < support or cfg.height < support:
                raise UsageError(
                    f"lattice too small for an order-{cfg.order} filter; "
                    f"need at least {support} per side"
                )
            poly = chebyshev_fit(base, cfg.order)
            from .kernels import chebyshev_apply

            response = chebyshev_apply(
                normalized_laplacian(graph), poly.coefficients, impulse
            )
        else:
            cfg.check_dense(graph.n_vertices)
            spectrum = eigendecompose(normalized_laplacian(graph), cfg.dense_limit)
            from .kernels import exact_filter_values

            response = exact_filter_values(spectrum, base, impulse)
        transform = np.fft.fft2(response.reshape(cfg.height, cfg.width))
        magnitude = np.abs(np.fft.fftshift(transform))
        omega1 = np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(cfg.width))
        omega2 = np.fft.fftshift(2.0 * np.pi * np.fft.fftfreq(cfg.height))
        rows = []
        for j, w2 in enumerate(omega2):
            for i, w1 in enumerate(omega1):
                rows.append((w1, w2, magnitude[j, i]))
        path = _out_path(cfg, "dft_response.txt")
        save_table(path, ("omega1", "omega2", "magnitude"), rows)
        print(f"written {path}")
        return 0
    raise UsageError(f"unknown response kind {cfg.kind!r}")


def cmd_fixtures(cfg: RunConfig) -> int:
    rng = np.random.default_rng(cfg.seed)
    name = cfg.name
    written = []
    if name == "cycle":
        n = cfg.n or 4
        graph = fx.cycle_graph(n)
        signal = fx.step_signal(graph, rng)
    elif name == "path":
        n = cfg.n or 8
        graph = fx.path_graph(n)
        signal = fx.step_signal(graph, rng)
    elif name == "complete":
        n = cfg.n or 3
        graph = fx.complete_graph(n)
        signal = fx.step_signal(graph, rng)
    elif name == "lattice8":
        graph = image_graph(cfg.width, cfg.height, "eight")
        signal = fx.block_signal(cfg.width, cfg.height, graph, rng)
    elif name == "planar3c":
        n = cfg.n or 200
        graph, coloring, points = fx.planar_three_colorable(n, cfg.seed)
        signal = fx.quadrant_signal(graph, points, rng)
        coloring_path = _out_path(cfg, f"{name}.coloring")
        save_coloring(coloring, coloring_path)
        written.append(coloring_path)
    else:
        raise UsageError(f"unknown fixture name {name!r}")
    graph_path = _out_path(cfg, f"{name}.graph")
    signal_path = _out_path(cfg, f"{name}.signal")
    save_graph(graph, graph_path)
    save_signal(signal, signal_path)
    written = [graph_path, signal_path] + written
    for path in written:
        print(f"written {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphfb",
        description="Critically sampled two-channel wavelet filterbanks on graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, graph=False, config=False, out=True):
        if graph:
            p.add_argument("--graph", required=True, help="edge-list graph file")
        if config:
            p.add_argument("--kernel", choices=("meyer", "ideal"), default="meyer")
            p.add_argument("--mode", choices=("exact", "poly"), default="exact")
            p.add_argument("--order", type=int, default=None, help="polynomial order")
            p.add_argument("--dense-limit", type=int, default=DEFAULT_DENSE_LIMIT)
        p.add_argument("--seed", type=int, default=0)
        if out:
            p.add_argument("--out", default=".", help="output directory")

    p = sub.add_parser("decompose", help="bipartite decomposition of a graph")
    add_common(p, graph=True)

    p = sub.add_parser("analyze", help="forward transform to subband coefficients")
    add_common(p, graph=True, config=True)
    p.add_argument("--signal", required=True, help="signal file")

    p = sub.add_parser("synthesize", help="reconstruct a signal from subbands")
    add_common(p, graph=True, config=True)
    p.add_argument("--subbands", required=True, help="subband tree file")
    p.add_argument("--reference", default=None, help="reference signal for error report")
    p.add_argument(
        "--zero-channels",
        default="",
        help="comma-separated channel labels to zero before synthesis",
    )

    p = sub.add_parser("verify", help="run the spectral and filterbank property checks")
    add_common(p, graph=True, config=True)
    p.add_argument(
        "--decomposition",
        default=None,
        help="directory with stage files and partitions.txt to verify instead of deriving",
    )

    p = sub.add_parser("response", help="kernel or 2D-DFT response tables")
    add_common(p, config=True)
    p.add_argument("--kind", choices=("kernel-grid", "image-dft"), required=True)
    p.add_argument("--points", type=int, default=1000)
    p.add_argument(
        "--image-kind",
        choices=("rect", "horizontal", "vertical", "diagonal"),
        default="rect",
    )
    p.add_argument("--width", type=int, default=64)
    p.add_argument("--height", type=int, default=64)

    p = sub.add_parser("fixtures", help="generate deterministic graph/signal fixtures")
    add_common(p)
    p.add_argument(
        "--name",
        choices=("cycle", "path", "complete", "lattice8", "planar3c"),
        required=True,
    )
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--width", type=int, default=8)
    p.add_argument("--height", type=int, default=8)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    zero = tuple(s for s in getattr(args, "zero_channels", "").split(",") if s)
    return RunConfig(
        command=args.command,
        graph_path=getattr(args, "graph", None),
        signal_path=getattr(args, "signal", None),
        subbands_path=getattr(args, "subbands", None),
        decomposition_dir=getattr(args, "decomposition", None),
        reference_path=getattr(args, "reference", None),
        kernel=getattr(args, "kernel", "meyer"),
        mode=getattr(args, "mode", "exact"),
        order=getattr(args, "order", None),
        dense_limit=getattr(args, "dense_limit", DEFAULT_DENSE_LIMIT),
        seed=getattr(args, "seed", 0),
        out_dir=getattr(args, "out", "."),
        zero_channels=zero,
        kind=getattr(args, "kind", None),
        image_kind=getattr(args, "image_kind", "rect"),
        width=getattr(args, "width", 64),
        height=getattr(args, "height", 64),
        points=getattr(args, "points", 1000),
        name=getattr(args, "name", None),
        n=getattr(args, "n", None),
    )


COMMANDS = {
    "decompose": cmd_decompose,
    "analyze": cmd_analyze,
    "synthesize": cmd_synthesize,
    "verify": cmd_verify,
    "response": cmd_response,
    "fixtures": cmd_fixtures,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        cfg.validate()
        return COMMANDS[cfg.command](cfg)
    except (UsageError, FormatError, OSError, ValueError) as exc:
        print(f"graphfb: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
