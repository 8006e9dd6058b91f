"""Command-line front end.

    lorenz-renorm analyze --input map.json --out DIR
    lorenz-renorm iterate --input map.json --levels N [--theta "(01|10)"]
    lorenz-renorm verify-complex --input map.json --levels n [--m-offset m]
    lorenz-renorm plot --out DIR [--input map.json --levels n]
    lorenz-renorm fixed-point --theta "(01|10)" --out DIR

Exit codes: 0 success, 1 bad input, 2 classification negative (not
renormalizable, filter violation, trivial map), 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from .combinatorics import LorenzPermutation, rho
from .errors import (CertificationError, ClassificationError, DepthError, LorenzError,
                     NumericError, SchemaError, SearchFailure)
from .flow import (COMPLETED, NUMERIC_FAILURE, FixedPointConfig, fixed_point_search, iterate)
from .geometry import Dt_boundary, default_sigma, svg_document
from .intervals import compute_level, write_level_csv
from .maps import LorenzMap, Triviality, is_nontrivial, real_bounds_report
from .renorm import find_renormalization, prerenormalize
from .verifier import power_like_extension, scan_offsets, verify_main_inequality

log = logging.getLogger("lorenz_renorm")

EXIT_OK, EXIT_INPUT, EXIT_NEGATIVE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    input: str = None
    out: str = "."
    max_time: int = 8
    levels: int = 3
    theta: list = field(default_factory=list)
    sigma: float = None
    m_offset: int = None
    samples: int = 1024
    alpha: float = 2.0

    def __post_init__(self):
        if self.max_time < 1 or self.levels < 0 or self.samples < 1:
            raise SchemaError("max_time, levels and samples must be positive")
        if self.sigma is not None and not self.sigma > 0:
            raise SchemaError("sigma must be positive")


def atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_via(path, writer):
    """Run writer(tmp_path) and move the result into place."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_map(path) -> LorenzMap:
    with open(path) as fh:
        return LorenzMap.from_json(fh.read())


def _parse_theta(text):
    try:
        return LorenzPermutation.parse(text)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def _dump(obj):
    return json.dumps(obj, indent=2, default=float) + "\n"


# -- commands --------------------------------------------------------------

def cmd_analyze(cfg: RunConfig):
    f = load_map(cfg.input)
    triv = is_nontrivial(f)
    rb = real_bounds_report(f)
    report = dict(nontriviality=triv.value, real_bounds=rb.__dict__, renormalizable=False,
                  theta=None, combinatorics=[])
    code = EXIT_OK
    if triv == Triviality.TRIVIAL:
        code = EXIT_NEGATIVE
    else:
        try:
            step = find_renormalization(f, cfg.max_time)
        except ClassificationError:
            step = None
        if step is None:
            code = EXIT_NEGATIVE
        else:
            report.update(renormalizable=True, theta=str(step.theta), step=step.to_dict())
            if cfg.levels > 0:
                try:
                    seq = rho(f, cfg.levels, cfg.max_time)
                    report["combinatorics"] = [str(t) for t in seq.thetas]
                except DepthError as exc:
                    report["combinatorics_depth"] = exc.achieved
    atomic_write(os.path.join(cfg.out, "report.json"), _dump(report))
    return code


def cmd_iterate(cfg: RunConfig):
    f = load_map(cfg.input)
    theta = [_parse_theta(t) for t in cfg.theta] or None
    rec = iterate(f, max(cfg.levels, 1), Theta=theta, max_time=cfg.max_time)
    _atomic_via(os.path.join(cfg.out, "flow.csv"), rec.write_csv)
    if rec.stop_reason == COMPLETED:
        return EXIT_OK
    log.warning("flow stopped: %s (%s)", rec.stop_reason, rec.message)
    return EXIT_NUMERIC if rec.stop_reason == NUMERIC_FAILURE else EXIT_NEGATIVE


def cmd_verify_complex(cfg: RunConfig):
    f = load_map(cfg.input)
    n = max(cfg.levels, 1)
    pr = prerenormalize(f, n + 1, cfg.max_time)
    offsets = (cfg.m_offset,) if cfg.m_offset else tuple(range(1, min(n, 4) + 1))
    reports = [verify_main_inequality(f, n, m, cfg.samples, sigma=cfg.sigma, pr=pr).to_dict()
               for m in offsets]
    scan = scan_offsets(f, n, offsets, pr=pr, sigma=cfg.sigma)
    out = dict(main_inequality=reports, power_like=scan.to_dict())
    atomic_write(os.path.join(cfg.out, "complex.json"), _dump(out))
    if scan.best_m is None:
        return EXIT_NUMERIC
    ext = scan.results[scan.best_m]
    atomic_write(os.path.join(cfg.out, "complex.svg"),
                 svg_document([(ext.D, "black"), (ext.U_minus, "blue"), (ext.U_plus, "red")]))
    return EXIT_OK


def cmd_plot(cfg: RunConfig):
    if cfg.input is None:
        # the reference picture: D_1((-1, 1)) is the disc over the diameter
        curves = [(Dt_boundary((-1.0, 1.0), 1.0, 1024), "black"),
                  (np.array([-1.0, 1.0], dtype=complex), "gray")]
        atomic_write(os.path.join(cfg.out, "Dt.svg"), svg_document(curves))
        return EXIT_OK
    f = load_map(cfg.input)
    n = max(cfg.levels, 1)
    pr = prerenormalize(f, n + 1, cfg.max_time)
    sigma = cfg.sigma or default_sigma(f.alpha)
    levels = [compute_level(f, pr, k) for k in range(1, n + 1)]
    _atomic_via(os.path.join(cfg.out, "levels.csv"), lambda p: write_level_csv(p, levels))
    curves = []
    for lv, colour in zip(levels, ("black", "blue", "red", "green", "orange", "purple")):
        curves.append((Dt_boundary((lv.L_minus[0], lv.L_plus[1]), sigma, 512), colour))
    atomic_write(os.path.join(cfg.out, "domains.svg"), svg_document(curves))
    ext = power_like_extension(f, n, cfg.m_offset or 1, pr=pr, sigma=cfg.sigma)
    atomic_write(os.path.join(cfg.out, "extension.svg"),
                 svg_document([(ext.D, "black"), (ext.U_minus, "blue"), (ext.U_plus, "red")]))
    return EXIT_OK


def cmd_fixed_point(cfg: RunConfig):
    if len(cfg.theta) != 1:
        raise SchemaError("fixed-point needs exactly one --theta")
    theta = _parse_theta(cfg.theta[0])
    res = fixed_point_search(theta, cfg.alpha, cfg=FixedPointConfig())
    if res is None:
        log.warning("fixed-point search ran out of budget")
        return EXIT_NUMERIC
    atomic_write(os.path.join(cfg.out, "fixed_point.json"), res.f.to_json() + "\n")
    atomic_write(os.path.join(cfg.out, "fixed_point_report.json"),
                 _dump(dict(theta=str(theta), residual=res.residual, iterations=res.iterations)))
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "iterate": cmd_iterate,
    "verify-complex": cmd_verify_complex,
    "plot": cmd_plot,
    "fixed-point": cmd_fixed_point,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="lorenz-renorm", description=__doc__.split("\n")[0])
    ap.add_argument("command", choices=sorted(COMMANDS))
    ap.add_argument("--input", help="map JSON")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--max-time", type=int, default=8)
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--theta", action="append", default=[],
                    help='permutation such as "(01|10)"; repeat for a filter set')
    ap.add_argument("--sigma", type=float)
    ap.add_argument("--m-offset", type=int)
    ap.add_argument("--samples", type=int, default=1024)
    ap.add_argument("--alpha", type=float, default=2.0)
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = RunConfig(args.command, args.input, args.out, args.max_time, args.levels,
                        args.theta, args.sigma, args.m_offset, args.samples, args.alpha)
        if args.command not in ("plot", "fixed-point") and cfg.input is None:
            raise SchemaError(f"{args.command} needs --input")
        return COMMANDS[args.command](cfg)
    except SchemaError as exc:
        log.error("schema error: %s", exc)
        return EXIT_INPUT
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except (ClassificationError, DepthError) as exc:
        log.error("%s", exc)
        return EXIT_NEGATIVE
    except (NumericError, SearchFailure, CertificationError, LorenzError, FloatingPointError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
