"""Command-line front end.

Examples::

    n33 construct k2=-6 --out runs/k2m6
    n33 betti runs/k2m6
    n33 --json classify --verify
    n33 verify-table1 --rows k2=-6,k2=-1

Exit codes: 0 success, 1 bad input, 2 genericity retries exhausted,
3 a verification failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .fieldpoly import DEFAULT_PRIME, is_prime, read_polys
from .groebner import Ideal, hilbert_series, poly_str

log = logging.getLogger("n33")

EXIT_OK, EXIT_INPUT, EXIT_GENERICITY, EXIT_FAILED = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    prime: int = DEFAULT_PRIME
    seed: int = 0
    degree_bound: int = 9
    out: Optional[str] = None
    json: bool = False

    def validate(self):
        if self.prime <= 1000 or not is_prime(self.prime):
            raise InputError(f"prime must be a prime > 1000 (got {self.prime}); prime too small or composite")
        if self.prime >= 1 << 20:
            raise InputError("prime must be below 2^20 for exact float64 elimination")
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise InputError("seed must fit in 64 bits")
        self.seed = self.seed % (1 << 63)


def _emit(cfg: RunConfig, payload: dict, text: str):
    if cfg.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _load_ideal(path: str) -> Ideal:
    if os.path.isdir(path):
        path = os.path.join(path, "ideal.txt")
    try:
        with open(path) as fh:
            ring, polys = read_polys(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except (ValueError, KeyError, IndexError) as exc:
        raise InputError(f"cannot parse {path}: {exc}") from None
    return Ideal(ring, polys)


def _family_list(spec: Optional[str]) -> list:
    from .surfacegen import FAMILIES

    if not spec:
        return list(FAMILIES)
    rows = [r.strip() for r in spec.split(",") if r.strip()]
    for r in rows:
        if r not in FAMILIES:
            raise InputError(f"unknown Table 1 row {r!r}")
    return rows


def _k2_of(family: str) -> int:
    return int(family.split("=")[1])


# ---------------------------------------------------------------------------
# commands


def cmd_construct(args, cfg: RunConfig) -> int:
    from .surfacegen import FAMILIES, REJECTED, LinearSystemSpec, construct_family

    fam = args.family
    if fam not in FAMILIES and fam not in REJECTED:
        try:
            LinearSystemSpec.parse(fam)
        except ValueError:
            raise InputError(f"unknown family {fam!r}; expected one of {', '.join(FAMILIES)} "
                             f"or a linear system label") from None
    try:
        model = construct_family(fam, seed=cfg.seed, p=cfg.prime)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = cfg.out or os.path.join("out", fam.replace("=", "").replace("(", "").replace(")", "")
                                  .replace(";", "_").replace(",", "_").replace("^", "e"))
    model.save(out)
    degs = sorted(g.degree for g in model.ideal.gens)
    payload = {"family": fam, "out": out, "generator_degrees": degs, "seed": model.seed,
               "invariants": model.invariants}
    counts = {d: degs.count(d) for d in sorted(set(degs))}
    text = f"{fam}: {len(degs)} generators {counts} written to {out}"
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_betti(args, cfg: RunConfig) -> int:
    from .resolve import betti_via_koszul, minimal_resolution, regularity

    I = _load_ideal(args.ideal)
    BK = betti_via_koszul(I)
    # Koszul homology is exact, so its regularity is a valid per-step degree bound
    F = minimal_resolution(I, regularity=regularity(BK))
    BR = F.betti()
    agree = BK == BR
    payload = {"koszul": BK.to_dict(), "resolution": BR.to_dict(), "agree": agree}
    text = f"Koszul homology:\n{BK.text()}\n\nminimal resolution:\n{BR.text()}\n\nagree: {agree}"
    _emit(cfg, payload, text)
    return EXIT_OK if agree else EXIT_FAILED


def cmd_hilbert(args, cfg: RunConfig) -> int:
    from .surfacegen import surface_invariants

    I = _load_ideal(args.ideal)
    h = hilbert_series(I, cfg.degree_bound)
    inv = surface_invariants(h, I.ring.n)
    payload = {"values": h.values, "numerator": h.numerator, "invariants": inv}
    text = (f"H(d), d=0..{cfg.degree_bound}: {' '.join(map(str, h.values))}\n"
            f"numerator: {poly_str(h.numerator)}\n"
            f"invariants: {inv}")
    _emit(cfg, payload, text)
    return EXIT_OK


def cmd_classify(args, cfg: RunConfig) -> int:
    from .classifier import accepted_families, classify

    tree = classify(10, 6)
    checks = []
    status = EXIT_OK
    if args.verify:
        from .resolve import minimal_resolution, regularity_via_gin
        from .surfacegen import construct_family, h0_twist

        for node in tree.walk():
            if not node.needs_computation:
                continue
            systems = [node.system]
            if node.system.startswith("F_e(4,2e+6"):
                systems = ["F0(4,6;2^9,1^2)", "F1(4,8;2^9,1^2)"]
            for sysl in systems:
                if any(c["system"] == sysl for c in checks):
                    continue
                m = construct_family(sysl, seed=cfg.seed, p=cfg.prime)
                h = h0_twist(m.ideal, 2)
                # the Betti table is reported for inspection (it shows why N_{3,3} fails)
                B = minimal_resolution(m.ideal, regularity=regularity_via_gin(m.ideal)).betti()
                checks.append({"system": sysl, "h0_I2": h, "confirmed": h == 1, "betti": B.to_dict(),
                               "betti_text": B.text()})
                if h != 1:
                    status = EXIT_FAILED
    acc = accepted_families(tree)
    payload = {"tree": tree.to_dict(), "accepted": acc, "verified": checks}
    text = tree.text() + f"\n\naccepted leaves: {len(acc)}"
    for c in checks:
        text += f"\n  {c['system']}: h0(I(2)) = {c['h0_I2']} ({'confirmed' if c['confirmed'] else 'NOT confirmed'})"
        text += "\n" + "\n".join("      " + ln for ln in c["betti_text"].splitlines())
    _emit(cfg, payload, text)
    return status


def _mf_for(I: Ideal, cfg: RunConfig, attempt: int = 0):
    from .mfcubic import extract_mf, random_cubic_in, resolve_over_cubic

    rng = np.random.default_rng([cfg.seed, attempt])
    f = random_cubic_in(I, rng)
    QR = resolve_over_cubic(I, f, steps=6, degree_bound=cfg.degree_bound)
    return f, QR, extract_mf(QR)


def _require_cubics(I: Ideal):
    if not any(g.degree == 3 for g in I.gens):
        raise InputError("the ideal contains no cubic generators")


def cmd_mf(args, cfg: RunConfig) -> int:
    I = _load_ideal(args.ideal)
    _require_cubics(I)
    f, QR, mf = _mf_for(I, cfg)
    ok = mf.verify()
    shape = mf.shape()
    if cfg.out:
        mf.save(cfg.out, seed=cfg.seed)
    payload = {"f": str(f), "period_start": QR.period_start, "betti_over_cubic": QR.betti().to_dict(),
               "shape": shape.to_dict(), "rank_coker_phi": mf.rank_coker_phi(), "verified": ok}
    text = (f"resolution over R/(f):\n{QR.betti().text()}\nperiodic from step {QR.period_start}\n"
            f"shape:\n{shape.text()}\nphi*psi = psi*phi = f*Id: {'pass' if ok else 'FAIL'}\n"
            f"rank coker(phi) = {mf.rank_coker_phi()}")
    _emit(cfg, payload, text)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_normal_bundle(args, cfg: RunConfig) -> int:
    from .mfcubic import normal_sections, random_cubic_in

    I = _load_ideal(args.ideal)
    _require_cubics(I)
    f = random_cubic_in(I, np.random.default_rng([cfg.seed, 0]))
    n = normal_sections(I, f)
    _emit(cfg, {"h0_normal": n, "f": str(f)}, str(n))
    return EXIT_OK


def verify_row(family: str, cfg: RunConfig) -> dict:
    """Run construct -> betti -> invariants -> mf -> normal bundle for one Table 1 row."""
    from .classifier import TABLE1, discriminant_invariants, expected_normal_sections
    from .mfcubic import normal_sections
    from .resolve import BettiTable, betti_via_koszul
    from .surfacegen import construct_family, surface_invariants

    t = _k2_of(family)
    model = construct_family(family, seed=cfg.seed, p=cfg.prime)
    I = model.ideal
    cells = {}
    star = BettiTable.from_twists([[0], [3] * 10, [4] * 15, [5] * 6])
    B = betti_via_koszul(I)
    cells["betti"] = B == star
    inv = surface_invariants(hilbert_series(I, 10), I.ring.n)
    cells["degree"] = inv.get("degree") == 10
    cells["genus"] = inv.get("sectional_genus") == 6
    cells["K2"] = model.invariants.get("K2") == t
    rec = discriminant_invariants(t)
    cells["delta"] = rec.delta == TABLE1[t]["delta"]
    f, QR, mf = _mf_for(I, cfg)
    cells["mf"] = mf.verify() and mf.shape().to_dict() == BettiTable({(0, 0): 15, (1, 1): 6, (1, 2): 9}).to_dict()
    n = normal_sections(I, f, QR)
    cells["h0N"] = n == expected_normal_sections(t) == TABLE1[t]["h0N"]
    return {"family": family, "delta": rec.delta, "h0N": n, "cells": cells,
            "pass": all(cells.values()), "seed": model.seed}


def cmd_verify_table1(args, cfg: RunConfig) -> int:
    rows = _family_list(args.rows)
    results = [verify_row(r, cfg) for r in rows]
    header = f"{'K^2':>4} {'delta':>6} {'h0(N)':>6}  " + " ".join(f"{k:>7}" for k in results[0]["cells"])
    lines = [header]
    for r in results:
        lines.append(f"{_k2_of(r['family']):>4} {r['delta']:>6} {r['h0N']:>6}  "
                     + " ".join(f"{'pass' if v else 'FAIL':>7}" for v in r["cells"].values()))
    ok = all(r["pass"] for r in results)
    lines.append("all cells pass" if ok else "some cells FAIL")
    _emit(cfg, {"rows": results, "pass": ok}, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def add_globals(parser, suppress):
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--prime", type=int, default=d(DEFAULT_PRIME), help="characteristic (prime > 1000)")
        parser.add_argument("--seed", type=int, default=d(0), help="random seed")
        parser.add_argument("--degree-bound", type=int, default=d(9),
                            help="degree bound for truncated computations")
        parser.add_argument("--json", action="store_true", default=d(False), help="machine-readable output")
        parser.add_argument("--out", default=d(None), help="output directory")
        parser.add_argument("--config", default=d(None), help="JSON file with default values for the global flags")
        parser.add_argument("-v", "--verbose", action="store_true", default=d(False))

    ap = argparse.ArgumentParser(prog="n33", description="Degree-10 surfaces in P^5 with property N_{3,3}.")
    add_globals(ap, False)
    common = argparse.ArgumentParser(add_help=False)
    add_globals(common, True)
    sub = ap.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    p = sub.add_parser("construct", help="build a surface of Table 1 or a rejected family")
    p.add_argument("family")
    p.set_defaults(func=cmd_construct)
    for name, func, hlp in (
        ("betti", cmd_betti, "Betti table by Koszul homology and by minimal resolution"),
        ("hilbert", cmd_hilbert, "Hilbert function, numerator and surface invariants"),
        ("mf", cmd_mf, "matrix factorization from a random cubic through X"),
        ("normal-bundle", cmd_normal_bundle, "h^0 of the normal bundle of X in a random cubic"),
    ):
        p = sub.add_parser(name, help=hlp)
        p.add_argument("ideal", help="ideal.txt or a directory containing it")
        p.set_defaults(func=func)
    p = sub.add_parser("classify", help="adjunction case tree for (d, pi) = (10, 6)")
    p.add_argument("--verify", action="store_true", help="confirm quadric-check leaves by construction")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("verify-table1", help="reproduce Table 1 row by row")
    p.add_argument("--rows", default=None, help="comma-separated subset, e.g. k2=-6,k2=-1")
    p.set_defaults(func=cmd_verify_table1)
    return ap


def _config_from(args, argv) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read config {args.config}: {exc}") from None
        for k, v in data.items():
            k = k.replace("-", "_")
            if hasattr(cfg, k):
                setattr(cfg, k, v)
    given = set(a.split("=")[0] for a in (argv or []) if a.startswith("--"))
    for flag, attr in (("--prime", "prime"), ("--seed", "seed"), ("--degree-bound", "degree_bound"),
                       ("--out", "out"), ("--json", "json")):
        if flag in given or not args.config:
            setattr(cfg, attr, getattr(args, attr))
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    from .resolve import BoundsError
    from .surfacegen import GenericityError

    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config_from(args, argv)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GenericityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GENERICITY
    except BoundsError as exc:
        print(f"error: {exc} (try a larger --degree-bound)", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
