"""Batch front end: ``polyrecur <command> [--config FILE] [--out PATH] [--seed N]``.

Every command writes plot-ready CSV whose first line is the serialized run
configuration.  Exit codes: 0 success, 1 a verification failed, 2 usage.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

import sympy

from . import averages, combinat, config, nilseq
from .dynsys import RotationSystem, system_from_json
from .groups import AbGroup, CharSum, ExactComplex, GroupPoint, indicator
from .polyalg import PolyFamily, dependence_witness, is_rationally_independent, parse_family


class UsageError(Exception):
    pass


# -- rendering ----------------------------------------------------------------


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _fmt_part(z: ExactComplex, alphas) -> str:
    r = z.to_fraction()
    if r is not None:
        return str(r)
    return _fmt_float(z.numeric(alphas).real)


def render_value(z: ExactComplex, alphas) -> tuple[str, str, str]:
    """``(Re, Im, |z|)``: exact rationals where possible, else 17-digit floats."""
    a2 = z.abs2().to_fraction()
    if a2 is not None:
        num, den = math.isqrt(a2.numerator), math.isqrt(a2.denominator)
        mod = str(Fraction(num, den)) if num * num == a2.numerator and den * den == a2.denominator else _fmt_float(math.sqrt(a2))
    else:
        mod = _fmt_float(abs(z.numeric(alphas)))
    return _fmt_part(z.real, alphas), _fmt_part(z.imag, alphas), mod


def exact_text(z: ExactComplex) -> str:
    if not z.terms:
        return "0"
    return " + ".join(f"{c}*e({p})" for p, c in sorted(z.terms.items(), key=lambda t: (t[0].irr, t[0].q)))


# -- config -------------------------------------------------------------------


def _alphas(cfg: dict) -> dict:
    raw = cfg.get("alphas")
    if raw is None:
        return dict(config.DEFAULT_ALPHAS)
    return {k: float(sympy.sympify(v)) if isinstance(v, str) else float(v) for k, v in raw.items()}


def _family(cfg: dict) -> PolyFamily:
    fam = cfg.get("family")
    if fam is None:
        raise UsageError("config needs a 'family'")
    if isinstance(fam, list):
        return PolyFamily.of(*fam)
    return parse_family(fam)


def _system(cfg: dict) -> RotationSystem:
    if "system" not in cfg:
        raise UsageError("config needs a 'system'")
    s = system_from_json(cfg["system"])
    if not isinstance(s, RotationSystem):
        raise UsageError("this command needs a rotation system")
    return s


def _functions(group: AbGroup, cfg: dict, key: str = "functions") -> list[CharSum]:
    if key not in cfg:
        raise UsageError(f"config needs '{key}'")
    return [CharSum.from_json(group, f) for f in cfg[key]]


def _range(cfg: dict, key: str = "n_range", default=None) -> range:
    r = cfg.get(key, default)
    if r is None:
        raise UsageError(f"config needs '{key}'")
    return range(int(r[0]), int(r[1]))


def _window_set(cfg: dict, seed):
    desc = cfg.get("set")
    if desc is None:
        raise UsageError("config needs a 'set' descriptor")
    if desc.get("type") == "bernoulli" and seed is None and "seed" not in desc:
        raise UsageError("randomized set needs --seed")
    return combinat.set_from_descriptor(desc, seed)


def _header(cfg: dict) -> str:
    return "# run-config: " + json.dumps(cfg, sort_keys=True, separators=(",", ":")) + "\n"


# -- commands -----------------------------------------------------------------


def cmd_indep(cfg, out):
    fam = _family(cfg)
    if is_rationally_independent(fam):
        out.write(f"independent {fam}\n")
    else:
        w = dependence_witness(fam)
        out.write(f"dependent {fam} witness=({','.join(map(str, w))})\n")
    return 0


def cmd_nilseq_verify(cfg, out):
    G = AbGroup.from_json(cfg["group"])
    a = GroupPoint.from_json(G, cfg["a"])
    fs = _functions(G, cfg)
    fam = _family(cfg)
    alphas = _alphas(cfg)
    R = nilseq.build_realization(G, a, fs, fam, cfg.get("coeff_table"))
    rep = nilseq.verify_identity(R, RotationSystem(G, a), fs, fam, _range(cfg))
    out.write("n,re_a,im_a,abs_a,re_b,im_b,abs_b,exact_a,exact_b,equal\n")
    for n, x, y in zip(rep.n_values, rep.correlations, rep.nilsequence):
        ok = n not in rep.mismatches
        out.write(",".join([str(n), *render_value(x, alphas), *render_value(y, alphas), exact_text(x), exact_text(y), str(int(ok))]) + "\n")
    status = "PASS" if rep.passed else f"FAIL mismatches={len(rep.mismatches)}"
    out.write(f"# {status}\n")
    return 0 if rep.passed else 1


def cmd_average(cfg, out):
    s = _system(cfg)
    fs = _functions(s.group, cfg)
    fam = _family(cfg)
    alphas = _alphas(cfg)
    avg = averages.ergodic_average_fn(s, fs, fam, int(cfg["M"]), int(cfg["N"]))
    out.write("chi,re,im,abs\n")
    for chi in sorted(avg.terms):
        c = avg.terms[chi].simplified()
        out.write(" ".join(map(str, chi)) + "," + ",".join(render_value(c, alphas)) + "\n")
    return 0


def cmd_gap(cfg, out):
    s = _system(cfg)
    fs = _functions(s.group, cfg)
    fam = _family(cfg)
    alphas = _alphas(cfg)
    kind = cfg.get("kind", "projection")
    fn = {"projection": averages.l2_projection_gap, "total": averages.total_ergodic_gap}.get(kind)
    if fn is None:
        raise UsageError(f"unknown gap kind {kind!r}")
    starts = tuple(cfg.get("starts", config.WINDOW_STARTS))
    out.write("L,gap\n")
    values = []
    for L in cfg.get("windows", config.WINDOW_SCHEDULE):
        g = averages.uniform_estimate(lambda M, N: fn(s, fs, fam, M, N, alphas), int(L), starts)
        values.append(g)
        out.write(f"{L},{_fmt_float(g)}\n")
    margin = 1 - config.TREND_MARGIN
    dec = all(b <= margin * a for a, b in zip(values, values[1:]))
    out.write(f"# decreasing_with_margin={int(dec)}\n")
    return 0


def cmd_khintchine(cfg, out):
    s = _system(cfg)
    fam = _family(cfg)
    if "A" not in cfg:
        raise UsageError("config needs 'A'")
    A_cfg = cfg["A"]
    A = indicator(s.group, A_cfg) if isinstance(A_cfg, list) else CharSum.from_json(s.group, A_cfg)
    rep = averages.khintchine_scan(s, A, fam, Fraction(str(cfg.get("eps", config.DEFAULT_EPS))), _range(cfg, default=(1, 1001)))
    out.write("n,measure,good\n")
    good = set(rep.good)
    for n, m in rep.measures.items():
        out.write(f"{n},{m},{int(n in good)}\n")
    out.write(f"# mu_A={rep.measure_A} threshold={rep.threshold} good={len(rep.good)} max_gap={rep.max_gap}\n")
    return 0


def cmd_count(cfg, out, seed):
    L = _window_set(cfg, seed)
    fam = _family(cfg)
    out.write("n,shifts,count,density\n")
    for n in _range(cfg):
        c = combinat.configuration_count(L, fam, n)
        out.write(f"{n},{' '.join(map(str, fam.values(n)))},{c},{Fraction(c, L.N)}\n")
    return 0


def cmd_scan(cfg, out, seed):
    L = _window_set(cfg, seed)
    fam = _family(cfg)
    rep = combinat.good_n_scan(L, fam, Fraction(str(cfg.get("eps", config.DEFAULT_EPS))), _range(cfg))
    good = set(rep.good)
    out.write("n,density,good\n")
    for n, d in rep.densities.items():
        out.write(f"{n},{_fmt_float(float(d))},{int(n in good)}\n")
    out.write(f"# threshold={_fmt_float(float(rep.threshold))} good={len(rep.good)} max_gap={rep.max_gap}\n")
    return 0


def cmd_tightness(cfg, out, seed):
    L = _window_set(cfg, seed)
    fam = _family(cfg)
    rep = combinat.tightness_report(L, fam, _range(cfg))
    out.write("n,density,deviation\n")
    for n, dev in rep.deviations.items():
        out.write(f"{n},{_fmt_float(float(rep.densities[n]))},{_fmt_float(dev)}\n")
    out.write(f"# target={rep.target} max_deviation={_fmt_float(rep.max_deviation)} rejected={rep.rejected}\n")
    return 0


def cmd_normal_gen(cfg, out_path, seed):
    source = cfg.get("source", "champernowne")
    if source == "seeded-coin" and seed is None:
        raise UsageError("seeded-coin needs --seed")
    if out_path is None:
        raise UsageError("normal-gen needs --out")
    L = combinat.normal_word(int(cfg["N"]), source, seed)
    combinat.write_set(L, out_path, cfg.get("format", "rle"), comment=_header(cfg).strip())
    return 0


# -- argument handling --------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=lambda s: int(s, 0), help="seed for randomized commands")
    p = argparse.ArgumentParser(prog="polyrecur", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)
    ind = sub.add_parser("indep", parents=[common], help="rational independence of a family")
    ind.add_argument("family", nargs="?", help='e.g. "{n, n^2}"')
    for name, hlp in [
        ("nilseq-verify", "check a_n = phi(S^n e) exactly"),
        ("average", "exact polynomial ergodic average"),
        ("gap", "L2 gap of averages across the window schedule"),
        ("khintchine", "good-n scan for a set in a finite rotation"),
        ("count", "configuration counts in an integer set"),
        ("scan", "good-n scan for an integer set"),
        ("tightness", "deviation from 2^-(k+1) on a normal set"),
    ]:
        sub.add_parser(name, parents=[common], help=hlp)
    ng = sub.add_parser("normal-gen", parents=[common], help="write a normal 0/1 word as a set file")
    ng.add_argument("--N", type=int)
    ng.add_argument("--source", choices=["champernowne", "seeded-coin"])
    ng.add_argument("--format", choices=["rle", "list"])
    return p


def _load_config(args) -> dict:
    cfg: dict = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config: {e}") from e
    cfg["command"] = args.command
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.command == "indep" and args.family:
        cfg["family"] = args.family
    if args.command == "normal-gen":
        for key in ("N", "source", "format"):
            if getattr(args, key) is not None:
                cfg[key] = getattr(args, key)
        if "N" not in cfg:
            raise UsageError("normal-gen needs --N")
    return cfg


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    try:
        args = _parser().parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        cfg = _load_config(args)
        seed = cfg.get("seed")
        if args.command == "normal-gen":
            return cmd_normal_gen(cfg, args.out, seed)
        buf = io.StringIO()
        buf.write(_header(cfg))
        simple = {
            "indep": cmd_indep,
            "nilseq-verify": cmd_nilseq_verify,
            "average": cmd_average,
            "gap": cmd_gap,
            "khintchine": cmd_khintchine,
        }
        seeded = {"count": cmd_count, "scan": cmd_scan, "tightness": cmd_tightness}
        if args.command in simple:
            code = simple[args.command](cfg, buf)
        else:
            code = seeded[args.command](cfg, buf, seed)
    except (UsageError, ValueError, KeyError, TypeError, sympy.SympifyError) as e:
        print(f"polyrecur {args.command}: error: {e}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        last = buf.getvalue().rstrip("\n").rsplit("\n", 1)[-1]
        if last.startswith("# "):
            stdout.write(last[2:] + "\n")
    else:
        stdout.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
