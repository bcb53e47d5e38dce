"""Command-line front end.

Subcommands: entropy, qinfo, codes, compress, capacity, qkd.  Every stochastic
command requires an explicit --seed and is bit-for-bit reproducible.  Exit
codes: 0 on success (protocol aborts are data, not failures), 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bb84, capacity, codes, entropy, formats, qentropy, typical
from .states import DensityMatrix


def _read_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_entropy(args) -> int:
    p = formats.dist_from_json(json.loads(args.inline) if args.inline else _read_json(args.dist))
    result = {"shannon_entropy": entropy.shannon_entropy(p)}
    if args.relative:
        q = formats.dist_from_json(_read_json(args.relative))
        result["relative_entropy"] = entropy.relative_entropy(p, q)
    if args.format == "json":
        _emit([formats.dump_json(result)], args.out)
    else:
        _emit([",".join(k for k in result), ",".join(formats.fmt(v) for v in result.values())],
              args.out)
    return 0


def cmd_qinfo(args) -> int:
    rho = DensityMatrix(formats.matrix_from_json(_read_json(args.density)))
    result = {"von_neumann_entropy": qentropy.von_neumann_entropy(rho)}
    if args.fidelity_with:
        sigma = DensityMatrix(formats.matrix_from_json(_read_json(args.fidelity_with)))
        result["fidelity"] = qentropy.fidelity(rho, sigma)
    if args.format == "json":
        _emit([formats.dump_json(result)], args.out)
    else:
        _emit([",".join(result), ",".join(formats.fmt(v) for v in result.values())], args.out)
    return 0


def cmd_codes(args) -> int:
    with open(args.code) as fh:
        code = formats.code_from_text(fh.read())
    report = codes.code_bounds(code)
    if args.format == "json":
        _emit([formats.dump_json({
            "n": report.n, "k": report.k, "d": report.distance, "t": report.t,
            "singleton_ok": report.singleton_ok, "gv_rate": report.gv_rate,
            "meets_gv_rate": report.meets_gv_rate,
            "weakly_self_dual": codes.is_weakly_self_dual(code),
        })], args.out)
    else:
        _emit([
            "n,k,d,t,singleton_ok,gv_rate,meets_gv_rate,weakly_self_dual",
            ",".join([str(report.n), str(report.k), str(report.distance), str(report.t),
                      str(int(report.singleton_ok)), formats.fmt(report.gv_rate),
                      str(int(report.meets_gv_rate)), str(int(codes.is_weakly_self_dual(code)))]),
        ], args.out)
    return 0


def cmd_compress(args) -> int:
    probs = tuple(json.loads(args.probs))
    blocks = [int(x) for x in args.blocks.split(",")]
    lines = []
    if args.quantum:
        lines.append("n,epsilon,rank,typical_mass,fidelity")
        for n in blocks:
            q = typical.QuantumSourceModel(
                DensityMatrix(np.diag(np.asarray(probs, dtype=complex))), n, args.eps)
            p = typical.typical_subspace_projector(q)
            rank = int(round(np.trace(p).real))
            mass = float(np.trace(p @ typical.block_state(q)).real)
            fid = typical.schumacher_fidelity(q)
            lines.append(",".join([str(n), formats.fmt(args.eps), str(rank),
                                   formats.fmt(mass), formats.fmt(fid)]))
    else:
        lines.append("n,epsilon,set_size,typical_mass,reliability")
        for n in blocks:
            model = typical.SourceModel(probs, n, args.eps)
            size = len(typical.typical_set(model))
            mass = typical.typical_set_mass(model)
            rel = typical.shannon_scheme(model, args.rate).reliability
            lines.append(",".join([str(n), formats.fmt(args.eps), str(size),
                                   formats.fmt(mass), formats.fmt(rel)]))
    _emit(lines, args.out)
    return 0


def cmd_capacity(args) -> int:
    t = formats.channel_from_json(_read_json(args.channel))
    cap, px = capacity.channel_capacity(t, tol=args.tol)
    if args.format == "json":
        _emit([formats.dump_json({"capacity": cap, "input": [float(x) for x in px]})], args.out)
    else:
        _emit(["capacity," + ",".join(f"p{i}" for i in range(px.size)),
               ",".join([formats.fmt(cap)] + [formats.fmt(x) for x in px])], args.out)
    return 0


def _css_from_config(obj) -> codes.CssCode:
    if obj == "steane":
        return codes.steane_css()
    if isinstance(obj, dict) and "c1" in obj and "c2" in obj:
        with open(obj["c1"]) as fh:
            c1 = formats.code_from_text(fh.read())
        with open(obj["c2"]) as fh:
            c2 = formats.code_from_text(fh.read())
        return codes.css_construct(c1, c2)
    raise ValueError("code must be 'steane' or {'c1': path, 'c2': path}")


def cmd_qkd(args) -> int:
    conf = _read_json(args.config)
    css = _css_from_config(conf.get("code", "steane"))
    n = int(conf["n"])
    threshold = int(conf.get("threshold", round(0.11 * n)))
    cfg = bb84.ProtocolConfig(
        n=n, delta=float(conf.get("delta", 1.0)), threshold=threshold,
        code=css, master_seed=args.seed)
    ch = bb84.ChannelModel(conf["channel"]["kind"], float(conf["channel"].get("param", 0.0)))
    transcripts = bb84.run_batch(cfg, ch, args.trials)

    lines = ["trial,aborted,sifted_count,qber,key_len,keys_match"]
    lines += formats.batch_summary_rows(transcripts)
    qbers = [t.qber_estimate for t in transcripts if not np.isnan(t.qber_estimate)]
    aborts = sum(t.aborted for t in transcripts)
    matches = sum(t.keys_match for t in transcripts)
    survivors = len(transcripts) - aborts
    lines.append(",".join([
        "aggregate",
        formats.fmt(aborts / len(transcripts)),
        formats.fmt(float(np.mean(qbers)) if qbers else float("nan")),
        formats.fmt(matches / survivors if survivors else 0.0),
    ]))
    _emit(lines, args.out)
    if args.transcripts:
        payload = [formats.transcript_to_json(t) for t in transcripts]
        formats.dump_json(payload, args.transcripts)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qinfo",
                                 description="information measures, coding and BB84 simulation")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy", help="Shannon entropy of a distribution")
    p.add_argument("--dist", help="JSON file holding a probability vector")
    p.add_argument("--inline", help="inline JSON probability vector")
    p.add_argument("--relative", help="JSON file with a second distribution for H(p||q)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("qinfo", help="von Neumann entropy of a density matrix")
    p.add_argument("--density", required=True, help="JSON matrix {dim, re, im}")
    p.add_argument("--fidelity-with", dest="fidelity_with")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_qinfo)

    p = sub.add_parser("codes", help="validate a linear code file and report bounds")
    p.add_argument("--code", required=True, help="text code file")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_codes)

    p = sub.add_parser("compress", help="typical-set compression sweep")
    p.add_argument("--probs", required=True, help="inline JSON symbol distribution")
    p.add_argument("--blocks", required=True, help="comma-separated block lengths")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--quantum", action="store_true",
                   help="sweep the quantum scheme of the diagonal source instead")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("capacity", help="capacity of a discrete channel")
    p.add_argument("--channel", required=True, help="JSON file {rows: [[...]]}")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("qkd", help="batch BB84 simulation")
    p.add_argument("--config", required=True, help="JSON protocol configuration")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--transcripts", help="optional path for full JSON transcripts")
    p.add_argument("--out")
    p.set_defaults(func=cmd_qkd)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
