"""Command line front end: ``wtcalc <command> [options]``.

Exit status 0 on success, 1 on invalid input, 2 when a resource bound is hit.
Errors are printed to stderr as a single line ``error: <kind>: <message>``
(or a JSON object ``{"error": {...}}`` with --json).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import braids as br
from . import exactalg
from . import homs
from . import liealg as la
from . import milnor as mi
from . import towergroups as tg
from . import trees as tr

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE = 0, 1, 2


@dataclass
class Limits:
    max_order: int = 6
    max_labels: int = 4
    limit_rows: int | None = 200_000
    limit_mb: int | None = None


@dataclass
class Request:
    command: str
    order: int | None = None
    labels: int | None = None
    flavor: str = tg.PLAIN
    as_json: bool = False
    braid: str | None = None
    strands: int | None = None
    longitudes: list = field(default_factory=list)
    tree: str | None = None
    max_degree: int | None = None
    limits: Limits = field(default_factory=Limits)


class ValidationError(ValueError):
    pass


def _gs(s: exactalg.GroupStructure) -> dict:
    return s.to_dict()


def _need(value, flag):
    if value is None:
        raise ValidationError(f"{flag} is required")
    return value


def _check_bounds(req: Request):
    lim = req.limits
    if req.order is not None:
        if req.order < 0:
            raise ValidationError("--order must be >= 0")
        if req.order > lim.max_order:
            raise exactalg.ResourceLimitError(f"order {req.order} exceeds the bound {lim.max_order}")
    for v in (req.labels, req.strands):
        if v is not None:
            if v < 1:
                raise ValidationError("--labels/--strands must be >= 1")
            if v > lim.max_labels:
                raise exactalg.ResourceLimitError(f"{v} labels exceeds the bound {lim.max_labels}")


def _string_link(req: Request) -> mi.StringLinkData:
    if req.braid is not None:
        m = _need(req.strands, "--strands")
        return br.braid_longitudes(br.parse_braid(req.braid, m))
    if req.longitudes:
        m = req.strands or len(req.longitudes)
        return mi.StringLinkData.parse(req.longitudes, m)
    raise ValidationError("give --braid (with --strands) or --longitudes")


def _tensor_json(x: la.TensorElement) -> dict:
    return {
        "text": str(x),
        "terms": [[i, la.bracket_str(k), c] for (i, k), c in x.to_dict().items()],
    }


# --------------------------------------------------------------------------
# commands


def cmd_groups(req: Request) -> tuple[dict, str]:
    n, m = _need(req.order, "--order"), _need(req.labels, "--labels")
    g = tg.tower_group(n, m, req.flavor, req.limits.limit_rows)
    out = {"group": g.name, "order": n, "labels": m, "flavor": req.flavor,
           "generators": len(g.generators), **_gs(g.structure)}
    return out, f"{g.name} = {g.structure}"


def cmd_eta(req: Request) -> tuple[dict, str]:
    n, m = _need(req.order, "--order"), _need(req.labels, "--labels")
    if req.tree:
        t = tr.parse_tree(req.tree, m)
        flavor = la.QUASI if req.flavor == tg.PLAIN and not isinstance(t, tr.Twisted) else la.LIE
        if not isinstance(t, (tr.Inner, tr.Twisted)):
            raise ValidationError("eta takes an unrooted or twisted tree")
        x = homs.eta_element(t, m, flavor)
        return {"tree": str(t), "flavor": flavor, "eta": _tensor_json(x)}, f"eta({t}) = {x}"
    e = homs.eta(n, m, req.flavor, req.limits.limit_rows)
    bad = e.relator_failures()
    outside = e.outside_kernel()
    rep = homs.eta_report(e)
    target = "D'" if e.flavor == la.QUASI else "D"
    out = {
        "source": e.source.name,
        "target": f"{target}_{n}(m={m})",
        "relator_failures": len(bad),
        "outside_kernel": len(outside),
        **rep.to_dict(),
    }
    text = (f"{e.source.name} -> {target}_{n}: well_defined={rep.well_defined} "
            f"kernel={rep.kernel} cokernel={rep.cokernel} iso={rep.is_isomorphism}")
    return out, text


def cmd_verify_levine(req: Request) -> tuple[dict, str]:
    n, m = _need(req.order, "--order"), _need(req.labels, "--labels")
    rep = homs.verify_levine(n, m, req.limits.limit_rows)
    out = {"order": n, "labels": m, **rep.to_dict()}
    return out, f"eta'_{n}(m={m}): is_isomorphism: {str(rep.is_isomorphism).lower()}"


def cmd_framed_vs_twisted(req: Request) -> tuple[dict, str]:
    n, m = _need(req.order, "--order"), _need(req.labels, "--labels")
    r = homs.framed_vs_twisted(n, m, req.limits.limit_rows)
    text = f"order {n}, m={m}: cok={r.cok} ker={r.ker if r.ker is not None else '-'} expected={r.expected} match={r.match}"
    return r.to_dict(), text


def cmd_classify(req: Request) -> tuple[dict, str]:
    n, m = _need(req.order, "--order"), _need(req.labels, "--labels")
    c = homs.classify(n, m, req.limits.limit_rows)
    g = c.groups
    text = "\n".join([
        f"order {n}, m={m}",
        f"  T={g['T']}  T~={g['T_tilde']}  T^oo={g['T_inf']}  D={g['D']}  D'={g['D_prime']}",
        f"  eta: kernel={c.eta.kernel} cokernel={c.eta.cokernel} iso={c.eta.is_isomorphism}",
        f"  W={c.predicted_w} ({c.status_w})  W^oo={c.predicted_w_inf} ({c.status_w_inf})",
    ])
    return c.to_dict(), text


def cmd_milnor(req: Request) -> tuple[dict, str]:
    s = _string_link(req)
    n = _need(req.order, "--order")
    nums = mi.milnor_numbers(s, n + 2)
    x = mi.total_milnor(s, n)
    out = {"strands": s.strands, "order": n, "mu": nums, "total": _tensor_json(x), "in_D": True}
    lines = [f"mu({k}) = {v}" for k, v in nums.items()] or ["all mu of length %d vanish" % (n + 2)]
    lines.append(f"mu_{n} = {x}  (in D_{n}: yes)")
    return out, "\n".join(lines)


def cmd_sl(req: Request) -> tuple[dict, str]:
    s = _string_link(req)
    n = req.order if req.order is not None else 1
    v = mi.sato_levine(s, n)
    return {"order": n, "SL": str(v), "coords": list(v.coords)}, f"SL_{n} = {v} (mod 2)"


def cmd_artin(req: Request) -> tuple[dict, str]:
    s = _string_link(req)
    n = _need(req.order, "--order")
    a = mi.artin_rep(s, n)
    out = {**a.to_dict(), "fixes_product": a.fixes_product(), "identity": a.is_identity()}
    lines = [f"{k} -> {v}" for k, v in out["images"].items()]
    lines.append(f"mod F_{a.depth}: fixes product: yes, identity: {'yes' if out['identity'] else 'no'}")
    return out, "\n".join(lines)


def cmd_realize(req: Request) -> tuple[dict, str]:
    t = tr.parse_tree(_need(req.tree, "--tree"), req.strands)
    if not isinstance(t, tr.Inner):
        raise ValidationError("realize takes an unrooted tree")
    b, sign = br.realize_tree(t, req.strands)
    out = {"tree": str(t), "strands": b.strands, "braid": str(b), "sign": sign, "verified": True}
    return out, f"{t} -> {b}\nmu_{t.order} = {sign:+d} * eta_{t.order}({t})"


COMMANDS = {
    "groups": cmd_groups,
    "eta": cmd_eta,
    "verify-levine": cmd_verify_levine,
    "framed-vs-twisted": cmd_framed_vs_twisted,
    "classify": cmd_classify,
    "milnor": cmd_milnor,
    "sl": cmd_sl,
    "artin": cmd_artin,
    "realize": cmd_realize,
}


def run(req: Request) -> tuple[int, str]:
    """Execute a request; returns (exit status, output text)."""
    try:
        _check_bounds(req)
        data, text = COMMANDS[req.command](req)
    except (exactalg.ResourceLimitError, MemoryError, RecursionError) as exc:
        return EXIT_RESOURCE, _error("resource", str(exc) or type(exc).__name__, req.as_json)
    except (ValidationError, ValueError, KeyError, tr.TreeSyntaxError) as exc:
        kind = type(exc).__name__
        msg = exc.args[0] if exc.args else kind
        return EXIT_INVALID, _error(kind, str(msg), req.as_json)
    if req.as_json:
        return EXIT_OK, json.dumps(data, sort_keys=True)
    return EXIT_OK, text


def _error(kind: str, msg: str, as_json: bool) -> str:
    msg = " ".join(str(msg).split())
    if as_json:
        return json.dumps({"error": {"kind": kind, "message": msg}}, sort_keys=True)
    return f"error: {kind}: {msg}"


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        # bad arguments are validation errors (exit 1), reported on one line
        print(_error("usage", message, "--json" in sys.argv), file=sys.stderr)
        sys.exit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgParser(prog="wtcalc", description="Whitney tower obstruction groups and Milnor invariants")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--order", type=int)
    p.add_argument("--labels", type=int)
    p.add_argument("--flavor", choices=tg.FLAVORS, default=tg.PLAIN)
    p.add_argument("--json", action="store_true")
    p.add_argument("--braid")
    p.add_argument("--strands", type=int)
    p.add_argument("--longitudes", action="append", default=[],
                   help="one longitude word per strand, in strand order (repeat the flag)")
    p.add_argument("--tree")
    p.add_argument("--max-degree", type=int, default=6, help="bound on --order")
    p.add_argument("--max-labels", type=int, default=4)
    p.add_argument("--limit-rows", type=int, default=200_000, help="cap on relator rows in elimination")
    return p


def _apply_memory_limit(limit_mb: int | None):
    if not limit_mb:
        return
    try:
        import resource
    except ImportError:  # pragma: no cover - non-POSIX
        return
    nbytes = limit_mb * 1024 * 1024
    resource.setrlimit(resource.RLIMIT_AS, (nbytes, nbytes))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    env = os.environ.get("WTCALC_LIMIT_MB")
    limits = Limits(args.max_degree, args.max_labels, args.limit_rows, int(env) if env else None)
    _apply_memory_limit(limits.limit_mb)
    req = Request(
        args.command, args.order, args.labels, args.flavor, args.json, args.braid,
        args.strands, args.longitudes, args.tree, args.max_degree, limits,
    )
    status, out = run(req)
    print(out, file=sys.stdout if status == EXIT_OK or req.as_json else sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
