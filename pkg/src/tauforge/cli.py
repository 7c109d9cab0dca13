"""Command-line interface: tables, series, and verification suites.

Exit status is 0 when every requested check passes, 1 when a check fails
and 2 for an invalid configuration.  JSON is the contract; ``--format text``
renders the same payload for reading.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable

from . import fock, partitions, quantumdim, scalars, symfun, tau
from .partitions import EMPTY, Partition, enumerate_partitions, kappa, partitions_up_to

SUITES = ("fermion-comm", "skew-schur-vev", "wmu-identities", "key-identity", "vev-remark",
          "translation", "hirota-vector", "kp-pde", "toda-eq", "route-agreement")

COMMANDS = ("w", "ww", "char", "tau-kp", "tau-toda", "conifold", "toric", "verify")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# check bookkeeping


def check(name: str, params: dict, window, failures: list, extra: dict | None = None) -> dict:
    out = {"check": name, "params": params, "certified_window": window,
           "max_residual": "0" if not failures else str(failures[0]),
           "failures": [str(f) for f in failures[:10]], "pass": not failures}
    if extra:
        out.update(extra)
    return out


def _from_report(rep: dict) -> dict:
    """Normalise a report produced by the tau module into a check entry."""
    fails = list(rep.get("residuals", {}).items())
    return check(rep["check"], rep["params"], rep["certified_window"],
                 [f"{k}: {v}" for k, v in fails],
                 {"max_residual": rep["max_residual"],
                  **{k: rep[k] for k in ("equation", "constant") if k in rep}})


# ---------------------------------------------------------------------------
# suites


def suite_fermion_comm(cfg) -> list[dict]:
    E = cfg.cutoff
    halves = [Fraction(k, 2) for k in range(-9, 10, 2)]
    wide = E + 12
    out = []
    for kind in ("+-", "++", "--"):
        fails = []
        s1, s2 = (1, -1) if kind == "+-" else ((1, 1) if kind == "++" else (-1, -1))
        for n in (-1, 0, 1):
            for r in halves:
                for s in halves:
                    limit = E - abs(r) - abs(s)
                    for mu in partitions_up_to(int(limit)) if limit >= 0 else []:
                        v = fock.FockVector.basis(mu, n, wide)
                        a = fock.apply_psi(r, s1, fock.apply_psi(s, s2, v))
                        b = fock.apply_psi(s, s2, fock.apply_psi(r, s1, v))
                        total = dict(a.coeffs)
                        if a.charge == b.charge:
                            for k, c in b.coeffs.items():
                                total[k] = total.get(k, 0) + c
                        expected = 1 if kind == "+-" and r == -s else 0
                        if expected:
                            total[mu] = total.get(mu, 0) - 1
                        bad = {k: c for k, c in total.items() if c}
                        if bad:
                            fails.append(f"psi{kind[0]}_{r}, psi{kind[1]}_{s} on {list(mu)};{n}")
        out.append(check(f"anticommutator psi{kind[0]} psi{kind[1]}",
                         {"cutoff": E, "max_index": "9/2", "charges": [-1, 0, 1]}, E, fails))
    fails = []
    modes = [m for m in range(-4, 5) if m]
    for m in modes:
        for k in modes:
            limit = E - abs(m) - abs(k)
            for mu in partitions_up_to(limit) if limit >= 0 else []:
                v = fock.FockVector.basis(mu, 0, E)
                a = fock.apply_alpha(m, fock.apply_alpha(k, v))
                b = fock.apply_alpha(k, fock.apply_alpha(m, v))
                diff = a - b
                bad = dict(diff.coeffs)
                if m == -k:
                    bad[mu] = bad.get(mu, 0) - m
                if any(bad.values()):
                    fails.append(f"[alpha_{m}, alpha_{k}] on {list(mu)}")
    out.append(check("boson commutator", {"cutoff": E, "modes": "-4..4"}, E, fails))
    fails = []
    for m in (-3, -2, -1, 1, 2, 3):
        for mu in partitions_up_to(min(E, 6) - abs(m)):
            v = fock.FockVector.basis(mu, 0, min(E, 6))
            if fock.apply_alpha(m, v).coeffs != fock.apply_alpha_fermionic(m, v).coeffs:
                fails.append(f"alpha_{m} on {list(mu)}")
    out.append(check("alpha from fermion bilinears", {"energy": min(E, 6)}, min(E, 6), fails))
    return out


def suite_skew_schur_vev(cfg) -> list[dict]:
    N = cfg.max_size
    fails = []
    t = tau.formal_t(+1, 1, N)
    for nu in partitions_up_to(N):
        v = fock.apply_gamma(-1, t, fock.FockVector.basis(nu, 0, N), N, graded=True)
        for mu in partitions_up_to(N):
            got = v.coefficient(mu)
            want = symfun.skew_schur_in_p(mu, nu) if mu.contains(nu) else symfun.SymFun()
            want = tau.TauSeries.from_symfun(want, N)
            if not isinstance(got, tau.TauSeries):
                got = tau.TauSeries(1, N, {(EMPTY, EMPTY): got} if got else {})
            if got != want:
                fails.append(f"<{list(mu)}|Y_-(x)|{list(nu)}>")
    return [check("skew Schur matrix elements", {"max_size": N}, N, fails)]


def suite_wmu(cfg) -> list[dict]:
    N = cfg.max_size
    fails = []
    for mu in partitions_up_to(N):
        try:
            quantumdim.agree(f"W{list(mu)}",
                             quantumdim.WValue(quantumdim.w_one_product(mu), "product"),
                             quantumdim.WValue(quantumdim.w_one_spec(mu, 1), "principal-spec"),
                             quantumdim.WValue(quantumdim.w_one_spec(mu, 2), "principal-spec"))
        except quantumdim.RouteMismatch as exc:
            fails.append(json.dumps(exc.report()))
    return [check("W_mu three routes", {"max_size": N}, N, fails)]


def suite_key(cfg) -> list[dict]:
    N = cfg.max_size
    route, sym, red = [], [], []
    for mu, nu in quantumdim.ww_pairs(N):
        try:
            quantumdim.agree(f"W{list(mu)},{list(nu)}",
                             quantumdim.WValue(quantumdim.w_two_key(mu, nu), "key-sum"),
                             quantumdim.WValue(quantumdim.w_two_via_E(mu, nu), "E-alphabet"))
        except quantumdim.RouteMismatch as exc:
            route.append(json.dumps(exc.report()))
        if quantumdim.w_two_key(mu, nu) != quantumdim.w_two_key(nu, mu):
            sym.append(f"{list(mu)},{list(nu)}")
    for mu in partitions_up_to(N):
        if quantumdim.w_two_key(mu, EMPTY) != quantumdim.w_one_product(mu):
            red.append(list(mu))
    p = {"max_total": N}
    return [check("key sum vs E alphabet", p, N, route),
            check("symmetry", p, N, sym),
            check("reduction to W_mu", p, N, red)]


def suite_vev_remark(cfg) -> list[dict]:
    M = cfg.order
    normal, printed = [], []
    size = 4
    for mu, nu in quantumdim.ww_pairs(size):
        key = quantumdim.w_two_key(mu, nu)
        # W may start at a negative power of v; the product must reach v^(M - that power)
        mac = quantumdim.macmahon(M - min(0, key.num.low()))
        if quantumdim.w_two_vev(mu, nu, M, "normal") != scalars.expand_v_adic(key, M):
            normal.append(f"{list(mu)},{list(nu)}")
        if quantumdim.w_two_vev(mu, nu, M, "printed") != scalars.expand_v_adic(key * mac, M):
            printed.append(f"{list(mu)},{list(nu)}")
    p = {"max_total": size, "order": M}
    return [check("<mu|q^K Y_-(A) Y_+(A) q^K|nu> = W_{mu,nu}", p, M, normal),
            check("<mu|q^K Y_+(A) Y_-(A) q^K|nu> = MacMahon(q) W_{mu,nu}", p, M, printed)]


def suite_translation(cfg) -> list[dict]:
    E = min(cfg.cutoff, 6)
    states = partitions_up_to(E)
    k_fail, h_fail, comm_fail = [], [], []
    for mu in states:
        v = fock.FockVector.basis(mu, 0, E)
        if fock.apply_K(v).coefficient(mu) != Fraction(kappa(mu), 2):
            k_fail.append(list(mu))
        if fock.apply_H(v).coefficient(mu) != mu.size:
            h_fail.append(list(mu))
    t = tau.formal_t(+1, 1, E)
    for sign in (+1, -1):
        for mu in states:
            v = fock.FockVector.basis(mu, 0, E)
            a = fock.apply_R(1, fock.apply_gamma(sign, t, v, E, graded=True))
            b = fock.apply_gamma(sign, t, fock.apply_R(1, v), E, graded=True)
            if a.charge != b.charge or a.coeffs.keys() != b.coeffs.keys() or \
                    any(a.coeffs[k] != b.coeffs[k] for k in a.coeffs):
                comm_fail.append(f"Gamma{'+' if sign > 0 else '-'} on {list(mu)}")
    out = [check("K eigenvalues kappa/2", {"energy": E}, E, k_fail),
           check("H eigenvalues |mu|", {"energy": E}, E, h_fail),
           check("[R, Gamma_pm] = 0", {"energy": E}, E, comm_fail)]
    constants = {}
    for n in (1, 2, 3):
        fails = []
        seen = set()
        for mu in states:
            v = fock.FockVector.basis(mu, 0, E)
            lhs = fock.apply_R(-n, fock.apply_K(fock.apply_R(n, v))).coefficient(mu)
            rest = (fock.apply_K(v).coefficient(mu) + n * fock.apply_H(v).coefficient(mu)
                    + Fraction(n * n, 2) * fock.apply_charge(v).coefficient(mu))
            seen.add(lhs - rest)
        const = seen.pop() if len(seen) == 1 else None
        if const is None or seen:
            fails.append(f"n={n}: not a scalar")
        elif const != tau.toda_constant(n):
            fails.append(f"n={n}: constant {const}")
        constants[str(n)] = scalars.rational_str(const) if const is not None else None
        out.append(check(f"R^-{n} K R^{n} - K - {n}H - {Fraction(n * n, 2)}alpha_0", {"energy": E, "n": n}, E,
                         fails, {"constant": constants[str(n)]}))
    return out


def suite_hirota_vector(cfg) -> list[dict]:
    E = cfg.cutoff
    out = []
    for r in (-1, 1):
        for q0 in (Fraction(1, 2), Fraction(2, 3)):
            v = fock.apply_word([fock.QK(r + 1, q=q0), fock.Y(-1, quantumdim.a4(), q=q0)],
                                fock.FockVector.vacuum(0, E))
            rep = fock.hirota_vector_check(v, E)
            out.append(check("bilinear vector condition", {"r": r, "q": str(q0), "window": E},
                             E, [f"{[list(a), list(b)]}: {c}" for (a, b), c in rep.residuals.items()],
                             {"checked_pairs": rep.checked_pairs}))
    bad = fock.FockVector(0, {EMPTY: 1, Partition((2, 2)): 1}, 6)
    rep = fock.hirota_vector_check(bad, 6)
    out.append(check("control |0> + |(2,2)> is rejected", {"window": 6}, 6,
                     [] if rep.residuals else ["no residual for a non-decomposable vector"]))
    return out


def suite_kp_pde(cfg) -> list[dict]:
    D = cfg.degree
    out = []
    for r in (-2, -1, 0, 1):
        series = tau.kp_tau_series(r, max(D, 4))
        out.append(_from_report(tau.kp_hirota_pde_check(series, params={"r": r, "degree": max(D, 4)})))
    for r in (-2, -1, 0, 1):
        series = tau.kp_tau_series(r, 6)
        for q0 in (Fraction(1, 2), Fraction(2, 3), Fraction(3)):
            rep = tau.kp_hirota_pde_check(tau.specialize_series(series, q0),
                                          params={"r": r, "degree": 6, "q": str(q0)})
            out.append(_from_report(rep))
    control = tau.TauSeries(1, 6, {(EMPTY, EMPTY): 1, (Partition((1, 1)), EMPTY): 1})
    rep = tau.kp_hirota_pde_check(control)
    out.append(check("control 1 + t1^2 is rejected", {"degree": 6}, 2,
                     [] if not rep["pass"] else ["control passed"]))
    return out


def suite_toda_eq(cfg) -> list[dict]:
    D = cfg.degree
    c = tau.calibrate_toda_constant(D)
    out = [check("calibration on <n|Gamma_+ Gamma_-|n>", {"degree": D}, D - 2, [],
                 {"constant": scalars.rational_str(c)})]
    seq = tau.toda_tau_sequence(2, -1, 1, D)
    out.append(_from_report(tau.toda_equation_check(seq, D, c, params={"r": 2, "charges": [-1, 0, 1], "degree": D})))
    toric = tau.toric_toda_sequence(-1, 1, D)
    out.append(_from_report(tau.toda_equation_check(toric, D, c, label="toda-eq toric",
                                                    params={"charges": [-1, 0, 1], "degree": D})))
    perturbed = dict(seq.taus)
    bump = tau.TauSeries(2, D, {(EMPTY, EMPTY): 1, (Partition((1,)), Partition((1,))): 1}, seq.root)
    perturbed[0] = perturbed[0] * bump
    rep = tau.toda_equation_check(perturbed, D, c)
    out.append(check("control with perturbed tau_0 is rejected", {"degree": D}, D - 2,
                     [] if not rep["pass"] else ["control passed"]))
    return out


def suite_routes(cfg) -> list[dict]:
    D = cfg.degree
    out = []
    for r in ("-2", "-1", "0", "1", "1/2", "2"):
        a = tau.kp_tau_series(Fraction(r), D, "sum")
        b = tau.kp_tau_series(Fraction(r), D, "vev")
        out.append(check("kp sum vs vev", {"r": r, "degree": D}, D, [str(k) for k in a.differences(b)]))
    a, b = tau.conifold_tau(D, "sum"), tau.conifold_tau(D, "vev")
    out.append(check("conifold sum vs vev", {"degree": D}, D, [str(k) for k in a.differences(b)]))
    a, b = tau.toric_tau(D, "sum"), tau.toric_tau(D, "vev")
    out.append(check("toric sum vs vev", {"degree": D}, D, [str(k) for k in a.differences(b)]))
    for label, seq in (("toda r=2", tau.toda_tau_sequence(2, 0, 2, min(D, 3))),
                       ("toric", tau.toric_toda_sequence(0, 2, min(D, 3)))):
        fails = []
        for n, diff in seq.route_differences().items():
            fails += [f"n={n} {k}" for k in diff]
        fails += [f"base {k}" for k in seq.taus[0].differences(seq.base)]
        out.append(check(f"{label}: charge-n vev vs shifted base", {"charges": [0, 1, 2], "degree": min(D, 3)},
                         min(D, 3), fails))
    return out


SUITE_FUNCS: dict[str, Callable] = {
    "fermion-comm": suite_fermion_comm,
    "skew-schur-vev": suite_skew_schur_vev,
    "wmu-identities": suite_wmu,
    "key-identity": suite_key,
    "vev-remark": suite_vev_remark,
    "translation": suite_translation,
    "hirota-vector": suite_hirota_vector,
    "kp-pde": suite_kp_pde,
    "toda-eq": suite_toda_eq,
    "route-agreement": suite_routes,
}


# ---------------------------------------------------------------------------
# commands


def _partition(text):
    if text is None:
        return None
    try:
        return partitions.parse(text)
    except ValueError as exc:
        raise ConfigError(f"bad partition {text!r}: {exc}") from None


def _rational(text) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad rational {text!r}") from None


def cmd_w(cfg) -> tuple[dict, bool]:
    mu = _partition(cfg.partition)
    if mu is not None:
        return {"mu": list(mu), "W": scalars.to_json(quantumdim.w_one_product(mu)),
                "W_text": str(quantumdim.w_one_product(mu))}, True
    return {"table": quantumdim.w_table(cfg.max_size)}, True


def cmd_ww(cfg) -> tuple[dict, bool]:
    mu, nu = _partition(cfg.partition), _partition(cfg.partition2)
    if mu is not None or nu is not None:
        mu, nu = mu or EMPTY, nu or EMPTY
        w = quantumdim.w_two_key(mu, nu)
        return {"mu": list(mu), "nu": list(nu), "W": scalars.to_json(w), "W_text": str(w)}, True
    rows = [{"mu": list(mu), "nu": list(nu), "W": scalars.to_json(quantumdim.w_two_key(mu, nu))}
            for mu, nu in quantumdim.ww_pairs(cfg.max_size)]
    return {"table": rows}, True


def cmd_char(cfg) -> tuple[dict, bool]:
    nu, mu = _partition(cfg.partition), _partition(cfg.partition2)
    if nu is not None and mu is not None:
        if nu.size != mu.size:
            raise ConfigError("character needs partitions of equal size")
        return {"nu": list(nu), "mu": list(mu), "chi": symfun.mn_character(nu, mu)}, True
    size = nu.size if nu is not None else cfg.max_size
    parts = enumerate_partitions(size)
    rows = [{"nu": list(a), "values": [symfun.mn_character(a, b) for b in parts]}
            for a in ([nu] if nu is not None else parts)]
    return {"size": size, "classes": [list(b) for b in parts], "rows": rows}, True


def cmd_tau_kp(cfg) -> tuple[dict, bool]:
    r = _rational(cfg.r)
    series = tau.kp_tau_series(r, cfg.degree)
    out = {"series": series.to_json()}
    if cfg.degree >= 1:
        out["connected_p1"] = scalars.to_json(tau.connected_coefficients(series, (1,), cfg.order))
    return out, True


def _sequence_json(seq) -> dict:
    return {"root": seq.root,
            "taus": {str(n): s.to_json() for n, s in sorted(seq.taus.items())},
            "prefactor_exponents": {str(n): scalars.rational_str(seq.prefactor_exponent(n))
                                    for n in sorted(seq.taus)},
            "routes_agree": all(not d for d in seq.route_differences().values())}


def cmd_tau_toda(cfg) -> tuple[dict, bool]:
    r = _rational(cfg.r)
    if r == 0:
        raise ConfigError("r must be nonzero")
    seq = tau.toda_tau_sequence(r, cfg.n_min, cfg.n_max, cfg.degree)
    out = _sequence_json(seq)
    return out, out["routes_agree"]


def cmd_conifold(cfg) -> tuple[dict, bool]:
    return {"series": tau.conifold_tau(cfg.degree).to_json()}, True


def cmd_toric(cfg) -> tuple[dict, bool]:
    out = {"series": tau.toric_tau(cfg.degree).to_json()}
    seq = tau.toric_toda_sequence(cfg.n_min, cfg.n_max, cfg.degree)
    out["sequence"] = _sequence_json(seq)
    return out, out["sequence"]["routes_agree"]


def cmd_verify(cfg) -> tuple[dict, bool]:
    names = []
    for s in cfg.suite or ["all"]:
        if s == "all":
            names.extend(SUITES)
        elif s in SUITES:
            names.append(s)
        else:
            raise ConfigError(f"unknown suite {s!r}")
    names = list(dict.fromkeys(names))
    results = []
    for name in names:
        checks = SUITE_FUNCS[name](cfg)
        results.append({"suite": name, "pass": all(c["pass"] for c in checks), "checks": checks})
    return {"suites": results}, all(r["pass"] for r in results)


HANDLERS = {"w": cmd_w, "ww": cmd_ww, "char": cmd_char, "tau-kp": cmd_tau_kp,
            "tau-toda": cmd_tau_toda, "conifold": cmd_conifold, "toric": cmd_toric,
            "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tauforge", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--partition", help="parts separated by commas, e.g. 3,1")
    p.add_argument("--partition2", help="second partition (nu)")
    p.add_argument("--r", default="1", help="rational parameter a/b")
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--cutoff", type=int, default=10)
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--max-size", dest="max_size", type=int, default=6)
    p.add_argument("--n-min", dest="n_min", type=int, default=-1)
    p.add_argument("--n-max", dest="n_max", type=int, default=1)
    p.add_argument("--suite", action="append", help="suite name or 'all' (repeatable)")
    p.add_argument("--json", dest="json_path", help="write the JSON payload to this file")
    p.add_argument("--format", choices=("json", "text"), default="json")
    return p


def config_dict(cfg) -> dict:
    return {"command": cfg.command, "partition": cfg.partition, "partition2": cfg.partition2,
            "r": cfg.r, "degree": cfg.degree, "cutoff": cfg.cutoff, "order": cfg.order,
            "max_size": cfg.max_size, "n_min": cfg.n_min, "n_max": cfg.n_max,
            "suites": cfg.suite or (["all"] if cfg.command == "verify" else []),
            "format": cfg.format}


def _validate(cfg):
    for name in ("degree", "cutoff", "order", "max_size"):
        if getattr(cfg, name) < 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be nonnegative")
    if cfg.n_min > cfg.n_max:
        raise ConfigError("--n-min exceeds --n-max")
    _rational(cfg.r)


def render_text(payload, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        if "suite" in payload and "checks" in payload:
            lines.append(f"{pad}{payload['suite']}: {'PASS' if payload['pass'] else 'FAIL'}")
            for c in payload["checks"]:
                lines.append(f"{pad}  [{'ok' if c['pass'] else 'FAIL'}] {c['check']} "
                             f"{json.dumps(c['params'], sort_keys=True)}")
            return "\n".join(lines)
        for k, v in payload.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(payload, list):
        for item in payload:
            lines.append(render_text(item, indent) if isinstance(item, (dict, list)) else f"{pad}- {item}")
    else:
        lines.append(f"{pad}{payload}")
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        cfg = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _validate(cfg)
        result, ok = HANDLERS[cfg.command](cfg)
    except ConfigError as exc:
        payload = {"schema": tau.REPORT_SCHEMA, "config": config_dict(cfg), "error": str(exc)}
        print(json.dumps(payload, sort_keys=True) if cfg.format == "json" else f"error: {exc}",
              file=sys.stderr)
        return 2
    payload = {"schema": tau.REPORT_SCHEMA, "config": config_dict(cfg), "pass": ok, "result": result}
    text = json.dumps(payload, indent=1, sort_keys=True)
    if cfg.json_path:
        with open(cfg.json_path, "w") as fh:
            fh.write(text + "\n")
    if cfg.format == "json":
        print(text)
    else:
        print(render_text(payload))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
