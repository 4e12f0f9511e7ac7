"""Command-line front end.

Exit codes: 0 result, 1 well-formed "no result", 2 usage or parse error,
3 budget or bound exceeded, 4 a ``--verify`` re-check disagreed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import abelian, covers, homsearch, intpoly, permgrp, present, rescert
from .words import (
    Endomorphism,
    WordSyntaxError,
    Word,
    compose,
    format_endomorphism,
    format_word,
    parse_endomorphism,
    parse_word,
)

OK, NO_RESULT, USAGE, EXCEEDED, VERIFY_FAILED = 0, 1, 2, 3, 4
DEFAULT_MAX_N = 10 ** 5


class UsageError(ValueError):
    pass


class VerificationFailed(AssertionError):
    pass


@dataclass
class CommandConfig:
    command: str
    action: str | None = None
    word: str | None = None
    n: str | None = None
    presentation: str | None = None
    targets: list[str] = field(default_factory=list)
    budget: int | None = None
    max_n: int | None = DEFAULT_MAX_N
    endo: str | None = None
    witnesses: list[str] = field(default_factory=list)
    subgroup: str | None = None
    functional: str | None = None
    modulus: int | None = None
    mod_p: int | None = None
    p: int = 2
    D: int | None = None
    classify: bool = False
    verify: bool = False
    fmt: str = "json"
    threads: int = 1

    def validate(self):
        need_word = {
            ("present", "cyclic"), ("present", "two-gen"), ("poly", "assoc"), ("fbc", "check"),
            ("quotient", "find"), ("cover", "present"), ("cover", "degree"), ("magnus", None),
        }
        if (self.command, self.action) in need_word and not self.word:
            raise UsageError(f"{self.command} {self.action or ''} needs --word".replace("  ", " "))
        if self.command == "ab" and not (self.presentation or (self.word and self.n)):
            raise UsageError("ab needs --word with --n, or --presentation")
        if self.command == "rf" and not self.endo:
            raise UsageError("rf needs --endo")
        if self.command == "rf" and self.action == "pullback" and not (self.subgroup or self.functional):
            raise UsageError("rf pullback needs --subgroup or --functional")
        if self.command in ("quotient", "cover") and self.action in ("scan", "find", "degree") and not self.targets:
            raise UsageError(f"{self.command} {self.action} needs --target(s)")
        if self.budget is not None and self.budget < 1:
            raise UsageError("--budget must be positive")
        if self.threads < 1:
            raise UsageError("--threads must be positive")

    def echo(self) -> dict:
        keep = ("word", "n", "presentation", "targets", "budget", "endo", "witnesses", "subgroup",
                "functional", "modulus", "mod_p")
        out = {"command": " ".join(x for x in (self.command, self.action) if x)}
        for k, v in asdict(self).items():
            if k in keep and v not in (None, []):
                out[k] = v
        if self.command == "magnus":
            out.update(p=self.p, D=self.D)
        if self.command == "quotient" and self.action == "find":
            out["max_n"] = self.max_n
        return out


# -- parsing helpers ----------------------------------------------------------


def _n_values(text: str) -> list[int]:
    """``6``, ``4..12`` or ``4,5,9``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad n specification {text!r}") from None


def _family(cfg: CommandConfig) -> present.CyclicWordFamily:
    return present.CyclicWordFamily.parse(cfg.word)


def _targets(cfg: CommandConfig) -> list[permgrp.PermGroup]:
    names = [t.strip() for spec in cfg.targets for t in spec.split(",") if t.strip()]
    if not names:
        raise UsageError("empty target list")
    return [permgrp.group_from_name(t) for t in names]


def _load_presentation(path: str) -> present.Presentation:
    data = json.loads(Path(path).read_text())
    return present.Presentation.from_json(data)


def _presentation_for(cfg: CommandConfig) -> present.Presentation:
    if cfg.presentation:
        return _load_presentation(cfg.presentation)
    if cfg.word and cfg.n:
        (n,) = _n_values(cfg.n)
        return present.cyclic_presentation(_family(cfg), n)
    raise UsageError("need --presentation, or --word with --n")


def _fbc_or_fail(family) -> present.FreeByCyclicData | None:
    return present.free_by_cyclic_check(family.normalized())


def _check(cond: bool, what: str):
    if not cond:
        raise VerificationFailed(what)


# -- subcommands ----------------------------------------------------------------


def cmd_present(cfg: CommandConfig) -> tuple[int, dict]:
    family = _family(cfg)
    (n,) = _n_values(cfg.n or str(family.d))
    if cfg.action == "cyclic":
        pres = present.cyclic_presentation(family, n)
    else:
        pres = present.h_n_presentation(present.v_to_w(family), n)
    out = pres.to_json()
    if cfg.verify:
        again = present.Presentation.from_json(out)
        _check(again.relators == pres.relators, "presentation round-trip")
    return OK, out


def cmd_poly(cfg: CommandConfig) -> tuple[int, dict]:
    family = _family(cfg)
    f = intpoly.associated_polynomial(family)
    out: dict = {"coefficients": list(f.coefficients), "polynomial": str(f)}
    if cfg.classify:
        cls = intpoly.classify_cyclotomic_type(f)
        out["classification"] = cls.to_json()
        if cfg.verify and cls.kind != "other":
            _check(cls.reconstruct() == f, "classification reconstructs f")
    if cfg.n:
        out["resultants"] = {str(n): intpoly.resultant_with_cyclic(f, n) for n in _n_values(cfg.n)}
    return OK, out


def _ab_verify(family, n: int, st: abelian.AbelianGroupStructure):
    pres = present.cyclic_presentation(family, n)
    coeffs = intpoly.associated_polynomial(family).coefficients
    _check(abelian.relation_matrix(pres) == abelian.circulant(coeffs, n), "relation matrix is circulant")
    res = intpoly.resultant_with_cyclic(intpoly.associated_polynomial(family), n)
    if st.free_rank == 0:
        _check(abs(res) == st.order(), "order equals |Res(f, t^n - 1)|")
    else:
        _check(res == 0, "resultant vanishes for infinite abelianization")


def cmd_ab(cfg: CommandConfig) -> tuple[int, dict]:
    if cfg.presentation:
        pres = _load_presentation(cfg.presentation)
        st = abelian.abelianization(pres)
        if cfg.verify:
            M = abelian.relation_matrix(pres)
            sf = abelian.smith_normal_form(M)
            _check(sf.U @ M @ sf.V == sf.D and abelian.is_smith_form(sf.D), "Smith form transforms")
        return OK, st.to_json()
    family = _family(cfg)
    ns = _n_values(cfg.n)
    rows = []
    for n in ns:
        st = abelian.abelianization(present.cyclic_presentation(family, n))
        if cfg.verify:
            _ab_verify(family, n, st)
        rows.append((n, st))
    if len(rows) == 1:
        return OK, rows[0][1].to_json()
    return OK, {"results": [{"n": n, **st.to_json()} for n, st in rows]}


def _fbc_json(fbc: present.FreeByCyclicData) -> dict:
    names = [f"y{i}" for i in range(fbc.rank)]
    return {
        "free_by_cyclic": True,
        "rank": fbc.rank,
        "alpha": format_endomorphism(fbc.alpha, names),
        "alpha_inverse": format_endomorphism(fbc.alpha_inverse, names),
    }


def cmd_fbc(cfg: CommandConfig) -> tuple[int, dict]:
    fbc = _fbc_or_fail(_family(cfg))
    if fbc is None:
        return NO_RESULT, {"free_by_cyclic": False, "reason": "not free-by-cyclic"}
    if cfg.verify:
        ident = Endomorphism.identity(fbc.rank)
        _check(compose(fbc.alpha, fbc.alpha_inverse) == ident == compose(fbc.alpha_inverse, fbc.alpha),
               "alpha_inverse inverts alpha")
    return OK, _fbc_json(fbc)


def cmd_quotient(cfg: CommandConfig) -> tuple[int, dict]:
    if cfg.action == "scan":
        pres = _presentation_for(cfg)
        reports = [homsearch.scan_quotients(pres, T, cfg.budget) for T in _targets(cfg)]
        out = {"reports": [r.to_json() for r in reports]}
        if cfg.verify:
            for r in reports:
                if r.sample_surjection is not None:
                    h = homsearch.verify_hom(pres, r.sample_surjection.images)
                    _check(h is not None and h.is_surjective(), f"sample surjection onto {r.target}")
        found = any(r.surjection_count for r in reports)
        return (OK if found else NO_RESULT), out
    family = _family(cfg).normalized()
    fbc = present.free_by_cyclic_check(family)
    if fbc is None:
        return NO_RESULT, {"reason": "not free-by-cyclic; the cover pipeline does not apply"}
    try:
        sched = covers.simple_quotient_schedule(family, fbc, _targets(cfg), cfg.budget, max_n=cfg.max_n)
    except covers.NoFiberSurjection as exc:
        return NO_RESULT, {"reason": str(exc), "note": homsearch.ABSENCE_NOTE}
    out = sched.to_json()
    out["fiber"] = _fbc_json(fbc)
    if cfg.verify:
        for cs in sched.surjections:
            _check(covers.verify_cover_surjection(cs, fbc), f"surjection onto {cs.target} at n = {cs.n}")
        second = sched.n + sched.step
        for cs in covers.lift_schedule_at(sched, family, fbc, second):
            _check(covers.verify_cover_surjection(cs, fbc), f"surjection onto {cs.target} at n = {second}")
        out["verified_at"] = [sched.n, second]
    return OK, out


def cmd_cover(cfg: CommandConfig) -> tuple[int, dict]:
    family = _family(cfg).normalized()
    fbc = present.free_by_cyclic_check(family)
    if fbc is None:
        return NO_RESULT, {"reason": "not free-by-cyclic"}
    G = covers.SemidirectOverZ.from_fbc(fbc)
    if cfg.action == "present":
        (n,) = _n_values(cfg.n or "1")
        return OK, covers.cover_presentation(G, n).to_json()
    fiber = present.free_presentation(fbc.rank, [f"y{i}" for i in range(fbc.rank)])
    rows = []
    for T in _targets(cfg):
        phi = homsearch.find_surjection(fiber, T, cfg.budget)
        if phi is None:
            rows.append({"target": T.name, "period": None, "note": homsearch.ABSENCE_NOTE})
            continue
        period = covers.cover_degree_for_target(G, phi)
        if cfg.verify:
            imgs = phi.images
            for _ in range(period):
                imgs = covers.precompose(imgs, fbc.alpha, T.degree)
            _check(imgs == phi.images, f"period of the map onto {T.name}")
        rows.append({"target": T.name, "period": period, "fiber_map": phi.to_json()})
    code = OK if all(r["period"] for r in rows) else NO_RESULT
    return code, {"degrees": rows}


def _endo(cfg: CommandConfig):
    theta, names = parse_endomorphism(cfg.endo)
    if "t" in names:
        raise UsageError("'t' is reserved for the stable letter")
    return theta, names


def cmd_rf(cfg: CommandConfig) -> tuple[int, dict]:
    theta, names = _endo(cfg)
    if cfg.action == "pullback":
        if cfg.subgroup:
            H = rescert.FiniteIndexSubgroup.from_json(json.loads(Path(cfg.subgroup).read_text()), names)
        else:
            coeffs = [int(c) for c in cfg.functional.split(",")]
            if len(coeffs) != theta.rank or not cfg.modulus:
                raise UsageError("--functional needs one coefficient per generator and --modulus")
            H = rescert.FiniteIndexSubgroup.from_functional(coeffs, cfg.modulus)
        orb = rescert.pullback_orbit(theta, H)
        out = orb.to_json(names)
        out["pure_period"] = orb.period if orb.preperiod == 0 else None
        out["preimage_index_preserved"] = rescert.image_acts_transitively(theta, H)
        if cfg.verify:
            _check(_orbit_recheck(theta, orb), "pullback chain membership re-check")
        return OK, out
    M, det = rescert.abelianized_matrix(theta)
    out: dict = {"abelianized_matrix": M.tolist(), "det": det}
    if cfg.mod_p:
        ker = rescert.mod_p_kernel(M, cfg.mod_p)
        out["mod_p"] = {
            "p": cfg.mod_p,
            "rank": theta.rank - len(ker),
            "invertible": not ker,
            "kernel": [list(v) for v in ker],
            "kernel_classes": [format_word(_class_word(v, theta.rank), names) for v in ker],
        }
        if ker:
            out["note"] = f"induced map on (C_{cfg.mod_p})^{theta.rank} is singular; no certificate at this prime"
            return NO_RESULT, out
    if det == 0:
        out["note"] = "det = 0: singular mod every prime, no certificate"
        out["per_prime"] = rescert.mod_p_report(M, (2, 3, 5, 7))
        return NO_RESULT, out
    full = names + ("t",)
    witnesses = [parse_word(w, full) for w in cfg.witnesses]
    cert = rescert.rf_certificate(theta, witnesses, names)
    out = cert.to_json() | ({"mod_p": out["mod_p"]} if "mod_p" in out else {})
    if cfg.verify:
        problems = rescert.verify_certificate(cert)
        _check(not problems, f"certificate fields {problems}")
    return OK, out


def _class_word(v: Sequence[int], rank: int) -> Word:
    from .words import reduce

    return reduce([(i, e) for i, e in enumerate(v) if e], rank)


def _orbit_recheck(theta, orb: rescert.PullbackOrbit, samples: int = 50) -> bool:
    import random

    rng = random.Random(0)
    r = theta.rank
    for H, K in zip(orb.chain, orb.chain[1:]):
        for _ in range(samples):
            from .words import reduce

            u = reduce([(rng.randrange(r), rng.choice((1, -1))) for _ in range(rng.randrange(12))], r)
            if K.contains(u) != H.contains(theta(u)):
                return False
    return True


def cmd_magnus(cfg: CommandConfig) -> tuple[int, dict]:
    g = parse_word(cfg.word)
    if cfg.D is None:
        D = rescert.separating_degree(g, cfg.p)
        series = rescert.magnus_expand(g, cfg.p, D)
        out = {"separating_degree": D, "series": series.to_json()}
        mono, coeff = series.lowest_degree_term()
        if cfg.verify:
            _check(rescert.unitriangular_coefficient(g, mono, cfg.p) == coeff, "matrix-route coefficient")
        return OK, out
    series = rescert.magnus_expand(g, cfg.p, cfg.D)
    return OK, {"is_one": series.is_one(), "series": series.to_json()}


HANDLERS: dict[str, Callable[[CommandConfig], tuple[int, dict]]] = {
    "present": cmd_present,
    "poly": cmd_poly,
    "ab": cmd_ab,
    "fbc": cmd_fbc,
    "quotient": cmd_quotient,
    "cover": cmd_cover,
    "rf": cmd_rf,
    "magnus": cmd_magnus,
}


# -- argument parsing --------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    p.add_argument("--format", dest="fmt", choices=("json", "text"), default="json")
    p.add_argument("--verify", action="store_true", help="re-run the independent check and fail on mismatch")
    p.add_argument("--threads", type=int, default=1, help="hint only; results do not depend on it")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cycpres", description="Cyclically presented groups and friends.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("present", help="emit G_n(v) or H_n(w) as JSON")
    p.add_argument("action", choices=("cyclic", "two-gen"))
    p.add_argument("--word", required=True)
    p.add_argument("--n")
    _common(p)

    p = sub.add_parser("poly", help="associated polynomial of v")
    p.add_argument("action", choices=("assoc",))
    p.add_argument("--word", required=True)
    p.add_argument("--classify", action="store_true")
    p.add_argument("--n", help="also report Res(f, t^n - 1); accepts 6, 4..12 or 4,5,9")
    _common(p)

    p = sub.add_parser("ab", help="abelianization")
    p.add_argument("--word")
    p.add_argument("--n", help="6, 4..12 or 4,5,9")
    p.add_argument("--presentation")
    _common(p)

    p = sub.add_parser("fbc", help="free-by-cyclic check")
    p.add_argument("action", choices=("check",))
    p.add_argument("--word", required=True)
    _common(p)

    p = sub.add_parser("quotient", help="finite quotients")
    p.add_argument("action", choices=("scan", "find"))
    p.add_argument("--word")
    p.add_argument("--n")
    p.add_argument("--presentation")
    p.add_argument("--target", "--targets", dest="targets", action="append", default=[])
    p.add_argument("--budget", type=int)
    p.add_argument("--max-n", dest="max_n", type=int, default=DEFAULT_MAX_N)
    _common(p)

    p = sub.add_parser("cover", help="cyclic covers of the free-by-cyclic group")
    p.add_argument("action", choices=("present", "degree"))
    p.add_argument("--word", required=True)
    p.add_argument("--n")
    p.add_argument("--target", "--targets", dest="targets", action="append", default=[])
    p.add_argument("--budget", type=int)
    _common(p)

    p = sub.add_parser("rf", help="ascending HNN extensions of free groups")
    p.add_argument("action", choices=("certificate", "pullback"))
    p.add_argument("--endo", required=True)
    p.add_argument("--witness", dest="witnesses", action="append", default=[])
    p.add_argument("--mod-p", dest="mod_p", type=int)
    p.add_argument("--subgroup")
    p.add_argument("--functional", help="comma-separated images of the generators in Z/modulus")
    p.add_argument("--modulus", type=int)
    _common(p)

    p = sub.add_parser("magnus", help="truncated Magnus expansion mod p")
    p.add_argument("--word", required=True)
    p.add_argument("--p", type=int, default=2)
    p.add_argument("--D", type=int)
    _common(p)
    return parser


def parse_config(argv: Sequence[str]) -> CommandConfig:
    ns = vars(build_parser().parse_args(list(argv)))
    cfg = CommandConfig(**{k: v for k, v in ns.items() if k in CommandConfig.__dataclass_fields__})
    env = os.environ.get("CYCPRES_BUDGET")
    if env and cfg.budget is None and cfg.command in ("quotient", "cover"):
        try:
            cfg.budget = int(env)
        except ValueError:
            raise UsageError(f"CYCPRES_BUDGET must be an integer, got {env!r}") from None
    cfg.validate()
    return cfg


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (int, str)) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_flat(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines)


def _flat(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(str(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}" if not v else ", ".join(f"{k}={_flat(x)}" for k, x in v.items())
    return "none" if v is None else str(v)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"cycpres: error: {exc}", file=stderr)
        return USAGE
    try:
        code, body = HANDLERS[cfg.command](cfg)
    except (homsearch.BudgetExceeded, rescert.BoundExceeded, covers.DegreeTooLarge) as exc:
        code, body = EXCEEDED, {"error": str(exc)}
    except VerificationFailed as exc:
        code, body = VERIFY_FAILED, {"error": f"verification failed: {exc}"}
    except rescert.TheoremInapplicable as exc:
        code, body = NO_RESULT, {"error": str(exc)}
    except (UsageError, WordSyntaxError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"cycpres: error: {exc}", file=stderr)
        return USAGE
    report = {"input": cfg.echo(), **body}
    if cfg.fmt == "json":
        print(json.dumps(report, indent=2), file=stdout)
    else:
        print(render_text(report), file=stdout)
    if code == VERIFY_FAILED:
        print(f"cycpres: {body['error']}", file=stderr)
    return code


def main() -> None:
    sys.exit(run())
