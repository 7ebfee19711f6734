"""End-to-end replay: l = 0 case, bound chain, three reduction rounds, brute force.

The result is a :class:`Certificate` that serializes to JSON (all integers and
reals as decimal strings) and can be re-checked by :func:`verify_certificate`.
"""

from __future__ import annotations

import json
import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .bigreal import (
    DEFAULT_POLICY,
    GAMMA,
    CertifiedReal,
    Expr,
    PrecisionExhausted,
    PrecisionPolicy,
    cr_const,
    cr_log,
    describe,
    fraction_to_sci,
    parse_decimal,
)
from .matveev import (
    N_START,
    bound_chain_report,
    log_eta3_below_one,
    nonvanishing_guard,
    solve_log_bound,
)
from .reduction import (
    CONVERGENT_CAP,
    ContinuedFractionExpansion,
    DegenerateFailure,
    ReductionInstance,
    cf_past,
    convergent_bracketing,
    dujella_petho,
    epsilon_at,
    legendre_fallback,
    max_partial_quotient,
    w_bound_from,
)
from .search import CLAIMED_SOLUTIONS, SolutionTuple, brute_force, case_ell_zero, three_times_pell_never_power

log = logging.getLogger(__name__)

STAGES = (
    "ell_zero",
    "bound_chain",
    "absolute_bound",
    "reduce_n_minus_m",
    "reduce_n_minus_ell",
    "reduce_n",
    "brute_force",
)

ALPHA = Expr.constant("alpha")
# right-hand constants A in 0 < |u gamma - v + mu| < A alpha^-w for the three rounds
ROUND_A = {"reduce_n_minus_m": 10, "reduce_n_minus_ell": 6, "reduce_n": 5}
# shifts n - m where log g(x)/log alpha lies in Z + Z gamma
DEGENERATE_SHIFTS = (1, 2)


class StageFailure(Exception):
    def __init__(self, stage: str, reason: str):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason


@dataclass(frozen=True)
class PipelineConfig:
    n_threshold: int = 150
    m_big: int = 4 * 10**43
    precision: PrecisionPolicy = DEFAULT_POLICY
    shift_cap_nm: int = 200
    output_format: str = "json"
    expected_solutions: frozenset = CLAIMED_SOLUTIONS

    def __post_init__(self):
        if self.n_threshold < 1:
            raise ValueError("n_threshold must be at least 1")
        if self.m_big < 6:
            raise ValueError("m_big must be at least 6")
        if self.output_format not in ("json", "text"):
            raise ValueError("output_format must be json or text")


@dataclass
class Certificate:
    tool_version: str
    precision_policy: dict
    config: dict
    stage_records: list = field(default_factory=list)
    final_solution_set: list = field(default_factory=list)
    verdict: str = "failed"
    failure: dict | None = None

    def stage(self, name: str) -> dict:
        for rec in self.stage_records:
            if rec["stage"] == name:
                return rec
        raise KeyError(name)

    def to_dict(self) -> dict:
        out = {
            "tool_version": self.tool_version,
            "precision_policy": {k: str(v) for k, v in self.precision_policy.items()},
            "config": self.config,
            "stage_records": self.stage_records,
            "final_solution_set": [[str(x) for x in t] for t in self.final_solution_set],
            "verdict": self.verdict,
        }
        if self.failure is not None:
            out["failure"] = self.failure
        return out


# -- mu expressions ---------------------------------------------------------------

_pow_lock = threading.Lock()
_pow_cache: dict[int, list[CertifiedReal]] = {}


def inv_alpha_pow(x: int, bits: int) -> CertifiedReal:
    """alpha^-x = (sqrt 2 - 1)^x, cached per precision."""
    powers = _pow_cache.get(bits)
    if powers is None or len(powers) <= x:
        with _pow_lock:
            powers = _pow_cache.setdefault(bits, [CertifiedReal.exact(1, bits)])
            base = -cr_const("beta", bits)
            while len(powers) <= x:
                powers.append(powers[-1] * base)
    return powers[x]


def mu_expr(shifts: tuple) -> Expr:
    """mu for round 1 (no shift), round 2 (x = n-m) or round 3 (x1, x2)."""
    shifts = tuple(shifts)

    def evaluate(bits: int) -> CertifiedReal:
        work = bits + 16
        den = CertifiedReal.exact(1, work)
        for x in shifts:
            den = den + inv_alpha_pow(x, work)
        value = cr_log(cr_const("sqrt2", work) / den, work) / cr_const("log_alpha", work)
        return value.with_prec(bits)

    if not shifts:
        name = "log(sqrt2)/log(alpha)"
    elif len(shifts) == 1:
        name = f"log(g({shifts[0]}))/log(alpha)"
    else:
        name = f"log(phi({shifts[0]},{shifts[1]}))/log(alpha)"
    return Expr(name, evaluate)


# -- record helpers -------------------------------------------------------------------


def _s(x) -> str:
    return str(x)


def _real(x: CertifiedReal) -> dict:
    d = describe(x)
    d["upper"] = fraction_to_sci(x.upper, 30, "up")
    d["bits"] = str(d["bits"])
    return d


def reduction_record(shifts, outcome) -> dict:
    return {
        "shifts": [_s(x) for x in shifts],
        "method": "reduction",
        "convergent_index": _s(outcome.convergent_index),
        "q_used": _s(outcome.q_used),
        "epsilon": _real(outcome.epsilon),
        "epsilon_lower": fraction_to_sci(outcome.epsilon_lower, 30, "down"),
        "bits": _s(outcome.bits),
        "w_bound": _s(outcome.w_bound),
    }


def fallback_record(shift: int, cf: ContinuedFractionExpansion, m_big: int, A: int) -> dict:
    br = convergent_bracketing(cf, m_big)
    a_max = max_partial_quotient(cf, br.upper)
    w = legendre_fallback(cf, m_big, A, ALPHA, br.upper)
    return {
        "shifts": [_s(shift)],
        "method": "legendre",
        "bracket": [_s(br.lower), _s(br.upper)],
        "tie": br.tie,
        "a_max": _s(a_max),
        "inequality": f"alpha^w < {A} * {a_max + 2} * {m_big}",
        "w_bound": _s(w),
    }


def _reduce(stage: str, shifts: tuple, cf, cfg: PipelineConfig) -> dict:
    inst = ReductionInstance(GAMMA, mu_expr(shifts), ROUND_A[stage], ALPHA, cfg.m_big)
    try:
        outcome = dujella_petho(inst, cf, cfg.precision)
    except PrecisionExhausted as exc:
        raise StageFailure(stage, f"shifts {list(shifts)}: {exc}") from exc
    if isinstance(outcome, DegenerateFailure):
        raise StageFailure(stage, f"shifts {list(shifts)}: {outcome.reason}")
    return reduction_record(shifts, outcome)


def structural_degeneracy_notes(bits: int = 256) -> list[str]:
    """Certify mu(1) = 0 and mu(2) = 1 - gamma numerically (exact identities below)."""
    mu1 = mu_expr((1,))(bits)
    mu2 = mu_expr((2,))(bits)
    gamma = GAMMA(bits)
    tiny = Fraction(1, 1 << (bits - 32))
    ok1 = abs(mu1) < tiny
    ok2 = abs(mu2 - (1 - gamma)) < tiny
    if not (ok1 and ok2):
        raise StageFailure("reduce_n_minus_ell", "degenerate shift identities not confirmed")
    return [
        "x=1: alpha + 1 = sqrt2 * alpha, so g(1) = sqrt2 / (1 + 1/alpha) = 1 and mu = 0.",
        "x=2: alpha^2 + 1 = 2 sqrt2 * alpha, so g(2) = alpha / 2 and mu = 1 - gamma.",
        "In both cases eps <= 0 for every convergent; the Legendre bound is used instead.",
    ]


# -- stages -------------------------------------------------------------------------


def stage_ell_zero(cfg: PipelineConfig) -> dict:
    sols, notes = case_ell_zero()
    expected = sorted(t for t in cfg.expected_solutions if t.ell == 0)
    ok = sols == expected and three_times_pell_never_power(cfg.n_threshold)
    return {
        "stage": "ell_zero",
        "solutions": [[_s(x) for x in t.as_list()] for t in sols],
        "notes": notes,
        "three_p_n_never_power_of_two": three_times_pell_never_power(cfg.n_threshold),
        "ok": ok,
    }


def stage_bound_chain(cfg: PipelineConfig) -> tuple[dict, CertifiedReal]:
    report = bound_chain_report()
    notes: list = []
    for form in ("lambda1", "lambda2", "lambda3"):
        nonvanishing_guard(form, notes=notes)
    ok = report.ok and all(n["holds"] for n in notes)
    rec = {
        "stage": "bound_chain",
        "n_start": _s(N_START),
        "checks": report.checks,
        "intermediate": {k: _real(v) for k, v in report.values.items()},
        "coefficients": [
            {
                "quantity": K.quantity,
                "log_power_k": _s(K.log_power_k),
                "C": _real(K.coefficient_C),
                "target_constant": fraction_to_sci(K.target_constant, 6),
                "within_target": K.within_target(),
            }
            for K in (report.k1, report.k2, report.k3)
        ],
        "nonvanishing": notes,
        "ok": ok,
    }
    if not ok:
        raise StageFailure("bound_chain", "a side condition or coefficient check failed")
    return rec, report.k3.coefficient_C


def stage_absolute_bound(cfg: PipelineConfig, k3: CertifiedReal) -> tuple[dict, int]:
    n_abs = solve_log_bound(k3, 3)
    # a < 2n + 1 <= 2 n_abs - 1, so u = a + 1 <= M needs 2 n_abs <= M
    ok = 2 * n_abs < cfg.m_big
    rec = {
        "stage": "absolute_bound",
        "C_upper": fraction_to_sci(k3.upper, 30, "up"),
        "log_power_k": "3",
        "n_abs": _s(n_abs),
        "a_plus_one_below": _s(2 * n_abs - 1),
        "m_big": _s(cfg.m_big),
        "ok": ok,
    }
    if not ok:
        raise StageFailure("absolute_bound", f"n < {n_abs} does not give a + 1 < M = {cfg.m_big}")
    return rec, n_abs


def stage_round1(cfg: PipelineConfig, cf) -> tuple[dict, int]:
    rec = _reduce("reduce_n_minus_m", (), cf, cfg)
    bound = int(rec["w_bound"])
    if bound > cfg.shift_cap_nm:
        raise StageFailure("reduce_n_minus_m", f"bound {bound} exceeds shift cap {cfg.shift_cap_nm}")
    return {
        "stage": "reduce_n_minus_m",
        "A": _s(ROUND_A["reduce_n_minus_m"]),
        "M": _s(cfg.m_big),
        "records": [rec],
        "bound": _s(bound),
        "note": f"n - m < {bound}",
    }, bound


def stage_round2(cfg: PipelineConfig, cf, s1: int) -> tuple[dict, int]:
    notes = structural_degeneracy_notes()
    records = []
    for x in range(s1 + 1):
        if x in DEGENERATE_SHIFTS:
            records.append(fallback_record(x, cf, cfg.m_big, ROUND_A["reduce_n_minus_ell"]))
        else:
            records.append(_reduce("reduce_n_minus_ell", (x,), cf, cfg))
    bound = max(int(r["w_bound"]) for r in records)
    return {
        "stage": "reduce_n_minus_ell",
        "A": _s(ROUND_A["reduce_n_minus_ell"]),
        "M": _s(cfg.m_big),
        "notes": notes,
        "records": records,
        "bound": _s(bound),
        "note": f"n - l < {bound}",
    }, bound


def round3_pairs(s1: int, s2: int):
    """Lexicographic (x1, x2) with x1 = n - m <= x2 = n - l."""
    for x1 in range(s1 + 1):
        for x2 in range(x1, s2 + 1):
            yield x1, x2


def stage_round3(cfg: PipelineConfig, cf, s1: int, s2: int) -> tuple[dict, int]:
    records = []
    eta_ok = True
    for x1, x2 in round3_pairs(s1, s2):
        eta_ok = eta_ok and log_eta3_below_one((x1, x2))
        records.append(_reduce("reduce_n", (x1, x2), cf, cfg))
    bound = max(int(r["w_bound"]) for r in records)
    # a solution with n > 150 would need n < bound <= 151
    contradiction = bound <= N_START
    rec = {
        "stage": "reduce_n",
        "A": _s(ROUND_A["reduce_n"]),
        "M": _s(cfg.m_big),
        "log_eta3_below_one": eta_ok,
        "records": records,
        "bound": _s(bound),
        "note": (f"n < {bound}, contradicting n > {N_START - 1}" if contradiction
                 else f"n < {bound} does not contradict n > {N_START - 1}"),
        "ok": contradiction and eta_ok,
    }
    if not eta_ok:
        raise StageFailure("reduce_n", "|log eta_3| < 1 could not be certified for some shift pair")
    return rec, bound


def stage_brute_force(cfg: PipelineConfig, s3: int) -> tuple[dict, list]:
    threshold = max(s3, cfg.n_threshold)
    sols = brute_force(threshold)
    expected = sorted(cfg.expected_solutions)
    extra = [t.as_list() for t in sols if t not in cfg.expected_solutions]
    missing = [t.as_list() for t in expected if t not in set(sols)]
    rec = {
        "stage": "brute_force",
        "threshold": _s(threshold),
        "solutions": [[_s(x) for x in t.as_list()] for t in sols],
        "expected": [[_s(x) for x in t.as_list()] for t in expected],
        "unexpected": [[_s(x) for x in t] for t in extra],
        "missing": [[_s(x) for x in t] for t in missing],
        "matches_expected": not extra and not missing,
    }
    return rec, sols


def shared_gamma_cf(cfg: PipelineConfig) -> ContinuedFractionExpansion:
    return cf_past(GAMMA, 6 * cfg.m_big, CONVERGENT_CAP, cfg.precision)


def run_pipeline(cfg: PipelineConfig = PipelineConfig(), stop_after: str | None = None) -> Certificate:
    """Run every stage in order; any failure yields verdict ``failed`` with diagnostics."""
    if stop_after is not None and stop_after not in STAGES:
        raise ValueError(f"unknown stage {stop_after!r}; expected one of {STAGES}")
    cert = Certificate(
        tool_version=__version__,
        precision_policy=cfg.precision.as_dict(),
        config={
            "n_threshold": _s(cfg.n_threshold),
            "m_big": _s(cfg.m_big),
            "shift_cap_nm": _s(cfg.shift_cap_nm),
        },
    )

    def done(name: str) -> bool:
        return stop_after == name

    try:
        rec = stage_ell_zero(cfg)
        cert.stage_records.append(rec)
        if not rec["ok"]:
            raise StageFailure("ell_zero", "l = 0 replay disagrees with the expected l = 0 solutions")
        if done("ell_zero"):
            return _incomplete(cert, stop_after)

        rec, k3 = stage_bound_chain(cfg)
        cert.stage_records.append(rec)
        if done("bound_chain"):
            return _incomplete(cert, stop_after)

        rec, _ = stage_absolute_bound(cfg, k3)
        cert.stage_records.append(rec)
        if done("absolute_bound"):
            return _incomplete(cert, stop_after)

        cf = shared_gamma_cf(cfg)
        rec, s1 = stage_round1(cfg, cf)
        rec["gamma_cf"] = {"bits": _s(cf.precision_bits), "terms": _s(cf.certified_terms)}
        cert.stage_records.append(rec)
        log.info("round 1: n - m < %d", s1)
        if done("reduce_n_minus_m"):
            return _incomplete(cert, stop_after)

        rec, s2 = stage_round2(cfg, cf, s1)
        cert.stage_records.append(rec)
        log.info("round 2: n - l < %d", s2)
        if done("reduce_n_minus_ell"):
            return _incomplete(cert, stop_after)

        rec, s3 = stage_round3(cfg, cf, s1, s2)
        cert.stage_records.append(rec)
        log.info("round 3: n < %d", s3)
        if not rec["ok"]:
            raise StageFailure("reduce_n", rec["note"])
        if done("reduce_n"):
            return _incomplete(cert, stop_after)

        rec, sols = stage_brute_force(cfg, s3)
        cert.stage_records.append(rec)
        cert.final_solution_set = [t.as_list() for t in sols]
        if not rec["matches_expected"]:
            raise StageFailure(
                "brute_force",
                f"solution set differs from the expected list: unexpected {rec['unexpected']}, "
                f"missing {rec['missing']}",
            )
        cert.verdict = "verified"
    except StageFailure as exc:
        log.warning("stage %s failed: %s", exc.stage, exc.reason)
        cert.verdict = "failed"
        cert.failure = {"stage": exc.stage, "reason": exc.reason}
    return cert


def _incomplete(cert: Certificate, stage: str) -> Certificate:
    cert.verdict = "incomplete"
    cert.failure = {"stage": stage, "reason": "stopped after this stage on request"}
    return cert


# -- reporting ----------------------------------------------------------------------


def emit_report(cert: Certificate, fmt: str = "json") -> bytes:
    if fmt == "json":
        return (json.dumps(cert.to_dict(), indent=1) + "\n").encode()
    if fmt == "text":
        return _text_report(cert).encode()
    raise ValueError(f"unknown format {fmt!r}")


def _text_report(cert: Certificate) -> str:
    lines = [f"pellsum {cert.tool_version} proof replay", f"precision: {cert.precision_policy}", ""]
    for rec in cert.stage_records:
        name = rec["stage"]
        lines.append(f"== {name} ==")
        if name == "ell_zero":
            lines.extend(f"  {n}" for n in rec["notes"])
        elif name == "bound_chain":
            for check, ok in rec["checks"].items():
                lines.append(f"  [{'ok' if ok else 'FAIL'}] {check}")
            for c in rec["coefficients"]:
                lines.append(f"  {c['quantity']}: C = {c['C']['mid']} (<= {c['target_constant']}), k = {c['log_power_k']}")
            lines.extend(f"  {n['form']}: {n['note']}" for n in rec["nonvanishing"])
        elif name == "absolute_bound":
            lines.append(f"  n < {rec['n_abs']}; a + 1 < {rec['a_plus_one_below']} < M = {rec['m_big']}")
        elif name.startswith("reduce"):
            lines.extend(f"  {n}" for n in rec.get("notes", []))
            records = rec["records"]
            lines.append(f"  {len(records)} instance(s), A = {rec['A']}, M = {rec['M']}")
            for r in records[:3] + ([] if len(records) <= 3 else [None]):
                if r is None:
                    lines.append("  ...")
                elif r["method"] == "legendre":
                    lines.append(f"  shifts {r['shifts']}: Legendre, a_max = {r['a_max']}, {r['inequality']}, w < {r['w_bound']}")
                else:
                    lines.append(f"  shifts {r['shifts']}: q_{r['convergent_index']}, eps > {r['epsilon_lower']}, w < {r['w_bound']}")
            lines.append(f"  => {rec['note']}")
        elif name == "brute_force":
            lines.append(f"  n <= {rec['threshold']}: {len(rec['solutions'])} solution(s)")
            lines.extend(f"  {tuple(int(x) for x in t)}" for t in rec["solutions"])
            if rec["unexpected"]:
                lines.append(f"  not in expected list: {rec['unexpected']}")
            if rec["missing"]:
                lines.append(f"  expected but not found: {rec['missing']}")
        lines.append("")
    lines.append(f"verdict: {cert.verdict}")
    if cert.failure:
        lines.append(f"  at {cert.failure['stage']}: {cert.failure['reason']}")
    return "\n".join(lines) + "\n"


# -- verification -----------------------------------------------------------------------


def _check_reduction(rec: dict, stage: str, cf, m_big: int, policy: PrecisionPolicy) -> str | None:
    shifts = tuple(int(x) for x in rec["shifts"])
    if rec["method"] == "legendre":
        if len(shifts) != 1 or shifts[0] not in DEGENERATE_SHIFTS:
            return f"Legendre bound used for non-degenerate shifts {list(shifts)}"
        again = fallback_record(shifts[0], cf, m_big, ROUND_A[stage])
        return None if again == rec else f"Legendre record for {list(shifts)} does not reproduce"
    k = int(rec["convergent_index"])
    q = int(rec["q_used"])
    if k >= cf.certified_terms or cf.q(k) != q:
        return f"q_used for {list(shifts)} is not the convergent denominator q_{k}"
    if not q > 6 * m_big:
        return f"q_used for {list(shifts)} does not exceed 6M"
    eps_lower = parse_decimal(rec["epsilon_lower"])
    if eps_lower <= 0:
        return f"epsilon lower bound for {list(shifts)} is not positive"
    bits = int(rec["bits"])
    single = PrecisionPolicy(bits, bits, 2)
    eps, _ = epsilon_at(GAMMA, mu_expr(shifts), m_big, q, single)
    if not eps.lower >= eps_lower:
        return f"recomputed epsilon for {list(shifts)} does not reach the recorded lower bound"
    w = w_bound_from(Fraction(ROUND_A[stage]), q, eps_lower, ALPHA)
    if str(w) != rec["w_bound"]:
        return f"w_bound for {list(shifts)} does not match log(Aq/eps)/log B"
    return None


def verify_certificate_report(data: bytes) -> list[str]:
    """Re-check a serialized certificate; returns the list of problems (empty if sound)."""
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise ValueError(f"certificate does not parse: {exc}") from exc
    problems: list[str] = []
    try:
        policy_d = doc["precision_policy"]
        policy = PrecisionPolicy(int(policy_d["initial_bits"]), int(policy_d["max_bits"]),
                                 int(policy_d["growth_factor"]))
        m_big = int(doc["config"]["m_big"])
        n_threshold = int(doc["config"]["n_threshold"])
        records = {r["stage"]: r for r in doc["stage_records"]}
        order = [r["stage"] for r in doc["stage_records"]]
        verdict = doc["verdict"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"certificate is missing required fields: {exc}") from exc

    if order != list(STAGES[: len(order)]):
        problems.append(f"stages out of order: {order}")
    if verdict == "verified" and order != list(STAGES):
        problems.append("verdict verified but stages are missing")

    cfg = PipelineConfig(n_threshold=n_threshold, m_big=m_big, precision=policy)

    if "ell_zero" in records:
        again = stage_ell_zero(cfg)
        if again["solutions"] != records["ell_zero"]["solutions"]:
            problems.append("ell_zero: solution list does not reproduce")

    if "bound_chain" in records:
        try:
            again, k3 = stage_bound_chain(cfg)
            if again != records["bound_chain"]:
                problems.append("bound_chain: coefficients or checks do not reproduce")
        except StageFailure as exc:
            problems.append(f"bound_chain: {exc.reason}")
            k3 = None
        if "absolute_bound" in records and k3 is not None:
            try:
                again, _ = stage_absolute_bound(cfg, k3)
                if again != records["absolute_bound"]:
                    problems.append("absolute_bound: does not reproduce")
            except StageFailure as exc:
                problems.append(f"absolute_bound: {exc.reason}")

    bounds: dict[str, int] = {}
    reduce_stages = [s for s in ("reduce_n_minus_m", "reduce_n_minus_ell", "reduce_n") if s in records]
    if reduce_stages:
        cf = shared_gamma_cf(cfg)
        for stage in reduce_stages:
            rec = records[stage]
            recs = rec["records"]
            bounds[stage] = int(rec["bound"])
            if max(int(r["w_bound"]) for r in recs) != bounds[stage]:
                problems.append(f"{stage}: stage bound is not the max of its records")
            covered = [tuple(int(x) for x in r["shifts"]) for r in recs]
            if stage == "reduce_n_minus_m":
                want = [()]
            elif stage == "reduce_n_minus_ell":
                want = [(x,) for x in range(bounds.get("reduce_n_minus_m", -1) + 1)]
            else:
                want = list(round3_pairs(bounds.get("reduce_n_minus_m", -1), bounds.get("reduce_n_minus_ell", -1)))
            if covered != want:
                problems.append(f"{stage}: records do not cover the required shift range")
            for r in recs:
                issue = _check_reduction(r, stage, cf, m_big, policy)
                if issue:
                    problems.append(f"{stage}: {issue}")

    if "brute_force" in records:
        rec = records["brute_force"]
        threshold = int(rec["threshold"])
        if "reduce_n" in bounds and threshold < max(bounds["reduce_n"], n_threshold):
            problems.append("brute_force: threshold below the final bound")
        sols = [[str(x) for x in t.as_list()] for t in brute_force(threshold)]
        if rec["solutions"] != sols:
            problems.append("brute_force: recorded solutions do not match a fresh enumeration")
        if doc.get("final_solution_set") != sols:
            problems.append("final_solution_set does not match a fresh enumeration")
        expected = {tuple(int(x) for x in t) for t in rec["expected"]}
        matches = {tuple(int(x) for x in t) for t in sols} == expected
        if verdict == "verified" and not matches:
            problems.append("verdict verified but the solution set differs from the expected list")

    if verdict == "verified":
        if bounds.get("reduce_n", N_START + 1) > N_START:
            problems.append("verdict verified without a final bound n <= 150")
    return problems


def verify_certificate(data: bytes) -> bool:
    """True iff every recorded claim reproduces."""
    problems = verify_certificate_report(data)
    for p in problems:
        log.warning("certificate check failed: %s", p)
    return not problems
