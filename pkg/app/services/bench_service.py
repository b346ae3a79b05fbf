"""Phase timings for the whole protocol, one row per benchmark phase."""
import os
import platform
import statistics
import time
from dataclasses import asdict, dataclass, field

from app.core.logging import log_event
from app.core.models import ServiceSet, TicketWallet
from app.crypto.algebra import setup_params
from app.crypto.credentials import Role
from app.crypto.groups import group_for_profile, security_level_for_profile
from app.crypto.rng import default_rng
from app.repositories.ledger_repo import SpendLedger
from app.repositories.registry_repo import RegistryRepository
from app.services.issuing_service import (
    default_text_policy,
    issuer_issue_ticket,
    new_ticket_secret,
    user_build_ticket_request,
    user_verify_ticket,
)
from app.services.registration_service import (
    accept_credential,
    build_registration_request,
    ca_handle_registration,
)
from app.services.trace_service import cv_trace, user_prepare_trace
from app.services.validation_service import show_from_wallet, verifier_validate

SECTION_SETUP = "System Initialisation - Central Authority (CA)"
SECTION_REG_ISSUER = "Registration - Issuer (I)"
SECTION_REG_USER = "Registration - User (U)"
SECTION_REG_CV = "Registration - Central Verifier (CV)"
SECTION_REG_VERIFIER = "Registration - Verifier (V)"
SECTION_ISSUING = "Issuing phase"
SECTION_TAG = "Tag Verification - Verifier (V)"
SECTION_TRACE = "Ticket Tracing - Central Verifier (CV)"

PHASE_INIT = "initialise the system"
PHASE_GEN_I = "generate I credentials"
PHASE_VERIFY_I = "verify I credentials"
PHASE_GEN_U = "generate user credentials"
PHASE_VERIFY_U = "verify user credentials"
PHASE_GEN_CV = "generate CV credentials"
PHASE_VERIFY_CV = "verify CV credentials"
PHASE_GEN_V = "generate V credentials"
PHASE_VERIFY_V = "verify V credentials"
PHASE_PI1 = "generate Pi1 & ticket request"
PHASE_ISSUE = "verify Pi1, generate ticket"
PHASE_VERIFY_TICKET = "verify ticket"
PHASE_SHOW = "retrieve Tag_V & generate Pi2"
PHASE_VALIDATE = "verify Pi2 & Tag_V"
PHASE_TRACE_SHOW = "retrieve ticket T_U & Tag_CV; generate Pi2"
PHASE_TRACE = "verify Pi2, Tag_CV; trace T_U"

# (section, phase, entity) in table order
BENCH_PHASES = (
    (SECTION_SETUP, PHASE_INIT, "CA"),
    (SECTION_REG_ISSUER, PHASE_GEN_I, "CA"),
    (SECTION_REG_ISSUER, PHASE_VERIFY_I, "I"),
    (SECTION_REG_USER, PHASE_GEN_U, "CA"),
    (SECTION_REG_USER, PHASE_VERIFY_U, "User"),
    (SECTION_REG_CV, PHASE_GEN_CV, "CA"),
    (SECTION_REG_CV, PHASE_VERIFY_CV, "CV"),
    (SECTION_REG_VERIFIER, PHASE_GEN_V, "CA"),
    (SECTION_REG_VERIFIER, PHASE_VERIFY_V, "V"),
    (SECTION_ISSUING, PHASE_PI1, "User"),
    (SECTION_ISSUING, PHASE_ISSUE, "Issuer"),
    (SECTION_ISSUING, PHASE_VERIFY_TICKET, "User"),
    (SECTION_TAG, PHASE_SHOW, "User"),
    (SECTION_TAG, PHASE_VALIDATE, "V"),
    (SECTION_TRACE, PHASE_TRACE_SHOW, "User"),
    (SECTION_TRACE, PHASE_TRACE, "CV"),
)

VALIDATION_FLAG_MS = 100.0
ISSUANCE_FLAG_MS = 2000.0


@dataclass(frozen=True)
class BenchRow:
    section: str
    phase: str
    entity: str
    verifiers: int
    mean_ms: float
    std_ms: float
    iterations: int


@dataclass
class BenchReport:
    rows: list[BenchRow]
    metadata: dict = field(default_factory=dict)

    def row(self, phase: str, verifiers: int) -> BenchRow:
        for row in self.rows:
            if row.phase == phase and row.verifiers == verifiers:
                return row
        raise KeyError((phase, verifiers))

    def phases(self) -> list[str]:
        seen = []
        for row in self.rows:
            if row.phase not in seen:
                seen.append(row.phase)
        return seen

    def to_dict(self) -> dict:
        return {"metadata": self.metadata, "rows": [asdict(row) for row in self.rows]}

    def render_table(self) -> str:
        counts = sorted({row.verifiers for row in self.rows})
        width = max(len(phase) for _section, phase, _entity in BENCH_PHASES)
        header = f"{'phase':<{width}}  {'entity':<6}" + "".join(f"  {f'V={n} mean':>11}  {'std':>8}" for n in counts)
        lines = [header, "-" * len(header)]
        section = None
        for sec, phase, entity in BENCH_PHASES:
            if sec != section:
                lines.append(f"[{sec}]")
                section = sec
            cells = []
            for n in counts:
                row = self.row(phase, n)
                cells.append(f"  {row.mean_ms:>11.2f}  {row.std_ms:>8.2f}")
            lines.append(f"{phase:<{width}}  {entity:<6}" + "".join(cells))
        return "\n".join(lines)


class _Timer:
    def __init__(self, clock):
        self.clock = clock
        self.samples = {}

    def run(self, phase, verifiers, fn, *args, **kwargs):
        start = self.clock()
        result = fn(*args, **kwargs)
        elapsed_ms = (self.clock() - start) * 1000.0
        self.samples.setdefault((phase, verifiers), []).append(elapsed_ms)
        return result


def _register(timer, pp, msk, registry, identity, role, rng, n, gen_phase=None, verify_phase=None):
    keys, request = build_registration_request(pp, identity, role, rng)
    if gen_phase:
        credential = timer.run(gen_phase, n, ca_handle_registration, pp, msk, registry, request, rng)
    else:
        credential = ca_handle_registration(pp, msk, registry, request, rng)
    if verify_phase:
        return timer.run(verify_phase, n, accept_credential, pp, identity, keys, credential)
    return accept_credential(pp, identity, keys, credential)


def _one_round(timer, level, n, rng, seed):
    msk, pp = timer.run(PHASE_INIT, n, setup_params, level, seed)
    registry = RegistryRepository(pp.group)

    issuer = _register(timer, pp, msk, registry, "I", Role.ISSUER, rng, n, PHASE_GEN_I, PHASE_VERIFY_I)
    user = _register(timer, pp, msk, registry, "U", Role.USER, rng, n, PHASE_GEN_U, PHASE_VERIFY_U)
    cv = _register(timer, pp, msk, registry, "CV", Role.CENTRAL_VERIFIER, rng, n, PHASE_GEN_CV, PHASE_VERIFY_CV)
    verifiers = [_register(timer, pp, msk, registry, "V1", Role.VERIFIER, rng, n, PHASE_GEN_V, PHASE_VERIFY_V)]
    for index in range(2, n + 1):
        verifiers.append(_register(timer, pp, msk, registry, f"V{index}", Role.VERIFIER, rng, n))

    y_cv = cv.keys.y
    y_tilde_i = issuer.keys.y_tilde
    service_set = ServiceSet.build([v.identity for v in verifiers], cv.identity)
    z_u = new_ticket_secret(pp, rng)

    request = timer.run(
        PHASE_PI1, n, user_build_ticket_request, pp, user.keys.x, user.credential, z_u, service_set, y_cv, rng
    )
    c_u, ticket = timer.run(
        PHASE_ISSUE, n, issuer_issue_ticket, pp, issuer, registry, request, default_text_policy(), rng
    )
    timer.run(PHASE_VERIFY_TICKET, n, user_verify_ticket, pp, ticket, c_u, service_set, y_tilde_i)

    wallet = TicketWallet(z_u=z_u, service_set=service_set, ticket=ticket)
    target = verifiers[0]
    showing = timer.run(PHASE_SHOW, n, show_from_wallet, pp, wallet, user.keys.x, target.identity, y_cv, rng)
    ledger = SpendLedger(pp.curve_id, label=target.identity)
    timer.run(
        PHASE_VALIDATE, n, verifier_validate, pp, target.keys, ledger, showing.tag, showing.proof, y_tilde_i, y_cv
    )

    trace_request = timer.run(PHASE_TRACE_SHOW, n, user_prepare_trace, pp, wallet, user.keys.x, cv.identity, y_cv, rng)
    timer.run(PHASE_TRACE, n, cv_trace, pp, cv, registry, trace_request, y_tilde_i)


def _host_info() -> dict:
    return {
        "platform": platform.platform(),
        "python": platform.python_version(),
        "machine": platform.machine(),
        "cpus": os.cpu_count(),
    }


def run_bench(
    profile: str = "default",
    iterations: int = 20,
    verifier_counts=(2, 3),
    seed: str | None = None,
    clock=time.perf_counter,
) -> BenchReport:
    if iterations < 1:
        raise ValueError("iterations deve ser >= 1")
    level = security_level_for_profile(profile)
    group = group_for_profile(profile)
    rng = default_rng(seed)
    timer = _Timer(clock)

    for n in verifier_counts:
        for i in range(iterations):
            round_seed = f"{seed}:{n}:{i}" if seed is not None else None
            _one_round(timer, level, n, rng, round_seed)

    rows = []
    for n in verifier_counts:
        for section, phase, entity in BENCH_PHASES:
            samples = timer.samples[(phase, n)]
            rows.append(
                BenchRow(
                    section=section,
                    phase=phase,
                    entity=entity,
                    verifiers=n,
                    mean_ms=statistics.fmean(samples),
                    std_ms=statistics.pstdev(samples) if len(samples) > 1 else 0.0,
                    iterations=len(samples),
                )
            )

    report = BenchReport(
        rows=rows,
        metadata={
            "profile": profile,
            "curve": group.name,
            "security_bits": level,
            "iterations": iterations,
            "verifier_counts": list(verifier_counts),
            "host": _host_info(),
        },
    )
    report.metadata["flags"] = performance_flags(report)
    log_event("bench", profile=profile, iterations=iterations, flags=report.metadata["flags"] or None)
    return report


def performance_flags(report: BenchReport) -> list[str]:
    """Informational thresholds; a raised flag never fails the run."""
    flags = []
    validation = [row for row in report.rows if row.phase == PHASE_VALIDATE]
    if validation and max(row.mean_ms for row in validation) >= VALIDATION_FLAG_MS:
        flags.append("validation_mean_over_100ms")
    if 3 in {row.verifiers for row in report.rows}:
        issuance = sum(report.row(phase, 3).mean_ms for phase in (PHASE_PI1, PHASE_ISSUE, PHASE_VERIFY_TICKET))
        if issuance >= ISSUANCE_FLAG_MS:
            flags.append("issuance_3v_mean_over_2s")
    return flags
