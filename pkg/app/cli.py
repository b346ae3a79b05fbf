"""Operator CLI: one command per protocol phase, plus bench and inspect."""
import json
from dataclasses import dataclass, fields, is_dataclass
from enum import Enum
from functools import wraps
from pathlib import Path

import click

from app.config import get_config
from app.core.errors import AssoError
from app.core.logging import setup_logging
from app.core.models import Enrollment, ServiceSet, TicketWallet
from app.crypto.algebra import G1Elem, G2Elem, PublicParams, Scalar, setup_params
from app.crypto.credentials import Role
from app.crypto.groups import PairingGroup, security_level_for_profile
from app.crypto.rng import default_rng
from app.repositories.file_store import FileStore
from app.repositories.ledger_repo import SpendLedger, ledger_path
from app.repositories.registry_repo import RegistryRepository
from app.services.bench_service import run_bench
from app.services.issuing_service import (
    default_text_policy,
    issuer_issue_ticket,
    new_ticket_secret,
    user_build_ticket_request,
    user_verify_ticket,
)
from app.services.registration_service import register_entity
from app.services.trace_service import cv_trace, user_prepare_trace
from app.services.validation_service import show_from_wallet, verifier_validate
from app.transport.envelope import MessageType, armor, load_bytes, read_header, unseal

EXIT_REJECTED = 2

PROFILE_CHOICES = ("default", "compat", "compat160", "compat320", "toy64", "toy16")
_PROFILE_ALIASES = {"compat160": "compat", "compat320": "compat"}

ROLE_CHOICES = {
    "issuer": Role.ISSUER,
    "verifier": Role.VERIFIER,
    "user": Role.USER,
    "central_verifier": Role.CENTRAL_VERIFIER,
    "cv": Role.CENTRAL_VERIFIER,
}

_SECRET_FIELDS = {"x", "x_a", "z_u", "c_u"}
# credencial do Enrollment e privada; a do RegistryRecord e publica
_ENROLLMENT_CREDENTIAL_SECRETS = frozenset({"r", "sigma"})


def _fail(error_class: str, detail: str | None = None):
    click.echo(f"error={error_class}", err=True)
    if detail:
        click.echo(detail, err=True)
    raise click.exceptions.Exit(EXIT_REJECTED)


def handle_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except AssoError as exc:
            _fail(exc.error_class, exc.detail)

    return wrapper


def normalize_profile(profile: str) -> str:
    return _PROFILE_ALIASES.get(profile, profile)


@dataclass
class CliContext:
    settings: type
    store: FileStore

    def path(self, value, default_name: str) -> Path:
        if value:
            return Path(value).resolve()
        return self.store.path(default_name)

    def params(self, value) -> PublicParams:
        return self.store.load(self.path(value, self.settings.ASSO_PARAMS_FILE), expected=MessageType.PARAMS)

    def registry(self, pp: PublicParams, value) -> RegistryRepository:
        return RegistryRepository(pp.group, self.path(value, self.settings.ASSO_REGISTRY_FILE))

    def enrollment(self, pp: PublicParams, value, role: Role, flag: str) -> Enrollment:
        if not value:
            raise click.BadParameter("arquivo de chaves obrigatorio", param_hint=flag)
        enrollment = self.store.load(self.path(value, value), pp.group, MessageType.ENROLLMENT)
        if enrollment.role is not role:
            raise click.BadParameter(f"chaves de {enrollment.role.value}, esperado {role.value}", param_hint=flag)
        return enrollment


pass_cli = click.make_pass_decorator(CliContext)


@click.group(name="asso")
@click.option("--data-dir", default=None, help="Diretorio base dos arquivos (default: ASSO_DATA_DIR).")
@click.pass_context
def cli(ctx, data_dir):
    """Anonymous single sign-on: CA, issuer, verifiers, user and central verifier."""
    settings = get_config()
    setup_logging(level=settings.LOG_LEVEL)
    ctx.obj = CliContext(settings=settings, store=FileStore(data_dir or settings.ASSO_DATA_DIR))


@cli.command()
@click.option("--profile", type=click.Choice(PROFILE_CHOICES), default=None)
@click.option("--seed", default=None, help="Somente para setups deterministicos de teste.")
@click.option("--out", default=None, help="params.bin")
@click.option("--msk-out", default=None, help="ca.keys")
@click.option("--armor", is_flag=True, help="Grava em JSON armado.")
@pass_cli
@handle_errors
def setup(ctx, profile, seed, out, msk_out, armor):
    profile = normalize_profile(profile or ctx.settings.ASSO_PROFILE)
    msk, pp = setup_params(security_level_for_profile(profile), seed)
    params_path = ctx.store.save(ctx.path(out, ctx.settings.ASSO_PARAMS_FILE), pp, armored=armor)
    msk_path = ctx.store.save(ctx.path(msk_out, ctx.settings.ASSO_MASTER_SECRET_FILE), msk, armored=armor)
    click.echo(f"curve={pp.group.name} params={params_path} msk={msk_path}")


@cli.command()
@click.option("--role", type=click.Choice(sorted(ROLE_CHOICES)), required=True)
@click.option("--id", "identity", required=True)
@click.option("--params", default=None)
@click.option("--msk", default=None, help="ca.keys")
@click.option("--registry", default=None)
@click.option("--out", default=None, help="<id>.keys (secreto)")
@click.option("--pub-out", default=None, help="<id>.pub")
@pass_cli
@handle_errors
def register(ctx, role, identity, params, msk, registry, out, pub_out):
    pp = ctx.params(params)
    master = ctx.store.load(ctx.path(msk, ctx.settings.ASSO_MASTER_SECRET_FILE), pp.group, MessageType.MASTER_SECRET)
    repo = ctx.registry(pp, registry)
    enrollment = register_entity(pp, master, repo, identity, ROLE_CHOICES[role], default_rng())
    keys_path = ctx.store.save(ctx.path(out, f"{identity}.keys"), enrollment)
    pub_path = ctx.store.save(ctx.path(pub_out, f"{identity}.pub"), repo.get(identity))
    click.echo(f"registered id={identity} role={enrollment.role.value} keys={keys_path} pub={pub_path}")


@cli.command()
@click.option("--params", default=None)
@click.option("--registry", default=None)
@click.option("--keys", "keys_file", default=None, help="Chaves do usuario.")
@click.option("--issuer-keys", default=None, help="Chaves do issuer.")
@click.option("--services", required=True, help="IDs dos verifiers, separados por virgula.")
@click.option("--out", default=None, help="ticket.bin")
@pass_cli
@handle_errors
def issue(ctx, params, registry, keys_file, issuer_keys, services, out):
    pp = ctx.params(params)
    repo = ctx.registry(pp, registry)
    user = ctx.enrollment(pp, keys_file, Role.USER, "--keys")
    issuer = ctx.enrollment(pp, issuer_keys, Role.ISSUER, "--issuer-keys")
    cv = repo.central_verifier()
    if cv is None:
        _fail("MissingMaterial", "central verifier nao registrado")

    rng = default_rng()
    service_set = ServiceSet.build([s.strip() for s in services.split(",") if s.strip()], cv.identity)
    z_u = new_ticket_secret(pp, rng)
    ticket_request = user_build_ticket_request(pp, user.keys.x, user.credential, z_u, service_set, cv.y, rng)
    policy = default_text_policy(ctx.settings.ASSO_TEXT_PREFIX, ctx.settings.ASSO_TAG_VALIDITY_SECONDS)
    c_u, ticket = issuer_issue_ticket(pp, issuer, repo, ticket_request, policy, rng)
    if not user_verify_ticket(pp, ticket, c_u, service_set, issuer.keys.y_tilde):
        _fail("TicketRejected")

    path = ctx.store.save(ctx.path(out, "ticket.bin"), TicketWallet(z_u=z_u, service_set=service_set, ticket=ticket))
    click.echo(f"ticket={path} services={','.join(service_set.ids)}")


@cli.command()
@click.option("--params", default=None)
@click.option("--registry", default=None)
@click.option("--keys", "keys_file", default=None, help="Chaves do usuario.")
@click.option("--ticket", default=None, help="ticket.bin")
@click.option("--verifier", "verifier_id", default=None, help="ID do verifier alvo.")
@click.option("--for-trace", is_flag=True, help="Monta o pedido de trace para o central verifier.")
@click.option("--out", default=None)
@pass_cli
@handle_errors
def show(ctx, params, registry, keys_file, ticket, verifier_id, for_trace, out):
    pp = ctx.params(params)
    repo = ctx.registry(pp, registry)
    user = ctx.enrollment(pp, keys_file, Role.USER, "--keys")
    wallet = ctx.store.load(ctx.path(ticket, "ticket.bin"), pp.group, MessageType.WALLET)
    cv = repo.central_verifier()
    if cv is None:
        _fail("MissingMaterial", "central verifier nao registrado")

    rng = default_rng()
    if for_trace:
        message = user_prepare_trace(pp, wallet, user.keys.x, cv.identity, cv.y, rng)
        path = ctx.store.save(ctx.path(out, "trace.bin"), message)
        click.echo(f"trace_request={path}")
        return

    if not verifier_id:
        raise click.BadParameter("obrigatorio sem --for-trace", param_hint="--verifier")
    message = show_from_wallet(pp, wallet, user.keys.x, verifier_id, cv.y, rng)
    path = ctx.store.save(ctx.path(out, f"showing.{verifier_id}.bin"), message)
    click.echo(f"showing={path} verifier={verifier_id}")


@cli.command()
@click.option("--params", default=None)
@click.option("--registry", default=None)
@click.option("--keys", "keys_file", default=None, help="Chaves do verifier.")
@click.option("--ledger", default=None, help="Diretorio dos ledgers.")
@click.option("--showing", required=True)
@pass_cli
@handle_errors
def validate(ctx, params, registry, keys_file, ledger, showing):
    pp = ctx.params(params)
    repo = ctx.registry(pp, registry)
    verifier = ctx.enrollment(pp, keys_file, Role.VERIFIER, "--keys")
    issuer, cv = repo.issuer(), repo.central_verifier()
    if issuer is None or cv is None:
        _fail("MissingMaterial", "issuer ou central verifier nao registrado")

    message = ctx.store.load(ctx.path(showing, showing), pp.group, MessageType.SHOWING)
    spend_ledger = SpendLedger(
        pp.curve_id,
        ledger_path(ctx.path(ledger, ctx.settings.ASSO_LEDGER_DIR), verifier.identity),
        label=verifier.identity,
        fsync=ctx.settings.ASSO_LEDGER_FSYNC,
    )
    try:
        result = verifier_validate(
            pp,
            verifier.keys,
            spend_ledger,
            message.tag,
            message.proof,
            issuer.y_tilde,
            cv.y,
            verifier_id=verifier.identity,
        )
    finally:
        spend_ledger.close()

    if not result:
        _fail(result.reason.value)
    click.echo(f"status=accept verifier={verifier.identity} text={message.tag.text}")


@cli.command()
@click.option("--params", default=None)
@click.option("--registry", default=None)
@click.option("--keys", "keys_file", default=None, help="Chaves do central verifier.")
@click.option("--request", "request_file", default=None, help="trace.bin")
@click.option("--out", default=None, help="Grava o TRACE_REPORT.")
@pass_cli
@handle_errors
def trace(ctx, params, registry, keys_file, request_file, out):
    pp = ctx.params(params)
    repo = ctx.registry(pp, registry)
    cv = ctx.enrollment(pp, keys_file, Role.CENTRAL_VERIFIER, "--keys")
    issuer = repo.issuer()
    if issuer is None:
        _fail("MissingMaterial", "issuer nao registrado")

    message = ctx.store.load(ctx.path(request_file, "trace.bin"), pp.group, MessageType.TRACE_REQUEST)
    report = cv_trace(pp, cv, repo, message, issuer.y_tilde)
    if out:
        ctx.store.save(ctx.path(out, out), report)
    if not report.traced:
        _fail("TraceFailed", report.reason)

    click.echo(f"status={report.status.value}")
    click.echo(f"user_key={report.user_key.encode().hex()}")
    click.echo(f"user={report.user_id or '-'}")
    click.echo(f"services={','.join(report.service_ids)}")


@cli.command()
@click.option("--profile", type=click.Choice(PROFILE_CHOICES), default=None)
@click.option("--iterations", type=click.IntRange(min=1), default=None)
@click.option("--verifiers", default="2,3", help="Quantidades de verifiers, ex.: 2,3")
@click.option("--seed", default=None)
@click.option("--out", default=None, help="Relatorio JSON.")
@pass_cli
@handle_errors
def bench(ctx, profile, iterations, verifiers, seed, out):
    profile = normalize_profile(profile or ctx.settings.ASSO_PROFILE)
    iterations = iterations or ctx.settings.ASSO_BENCH_ITERATIONS
    try:
        counts = tuple(int(n) for n in verifiers.split(",") if n.strip())
    except ValueError:
        raise click.BadParameter("lista de inteiros", param_hint="--verifiers") from None
    if not counts or min(counts) < 1:
        raise click.BadParameter("lista de inteiros positivos", param_hint="--verifiers")

    report = run_bench(profile=profile, iterations=iterations, verifier_counts=counts, seed=seed)
    click.echo(report.render_table())
    for flag in report.metadata["flags"]:
        click.echo(f"flag={flag}")
    if out:
        ctx.store.write_bytes(
            ctx.path(out, out),
            json.dumps(report.to_dict(), ensure_ascii=False, indent=2).encode("utf-8"),
        )


def describe(obj, field_name: str = "", masked: frozenset = frozenset()):
    """JSON-friendly view of a decoded message; secret values are masked."""
    if field_name in _SECRET_FIELDS or field_name in masked:
        return "<secret>"
    if isinstance(obj, (G1Elem, G2Elem)):
        return obj.encode().hex()
    if isinstance(obj, Scalar):
        return obj.to_bytes().hex()
    if isinstance(obj, PairingGroup):
        return obj.name
    if isinstance(obj, Enum):
        return obj.value
    if is_dataclass(obj):
        view = {}
        for f in fields(obj):
            inner = masked
            if isinstance(obj, Enrollment) and f.name == "credential":
                inner = _ENROLLMENT_CREDENTIAL_SECRETS
            view[f.name] = describe(getattr(obj, f.name), f.name, inner)
        return view
    if isinstance(obj, (list, tuple)):
        return [describe(item, masked=masked) for item in obj]
    return obj


@cli.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--params", default=None, help="Necessario para mensagens que nao sejam PARAMS.")
@click.option("--armor", "as_armor", is_flag=True, help="Imprime o envelope em JSON armado.")
@pass_cli
@handle_errors
def inspect(ctx, file, params, as_armor):
    data = load_bytes(Path(file).read_bytes())
    if as_armor:
        click.echo(armor(data))
        return

    msg_type, body = read_header(data)
    summary = {"type": msg_type.name, "size": len(data)}
    if msg_type in (MessageType.REGISTRY_LOG, MessageType.LEDGER_LOG):
        summary["note"] = "arquivo de log; use o repositorio correspondente"
    elif msg_type is MessageType.PARAMS:
        summary["body"] = describe(unseal(data))
    elif params:
        summary["body"] = describe(unseal(data, ctx.params(params).group))
    else:
        summary["body_size"] = len(body)
    click.echo(json.dumps(summary, ensure_ascii=False, indent=2))


def main():
    cli(prog_name="asso")
