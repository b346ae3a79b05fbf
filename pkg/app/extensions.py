import threading

from werkzeug.middleware.proxy_fix import ProxyFix

from app.core.errors import MissingMaterial
from app.core.models import Enrollment
from app.crypto.algebra import MasterSecret, PublicParams
from app.crypto.credentials import Role
from app.crypto.rng import default_rng
from app.repositories.file_store import FileStore
from app.repositories.ledger_repo import SpendLedger, ledger_path
from app.repositories.registry_repo import RegistryRepository
from app.transport.envelope import MessageType

store = None
params = None
master_secret = None
registry = None
enrollments = {}
ledgers = {}
rng = None

_ledger_dir = None
_ledger_fsync = True
_ledgers_lock = threading.Lock()


def _reset():
    global store, params, master_secret, registry, enrollments, ledgers, rng
    for ledger in ledgers.values():
        ledger.close()
    store = params = master_secret = registry = rng = None
    enrollments = {}
    ledgers = {}


def init_extensions(app):
    """Loads params, registry, CA secret and the node's key files from ASSO_DATA_DIR."""
    global store, params, master_secret, registry, rng, _ledger_dir, _ledger_fsync

    _reset()
    settings = app.config
    store = FileStore(settings.get("ASSO_DATA_DIR", "./data"))
    rng = default_rng()
    _ledger_dir = store.path(settings.get("ASSO_LEDGER_DIR", "ledgers"))
    _ledger_fsync = settings.get("ASSO_LEDGER_FSYNC", True)

    params_file = settings.get("ASSO_PARAMS_FILE", "params.bin")
    if store.exists(params_file):
        params = store.load(params_file, expected=MessageType.PARAMS)
        registry = RegistryRepository(
            params.group,
            store.path(settings.get("ASSO_REGISTRY_FILE", "registry.log")),
            fsync=_ledger_fsync,
        )
        app.logger.info("Parametros carregados: curva %s", params.group.name)
    else:
        app.logger.warning("Parametros ausentes em %s; endpoints de protocolo indisponiveis", store.path(params_file))

    msk_file = settings.get("ASSO_MASTER_SECRET_FILE", "ca.keys")
    if params is not None and store.exists(msk_file):
        master_secret = store.load(msk_file, params.group, MessageType.MASTER_SECRET)
        app.logger.info("No da CA: segredo mestre carregado")

    for key_file in settings.get("ASSO_KEY_FILES", []) or []:
        if params is None:
            break
        try:
            enrollment = store.load(key_file, params.group, MessageType.ENROLLMENT)
        except MissingMaterial as exc:
            app.logger.error("Arquivo de chaves ausente: %s", exc)
            continue
        enrollments[enrollment.identity] = enrollment

    app.wsgi_app = ProxyFix(app.wsgi_app, x_for=1, x_proto=1, x_host=1)


def get_store() -> FileStore:
    return store


def get_params() -> PublicParams:
    if params is None:
        raise MissingMaterial("parametros publicos nao carregados")
    return params


def get_master_secret() -> MasterSecret:
    if master_secret is None:
        raise MissingMaterial("este no nao guarda o segredo da CA")
    return master_secret


def get_registry() -> RegistryRepository:
    if registry is None:
        raise MissingMaterial("registry indisponivel sem parametros")
    return registry


def get_rng():
    return rng


def get_enrollment(identity: str) -> Enrollment | None:
    return enrollments.get(identity)


def get_enrollment_by_role(role: Role) -> Enrollment:
    for enrollment in enrollments.values():
        if enrollment.role is role:
            return enrollment
    raise MissingMaterial(f"nenhuma chave de {role.value} neste no")


def get_ledger(verifier_id: str) -> SpendLedger:
    with _ledgers_lock:
        ledger = ledgers.get(verifier_id)
        if ledger is None:
            ledger = ledgers[verifier_id] = SpendLedger(
                get_params().curve_id,
                ledger_path(_ledger_dir, verifier_id),
                label=verifier_id,
                fsync=_ledger_fsync,
            )
        return ledger


def get_issuer_key():
    record = get_registry().issuer()
    if record is None or record.y_tilde is None:
        raise MissingMaterial("issuer nao registrado")
    return record.y_tilde


def get_cv_record():
    record = get_registry().central_verifier()
    if record is None:
        raise MissingMaterial("central verifier nao registrado")
    return record
