import logging
import os
import threading
from pathlib import Path

from app.core.errors import DecodeError, DuplicateIdentity, StorageError
from app.crypto.algebra import G1Elem
from app.crypto.credentials import RegistryRecord, Role
from app.crypto.groups import PairingGroup
from app.transport.codec import decode_canonical, encode_canonical
from app.transport.envelope import MessageType, TornTail, frame_record, iter_records, log_header, read_log_header


class RegistryRepository:
    """CA registry: id -> (role, Y, credential echo), append-only on disk."""

    def __init__(self, group: PairingGroup, path=None, *, fsync: bool = True):
        self.group = group
        self.path = Path(path) if path else None
        self.fsync = fsync
        self._by_id = {}
        self._by_key = {}
        self._lock = threading.Lock()
        if self.path is not None:
            self._load()

    def _load(self):
        if not self.path.exists() or self.path.stat().st_size == 0:
            return
        data = self.path.read_bytes()
        try:
            curve_id, _label, offset = read_log_header(data, MessageType.REGISTRY_LOG)
            if curve_id != self.group.curve_id:
                raise StorageError(f"registry {self.path} pertence a outra curva ({curve_id:#x})")
            for item in iter_records(data, offset):
                if isinstance(item, TornTail):
                    logging.warning("Registry %s com registro incompleto em %s; descartando cauda", self.path, item.offset)
                    self._truncate(item.offset)
                    break
                _pos, body = item
                self._index(decode_canonical(RegistryRecord, body, self.group))
        except DecodeError as exc:
            raise StorageError(f"registry corrompido em {self.path}: {exc}") from exc
        logging.info("Registry %s carregado com %s entidades", self.path, len(self._by_id))

    def _truncate(self, offset: int):
        try:
            with open(self.path, "r+b") as fh:
                fh.truncate(offset)
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageError(f"falha ao truncar registry {self.path}: {exc}") from exc

    def _index(self, record: RegistryRecord):
        self._by_id[record.identity] = record
        self._by_key[record.y.encode()] = record

    def _append(self, record: RegistryRecord):
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            size = self.path.stat().st_size if self.path.exists() else 0
        except OSError as exc:
            raise StorageError(f"falha ao gravar registry {self.path}: {exc}") from exc
        try:
            with open(self.path, "ab") as fh:
                if size == 0:
                    fh.write(log_header(MessageType.REGISTRY_LOG, self.group.curve_id, "registry"))
                fh.write(frame_record(encode_canonical(record)))
                fh.flush()
                if self.fsync:
                    os.fsync(fh.fileno())
        except OSError as exc:
            self._truncate(size)
            raise StorageError(f"falha ao gravar registry {self.path}: {exc}") from exc

    def add(self, record: RegistryRecord) -> RegistryRecord:
        with self._lock:
            if record.identity in self._by_id or record.y.encode() in self._by_key:
                raise DuplicateIdentity(record.identity)
            if self.path is not None:
                self._append(record)
            self._index(record)
        return record

    def get(self, identity: str) -> RegistryRecord | None:
        with self._lock:
            return self._by_id.get(identity)

    def find_by_key(self, y: G1Elem) -> RegistryRecord | None:
        with self._lock:
            return self._by_key.get(y.encode())

    def _first_with_role(self, role: Role) -> RegistryRecord | None:
        with self._lock:
            for record in self._by_id.values():
                if record.role is role:
                    return record
        return None

    def central_verifier(self) -> RegistryRecord | None:
        return self._first_with_role(Role.CENTRAL_VERIFIER)

    def issuer(self) -> RegistryRecord | None:
        return self._first_with_role(Role.ISSUER)

    def records(self) -> list[RegistryRecord]:
        with self._lock:
            return list(self._by_id.values())

    def __len__(self) -> int:
        with self._lock:
            return len(self._by_id)
