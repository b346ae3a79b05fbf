import logging
import os
import threading
from enum import Enum
from pathlib import Path

from app.core.errors import DecodeError, StorageError
from app.core.logging import fingerprint_hex, log_event
from app.transport.envelope import MessageType, TornTail, frame_record, iter_records, log_header, read_log_header


class InsertOutcome(str, Enum):
    INSERTED = "Inserted"
    ALREADY_PRESENT = "AlreadyPresent"


class SpendLedger:
    """Set of spent-tag fingerprints for one verifier.

    With a path, every insert is appended to ledger.<verifier-id>.log and
    flushed (fsync'd when enabled) before ``insert_if_absent`` returns, and the
    file is replayed on open.
    """

    def __init__(self, curve_id: int, path=None, *, label: str = "", fsync: bool = True):
        self.curve_id = curve_id
        self.label = label
        self.path = Path(path) if path else None
        self.fsync = fsync
        self._entries = set()
        self._lock = threading.Lock()
        self._fh = None
        if self.path is not None:
            self._open()

    def _open(self):
        try:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            data = self.path.read_bytes() if self.path.exists() else b""
        except OSError as exc:
            raise StorageError(f"falha ao abrir ledger {self.path}: {exc}") from exc

        if data:
            self._replay(data)
        else:
            self._write_header()

        try:
            self._fh = open(self.path, "ab")
        except OSError as exc:
            raise StorageError(f"falha ao abrir ledger {self.path}: {exc}") from exc

    def _write_header(self):
        try:
            with open(self.path, "wb") as fh:
                fh.write(log_header(MessageType.LEDGER_LOG, self.curve_id, self.label))
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageError(f"falha ao criar ledger {self.path}: {exc}") from exc

    def _replay(self, data: bytes):
        try:
            curve_id, label, offset = read_log_header(data, MessageType.LEDGER_LOG)
        except DecodeError as exc:
            raise StorageError(f"cabecalho de ledger invalido em {self.path}: {exc}") from exc
        if curve_id != self.curve_id:
            raise StorageError(f"ledger {self.path} pertence a outra curva ({curve_id:#x})")
        if self.label and label and label != self.label:
            raise StorageError(f"ledger {self.path} pertence a {label}")

        try:
            for item in iter_records(data, offset):
                if isinstance(item, TornTail):
                    logging.warning("Ledger %s com registro incompleto em %s; descartando cauda", self.path, item.offset)
                    self._truncate(item.offset)
                    break
                _pos, body = item
                self._entries.add(body)
        except DecodeError as exc:
            raise StorageError(f"ledger corrompido em {self.path}: {exc}") from exc
        logging.info("Ledger %s carregado com %s registros", self.path, len(self._entries))

    def _truncate(self, offset: int):
        try:
            with open(self.path, "r+b") as fh:
                fh.truncate(offset)
                fh.flush()
                os.fsync(fh.fileno())
        except OSError as exc:
            raise StorageError(f"falha ao truncar ledger {self.path}: {exc}") from exc

    def insert_if_absent(self, fingerprint: bytes) -> InsertOutcome:
        fingerprint = bytes(fingerprint)
        with self._lock:
            if fingerprint in self._entries:
                log_event("ledger_insert", ledger=self.label, outcome=InsertOutcome.ALREADY_PRESENT.value)
                return InsertOutcome.ALREADY_PRESENT
            if self.path is not None:
                if self._fh is None:
                    raise StorageError(f"ledger {self.path} fechado ou inutilizavel")
                self._append(fingerprint)
            self._entries.add(fingerprint)
        log_event(
            "ledger_insert",
            ledger=self.label,
            outcome=InsertOutcome.INSERTED.value,
            fingerprint=fingerprint_hex(fingerprint[-16:]),
        )
        return InsertOutcome.INSERTED

    def _append(self, fingerprint: bytes):
        fh = self._fh
        try:
            offset = fh.tell()
        except OSError as exc:
            raise StorageError(f"falha ao gravar no ledger {self.path}: {exc}") from exc
        try:
            fh.write(frame_record(fingerprint))
            fh.flush()
            if self.fsync:
                os.fsync(fh.fileno())
        except OSError as exc:
            self._rollback(fh, offset)
            raise StorageError(f"falha ao gravar no ledger {self.path}: {exc}") from exc

    def _rollback(self, fh, offset: int):
        # sem truncate bem-sucedido o ledger fica fechado e todo insert falha
        self._fh = None
        try:
            fh.close()
        except OSError:
            pass
        try:
            self._truncate(offset)
            self._fh = open(self.path, "ab")
        except (OSError, StorageError) as exc:
            logging.error("Ledger %s inutilizavel apos falha de escrita: %s", self.path, exc)
            return
        logging.warning("Ledger %s: escrita parcial desfeita em %s", self.path, offset)

    def __contains__(self, fingerprint) -> bool:
        with self._lock:
            return bytes(fingerprint) in self._entries

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)

    def fingerprints(self) -> frozenset:
        with self._lock:
            return frozenset(self._entries)

    def close(self):
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None


def ledger_path(ledger_dir, verifier_id: str) -> Path:
    return Path(ledger_dir) / f"ledger.{verifier_id}.log"
