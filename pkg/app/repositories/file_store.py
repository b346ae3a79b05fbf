import os
import tempfile
from pathlib import Path

from app.core.errors import MissingMaterial, StorageError
from app.transport.envelope import MessageType, armor, load_bytes, seal, unseal


class FileStore:
    """Envelope files (params.bin, <role>.keys, <role>.pub, ticket.bin, ...) under one base dir."""

    def __init__(self, base_dir="."):
        self.base_dir = Path(base_dir)

    def path(self, name) -> Path:
        path = Path(name)
        return path if path.is_absolute() else self.base_dir / path

    def write_bytes(self, name, data: bytes) -> Path:
        path = self.path(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        except OSError as exc:
            raise StorageError(f"falha ao gravar {path}: {exc}") from exc
        return path

    def read_bytes(self, name) -> bytes:
        path = self.path(name)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise MissingMaterial(f"arquivo nao encontrado: {path}") from None
        except OSError as exc:
            raise StorageError(f"falha ao ler {path}: {exc}") from exc

    def exists(self, name) -> bool:
        return self.path(name).exists()

    def save(self, name, obj, *, armored: bool = False) -> Path:
        data = seal(obj)
        if armored:
            data = armor(data).encode("utf-8")
        return self.write_bytes(name, data)

    def load(self, name, group=None, expected: MessageType | None = None):
        return unseal(load_bytes(self.read_bytes(name)), group, expected)
