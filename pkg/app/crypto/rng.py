import hashlib
import secrets
import threading

_EXTRA_BYTES = 16


class SystemRandom:
    """CSPRNG source used outside of tests."""

    def randbelow(self, n: int) -> int:
        return secrets.randbelow(n)


class SeededRandom:
    """Deterministic SHAKE-256 counter stream, for reproducible setups and tests."""

    def __init__(self, seed: bytes):
        if isinstance(seed, str):
            seed = seed.encode("utf-8")
        self._seed = bytes(seed)
        self._counter = 0
        self._lock = threading.Lock()

    def _block(self, size: int) -> bytes:
        with self._lock:
            counter = self._counter
            self._counter += 1
        xof = hashlib.shake_256(b"ASSO:rng" + self._seed + counter.to_bytes(8, "big"))
        return xof.digest(size)

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n deve ser positivo")
        size = (n.bit_length() + 7) // 8 + _EXTRA_BYTES
        return int.from_bytes(self._block(size), "big") % n


def default_rng(seed: bytes | str | None = None):
    if seed is None:
        return SystemRandom()
    return SeededRandom(seed)
