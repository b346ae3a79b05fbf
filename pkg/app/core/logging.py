import json
import logging


def setup_logging(app=None, level=None):
    if level is None:
        level = app.config.get("LOG_LEVEL", "INFO") if app is not None else "INFO"
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s: %(message)s")


def fingerprint_hex(data: bytes, size: int = 8) -> str:
    """Short hex prefix of an encoded public value, for log lines only."""
    return data[:size].hex()


def log_event(action, **kw):
    try:
        payload = {"component": "asso", "action": action}
        payload.update({k: v for k, v in kw.items() if v is not None})
        logging.getLogger("asso").info(json.dumps(payload, ensure_ascii=False))
    except Exception:
        pass
