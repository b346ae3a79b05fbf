class AssoError(Exception):
    error_class = "AssoError"
    http_status = 400

    def __init__(self, detail: str = ""):
        super().__init__(detail or self.error_class)
        self.detail = detail

    def to_dict(self) -> dict:
        return {"error": self.error_class, "detail": self.detail}


class UnsupportedSecurityLevel(AssoError):
    error_class = "UnsupportedSecurityLevel"


class DegenerateExponent(AssoError):
    error_class = "DegenerateExponent"
    http_status = 500


class ZeroInversion(AssoError):
    error_class = "ZeroInversion"


class DecodeError(AssoError):
    error_class = "DecodeError"


class UnknownMessageType(DecodeError):
    error_class = "UnknownMessageType"


class UnsupportedVersion(DecodeError):
    error_class = "UnsupportedVersion"


class InvalidServiceSet(AssoError):
    error_class = "InvalidServiceSet"


class ProofRejected(AssoError):
    error_class = "ProofRejected"
    http_status = 403

    def __init__(self, reason: str):
        super().__init__(f"check failed: {reason}")
        self.reason = reason

    def to_dict(self) -> dict:
        return {"error": self.error_class, "detail": self.detail, "reason": self.reason}


class UnknownVerifier(AssoError):
    error_class = "UnknownVerifier"
    http_status = 404

    def __init__(self, identity: str):
        super().__init__(f"verifier nao registrado: {identity}")
        self.identity = identity


class TagNotFound(AssoError):
    error_class = "TagNotFound"
    http_status = 404

    def __init__(self, identity: str):
        super().__init__(f"nenhuma tag para {identity}")
        self.identity = identity


class CredentialRejected(AssoError):
    error_class = "CredentialRejected"


class InvalidRegistration(AssoError):
    error_class = "InvalidRegistration"


class DuplicateIdentity(AssoError):
    error_class = "DuplicateIdentity"
    http_status = 409

    def __init__(self, identity: str):
        super().__init__(f"identidade ja registrada: {identity}")
        self.identity = identity


class StorageError(AssoError):
    error_class = "StorageError"
    http_status = 500


class MissingMaterial(AssoError):
    error_class = "MissingMaterial"
    http_status = 503


class RecordNotFound(AssoError):
    error_class = "RecordNotFound"
    http_status = 404

    def __init__(self, identity: str):
        super().__init__(f"identidade nao registrada: {identity}")
        self.identity = identity
