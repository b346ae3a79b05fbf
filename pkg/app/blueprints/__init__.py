from flask import Response, request

from app.transport.envelope import MessageType, load_bytes, seal, unseal

ENVELOPE_MIMETYPE = "application/octet-stream"


def read_envelope(expected: MessageType, group):
    return unseal(load_bytes(request.get_data(cache=False)), group, expected)


def envelope_response(obj, status: int = 200) -> Response:
    return Response(seal(obj), status=status, mimetype=ENVELOPE_MIMETYPE)
