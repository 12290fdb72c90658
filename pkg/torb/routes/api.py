from datetime import datetime
from typing import Callable

from flask import Blueprint, request, jsonify
from torb.errors import DomainError, ParseError, SearchInconclusive
from torb.services import records
from torb.services.debug_logger import DebugLogger
from torb.services.records import OutputRecord, matrix_from_json

bp = Blueprint('api', __name__)


def _json_body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        DebugLogger.log_warning("Invalid JSON data", {
            "ip": request.remote_addr,
            "content_type": request.content_type
        })
        raise ParseError("request body must be a JSON object")
    return data


def _matrix(data: dict, name: str = 'matrix'):
    if name not in data:
        raise ParseError(f"missing field {name!r}")
    return matrix_from_json(data[name])


def _matrices(data: dict) -> list:
    values = data.get('matrices', [])
    if not isinstance(values, list):
        raise ParseError("'matrices' must be a list")
    return [matrix_from_json(value) for value in values]


def _flag(data: dict, name: str, default: bool) -> bool:
    value = data.get(name, default)
    if not isinstance(value, bool):
        raise ParseError(f"{name!r} must be true or false")
    return value


def respond(build: Callable[[], OutputRecord]):
    """Run a record builder and map its outcome to an HTTP response"""

    start_time = datetime.now()
    try:
        record = build()
        if record.exit_code == records.EXIT_INCONCLUSIVE:
            status_code = 202
        else:
            status_code = 200
        body = record.to_json()
    except ParseError as e:
        status_code, body = 400, {'error': str(e)}
    except DomainError as e:
        status_code, body = 422, {'error': str(e)}
    except SearchInconclusive as e:
        status_code, body = 202, records.error_record('search', e, records.EXIT_INCONCLUSIVE).data
    except Exception as e:
        DebugLogger.log_error("Request failed", e, {
            "path": request.path,
            "ip": request.remote_addr
        })
        status_code, body = 500, {'error': f'Internal error: {str(e)}'}

    duration = (datetime.now() - start_time).total_seconds()
    DebugLogger.log_request(
        method=request.method,
        path=request.path,
        status_code=status_code,
        duration=duration,
        user_agent=request.headers.get('User-Agent')
    )
    return jsonify(body), status_code


@bp.route('/api/class', methods=['POST'])
def cobordism_class():
    """Oriented (Z12) or unoriented (Z2+Z2) class of one monodromy"""

    def build():
        data = _json_body()
        return records.class_record(_matrix(data), oriented=_flag(data, 'oriented', True))

    return respond(build)


@bp.route('/api/cobordant', methods=['POST'])
def cobordant():
    def build():
        data = _json_body()
        ms = _matrices(data)
        if len(ms) != 2:
            raise ParseError(f"cobordant expects 2 matrices, got {len(ms)}")
        return records.cobordant_record(ms[0], ms[1], oriented=_flag(data, 'oriented', True))

    return respond(build)


@bp.route('/api/amphichiral', methods=['POST'])
def amphichiral():
    """Is the oriented bundle cobordant to its orientation reverse"""
    return respond(lambda: records.amphichiral_record(_matrix(_json_body())))


@bp.route('/api/decompose', methods=['POST'])
def decompose():
    return respond(lambda: records.decompose_record(_matrix(_json_body())))


@bp.route('/api/normal-form', methods=['POST'])
def normal_form():
    return respond(lambda: records.normal_form_record(_matrix(_json_body())))


@bp.route('/api/witness', methods=['POST'])
def witness():
    """Commutator or square witness of an element of SL(2,Z)'"""

    def build():
        data = _json_body()
        return records.witness_record(_matrix(data), kind=data.get('kind', 'commutators'))

    return respond(build)


@bp.route('/api/bound', methods=['POST'])
def bound():
    def build():
        data = _json_body()
        return records.bound_record(_matrices(data), orientable=_flag(data, 'orientable', True))

    return respond(build)


@bp.route('/api/build-cobordism', methods=['POST'])
def build_cobordism():
    def build():
        data = _json_body()
        return records.cobordism_record(_matrices(data), base_orientable=_flag(data, 'base_orientable', True))

    return respond(build)


@bp.route('/api/check', methods=['POST'])
def check():
    """Re-evaluate a witness, genus or build-cobordism record"""
    return respond(lambda: records.check_record(_json_body()))


@bp.route('/api/verify', methods=['GET'])
def verify():
    return respond(records.verify_record)
