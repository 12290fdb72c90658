import uuid
from flask import Blueprint, request, jsonify, current_app
from torb.config import Config
from torb.errors import DomainError, ParseError
from torb.services.debug_logger import DebugLogger
from torb.services.invariants import in_derived_sl
from torb.services.job_manager import JobManager
from torb.services.records import matrix_from_json

bp = Blueprint('search', __name__)


def _positive(data: dict, name: str, default=None):
    value = data.get(name, default)
    if value is None:
        return None
    try:
        value = int(value)
    except (TypeError, ValueError):
        raise ParseError(f"{name!r} must be a positive integer")
    if value <= 0:
        raise ParseError(f"{name!r} must be a positive integer")
    return value


@bp.route('/genus', methods=['POST'])
def start_genus_search():
    """Validate the request and start a background genus search"""

    try:
        data = request.get_json(silent=True)
        if not isinstance(data, dict) or 'matrix' not in data:
            DebugLogger.log_warning("Genus search request without a matrix", {
                "ip": request.remote_addr
            })
            return jsonify({'error': 'request body must be a JSON object with a matrix'}), 400

        m = matrix_from_json(data['matrix'])
        g_max = _positive(data, 'g_max', Config.MAX_GENUS)
        budget = _positive(data, 'budget')
        pair_length = _positive(data, 'pair_length')

        if m.det != 1 or not in_derived_sl(m):
            raise DomainError("not in the derived subgroup")

        job_id = str(uuid.uuid4())
        JobManager(current_app).start_genus_search(m, g_max, job_id, budget, pair_length)

        DebugLogger.log_info("Genus search started", {
            "job_id": job_id,
            "g_max": g_max,
            "ip": request.remote_addr
        })
        return jsonify({
            'job_id': job_id,
            'message': 'Genus search started',
            'status': 'queued'
        }), 202

    except ParseError as e:
        return jsonify({'error': str(e)}), 400
    except DomainError as e:
        return jsonify({'error': str(e)}), 422
    except Exception as e:
        DebugLogger.log_error("Failed to start genus search", e, {"ip": request.remote_addr})
        return jsonify({'error': f'Failed to start genus search: {str(e)}'}), 500
