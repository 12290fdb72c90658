from flask import Blueprint, jsonify, current_app
from torb.services.job_manager import JobManager

bp = Blueprint('status', __name__)


@bp.route('/status/<job_id>', methods=['GET'])
def get_job_status(job_id):
    """Get current genus search status"""

    try:
        status = JobManager(current_app).get_status(job_id)
        if status is None:
            return jsonify({'status': 'unknown', 'message': 'Job not found'}), 404

        return jsonify(status), 200

    except Exception as e:
        return jsonify({'error': f'Failed to get status: {str(e)}'}), 500


@bp.route('/genus/<job_id>', methods=['GET'])
def get_genus_results(job_id):
    """Get the genus record of a finished job; 202 while inconclusive"""

    try:
        manager = JobManager(current_app)
        results = manager.get_results(job_id)

        if not results:
            return jsonify({'error': 'Genus results not found'}), 404

        code = 200 if results.get('conclusive') else 202
        return jsonify(results), code

    except Exception as e:
        return jsonify({'error': f'Failed to retrieve results: {str(e)}'}), 500
