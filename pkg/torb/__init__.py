from flask import Flask, jsonify
from flask_cors import CORS
from werkzeug.exceptions import HTTPException
from torb.services.debug_logger import DebugLogger
from torb.config import Config

__version__ = "0.1.0"


def create_app():
    app = Flask(__name__)

    # Load configuration
    app.config.from_object(Config)
    app.config['MAX_FINISHED_JOBS'] = Config.max_finished_jobs()

    # Setup logging system
    log_level = app.config.get('LOG_LEVEL', 'INFO')
    DebugLogger.setup_logger(log_level=log_level, log_file=Config.log_file() or None)

    # Validate configuration
    Config.validate_config()

    # Initialize CORS
    CORS(app)

    @app.errorhandler(HTTPException)
    def handle_http_error(e):
        """Unknown routes, wrong methods and oversized bodies answer in JSON"""
        DebugLogger.log_warning("HTTP error", {"code": e.code, "name": e.name})
        return jsonify({'error': e.description}), e.code

    # In-memory genus search state
    app.genus_jobs = {}
    app.genus_results = {}
    app.genus_threads = {}

    # Register blueprints
    from torb.routes import api, search, status
    app.register_blueprint(api.bp)
    app.register_blueprint(search.bp)
    app.register_blueprint(status.bp)

    DebugLogger.log_info("Application initialized successfully")
    DebugLogger.log_system_health("Flask App", "Running", {
        "debug_mode": app.debug,
        "log_level": log_level,
        "genus_budget": Config.genus_budget(),
        "genus_pair_length": Config.genus_pair_length(),
        "max_content_length": app.config.get('MAX_CONTENT_LENGTH')
    })

    return app
