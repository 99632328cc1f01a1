#!/usr/bin/python3
"""
Starting the Flask app for tempock: checks, schedulability and the run archive
"""

import logging

from flasgger import Swagger
from flask import Flask, jsonify
from flask_cors import CORS
from werkzeug.exceptions import HTTPException

from api.v1.views import app_views
from tempock import settings
from tempock.errors import EXIT_USAGE, TempockError

logger = logging.getLogger(__name__)

app = Flask(__name__)
app.url_map.strict_slashes = False

app.register_blueprint(app_views)

CORS(app, resources={r"/*": {"origins": "*"}})

app.config['SWAGGER'] = {
    'title': 'tempock verification API',
    'uiversion': 3
}
Swagger(app)


@app.errorhandler(HTTPException)
def handle_http_exception(e):
    """
    Handles HTTP exceptions and returns JSON response
    """
    response = jsonify({
        "error": e.name,
        "message": e.description
    })
    response.status_code = e.code
    return response


@app.errorhandler(TempockError)
def handle_tempock_error(e):
    """Input errors are the client's (400), anything else is ours (500)"""
    response = jsonify(e.to_dict())
    response.status_code = 400 if e.is_input_error or e.code == EXIT_USAGE else 500
    if response.status_code == 500:
        logger.error("%s: %s", e.name, e.description)
    return response


if __name__ == '__main__':
    app.run(host=settings.HOST, port=settings.PORT, debug=True)
