#!/usr/bin/python3
"""Service status"""
from flask import jsonify

from api.v1.views import app_views
from tempock import __version__, settings


@app_views.route('/status', methods=['GET'])
def status():
    """Version, report schema and exploration limits
    ---
    tags:
      - status
    responses:
      200:
        description: service is up
    """
    return jsonify({"status": "OK", "version": __version__,
                    "schema": settings.REPORT_SCHEMA, "storage": settings.STORAGE_TYPE,
                    "limits": {"max_classes": settings.MAX_CLASSES,
                               "time_budget": settings.TIME_BUDGET,
                               "threads": settings.THREADS}})
