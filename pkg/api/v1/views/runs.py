#!/usr/bin/python3
"""Renders archived runs"""
from flask import jsonify, request
from werkzeug.exceptions import MethodNotAllowed, NotFound

from api.v1.views import app_views
from tempock.models import CheckRun

from .commons import allows, delete_obj, fetch_data, fetch_data_id, reach_endpoint


def get_run(run_id=None):
    """Lists the runs, or returns one with its report
    """
    if run_id is None:
        return jsonify([run.summary() for run in fetch_data(CheckRun)])
    run = fetch_data_id(CheckRun, run_id)
    if run is None:
        raise NotFound(description='No run {}'.format(run_id))
    return jsonify({**run.summary(), "report": run.payload})


def delete_run(run_id=None):
    """Deletes the run using the given id.
    """
    run = fetch_data_id(CheckRun, run_id)
    if run is None:
        raise NotFound(description='No run {}'.format(run_id))
    delete_obj(run)
    return jsonify({}), 200


@app_views.route('/runs', methods=['GET'])
@app_views.route('/runs/<run_id>', methods=allows)
def handle_runs(run_id=None):
    """Handles the runs endpoint.
    ---
    tags:
      - runs
    responses:
      200:
        description: run summaries, one run with its report, or an empty object on delete
      404:
        description: no such run
    """
    run_handlers = reach_endpoint([get_run, delete_run])
    rm = request.method
    if rm in run_handlers and (run_id is not None or rm == 'GET'):
        return run_handlers[rm](run_id)
    raise MethodNotAllowed(allows)
