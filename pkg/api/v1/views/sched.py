#!/usr/bin/python3
"""Schedulability of a posted task table"""
from flask import jsonify

from api.v1.views import app_views
from tempock.library.tasks import check_tasks, parse_task_table
from tempock.pipeline import SchedReport

from .commons import archive_report, json_body, limit


@app_views.route('/sched', methods=['POST'])
def sched():
    """Both execution-time readings of the table, archived
    ---
    tags:
      - sched
    parameters:
      - in: body
        name: body
        schema:
          properties:
            table:
              type: string
            max_classes:
              type: integer
    responses:
      200:
        description: verdicts of the exact and interval modes
      400:
        description: malformed request or invalid task table
    """
    data = json_body('table')
    tasks = parse_task_table(data['table'])
    report = SchedReport("sched", ["<request>"])
    report.results = check_tasks(tasks, max_classes=limit(data, 'max_classes'))
    return jsonify(archive_report(report)), 200
