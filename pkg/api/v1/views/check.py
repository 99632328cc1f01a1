#!/usr/bin/python3
"""Checks the properties of a posted model"""
from flask import jsonify

from api.v1.views import app_views
from tempock.fiacre.parser import parse_program
from tempock.fiacre.wellformed import ensure_wellformed
from tempock.pipeline import CheckReport, RunConfig, check_program

from .commons import archive_report, json_body, limit


@app_views.route('/check', methods=['POST'])
def check():
    """Checks every (or one) property of the model and archives the report
    ---
    tags:
      - check
    parameters:
      - in: body
        name: body
        schema:
          properties:
            model:
              type: string
            prop:
              type: string
            max_classes:
              type: integer
    responses:
      200:
        description: check report (schema 1) with the archived run id
      400:
        description: malformed request or invalid model
    """
    data = json_body('model')
    program = ensure_wellformed(parse_program(data['model'], "<request>"))
    config = RunConfig("check", ("<request>",), prop=data.get('prop'),
                       max_classes=limit(data, 'max_classes')).validate()
    report = CheckReport("check", list(config.inputs))
    check_program(program, config, report)
    return jsonify(archive_report(report)), 200
