#!/usr/bin/python3
"""Has functions and other items common to all views"""
from flask import request
from werkzeug.exceptions import BadRequest

from tempock import models
from tempock.pipeline import archive

# Variables
err_msg = ['Not a JSON', 'Missing model', 'Missing table']
allows = ['GET', 'DELETE']


def reach_endpoint(endpoints):
    """Creates a dictionary of methods and their endpoint functions"""
    if not endpoints:
        return {}
    return {allows[n]: i for n, i in enumerate(endpoints)}


def json_body(required):
    """The request's JSON object, which must carry the ``required`` text field"""
    data = request.get_json(silent=True)
    if type(data) is not dict:
        raise BadRequest(description=err_msg[0])
    if not isinstance(data.get(required), str):
        raise BadRequest(description='Missing {}'.format(required))
    return data


def limit(data, key):
    """Optional positive integer field"""
    value = data.get(key)
    if value is None:
        return None
    if type(value) is not int or value <= 0:
        raise BadRequest(description='{} must be a positive integer'.format(key))
    return value


def fetch_data(cls):
    """Archived records of a class, oldest first"""
    return sorted(models.storage.all(cls).values(), key=lambda r: r.created_at)


def fetch_data_id(cls, id_):
    return models.storage.get(cls, id_)


def delete_obj(obj):
    """removes objects from the archive"""
    if obj:
        models.storage.delete(obj)
        models.storage.save()


def archive_report(report):
    """Archives a report and returns its JSON body with the run id"""
    run = archive(report)
    body = report.to_dict()
    body["run_id"] = run.id
    return body
