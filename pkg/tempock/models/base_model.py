#!/usr/bin/python3
"""Base class of the archived records"""

import uuid
from datetime import datetime

from sqlalchemy import Column, DateTime, String
from sqlalchemy.orm import declarative_base

from tempock import models, settings

TIME_FORMAT = '%Y-%m-%dT%H:%M:%S.%f'

if settings.STORAGE_TYPE == "db":
    Base = declarative_base()
else:
    Base = object


class BaseModel:
    """Id and timestamps shared by every record"""

    if settings.STORAGE_TYPE == "db":
        id = Column(String(60), primary_key=True)
        created_at = Column(DateTime, nullable=False, default=datetime.utcnow)
        updated_at = Column(DateTime, nullable=False, default=datetime.utcnow)

    def __init__(self, *args, **kwargs):
        """Builds a record, from a stored dictionary when kwargs are given"""
        kwargs.pop('__class__', None)
        kwargs.setdefault('id', str(uuid.uuid4()))
        for stamp in ('created_at', 'updated_at'):
            value = kwargs.get(stamp)
            if value is None:
                kwargs[stamp] = datetime.utcnow()
            elif not isinstance(value, datetime):
                kwargs[stamp] = datetime.strptime(value, TIME_FORMAT)
        for key, value in kwargs.items():
            setattr(self, key, value)

    def __str__(self):
        return '[{}] ({}) {}'.format(type(self).__name__, self.id, self.to_dict())

    def __repr__(self):
        return self.__str__()

    def save(self):
        """Stamps updated_at and writes the record to the archive"""
        self.updated_at = datetime.utcnow()
        if models.storage is None:
            raise RuntimeError("storage is not initialised")
        models.storage.new(self)
        models.storage.save()

    def to_dict(self):
        """Plain dictionary with iso timestamps and the class name"""
        dictionary = dict(self.__dict__)
        dictionary['__class__'] = type(self).__name__
        dictionary['created_at'] = self.created_at.strftime(TIME_FORMAT)
        dictionary['updated_at'] = self.updated_at.strftime(TIME_FORMAT)
        dictionary.pop('_sa_instance_state', None)
        return dictionary

    def delete(self):
        models.storage.delete(self)
