#!/usr/bin/python3
"""Run archive kept in a JSON file"""

import json
import os

from tempock import settings
from tempock.models.check_run import CheckRun

classes = {'CheckRun': CheckRun}


class FileStorage:
    """Records keyed by ``<class>.<id>``, serialised with to_dict"""

    def __init__(self, file_path=None):
        self.__file_path = file_path or settings.FILE_STORAGE
        self.__objects = {}

    @property
    def file_path(self):
        return self.__file_path

    def all(self, cls=None):
        """Records in storage, only those of ``cls`` when given
           Args
              cls: a record class or its name
           Return: dict
        """
        if cls is None:
            return self.__objects
        name = cls if isinstance(cls, str) else cls.__name__
        return {k: v for k, v in self.__objects.items() if k.partition('.')[0] == name}

    def new(self, obj):
        if obj:
            self.__objects["{}.{}".format(type(obj).__name__, obj.id)] = obj

    def save(self):
        """Writes every record to the file"""
        temp = {key: value.to_dict() for key, value in self.__objects.items()}
        folder = os.path.dirname(self.__file_path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(self.__file_path, 'w', encoding="UTF-8") as f:
            json.dump(temp, f)

    def reload(self):
        """Loads the records of the file, if there is one"""
        try:
            with open(self.__file_path, 'r', encoding="UTF-8") as f:
                temp = json.load(f)
        except FileNotFoundError:
            return
        for key, val in temp.items():
            self.__objects[key] = classes[val['__class__']](**val)

    def get(self, cls, id):
        """The record of class ``cls`` with this id, or None"""
        if id is None or cls is None:
            return None
        name = cls if isinstance(cls, str) else cls.__name__
        return self.__objects.get('{}.{}'.format(name, id))

    def delete(self, obj=None):
        if obj:
            self.__objects.pop("{}.{}".format(type(obj).__name__, obj.id), None)
            self.save()

    def close(self):
        self.reload()
