#!/usr/bin/python3
"""Run archive kept in PostgreSQL through SQLAlchemy"""

import logging
import os

from sqlalchemy import create_engine
from sqlalchemy.orm import scoped_session, sessionmaker

from tempock.models.base_model import Base
from tempock.models.check_run import CheckRun

logger = logging.getLogger(__name__)

classes = {'CheckRun': CheckRun}


class DBStorage:
    """Session over the TEMPOCK_DB_* database; tables are created on reload"""

    __engine = None
    __session = None

    def __init__(self):
        user = os.getenv("TEMPOCK_DB_USER")
        passwd = os.getenv("TEMPOCK_DB_PWD")
        db = os.getenv("TEMPOCK_DB")
        host = os.getenv("TEMPOCK_DB_HOST")
        env = os.getenv("TEMPOCK_ENV")
        self.__engine = create_engine('postgresql+psycopg2://{}:{}@{}/{}'
                                      .format(user, passwd, host, db),
                                      pool_pre_ping=True)
        logger.info("run archive on database %s at %s", db, host)
        if env == "test":
            Base.metadata.drop_all(self.__engine)

    def all(self, cls=None):
        """Records keyed by ``<class>.<id>``, only those of ``cls`` when given"""
        if cls is None:
            tables = list(classes.values())
        else:
            tables = [classes[cls] if isinstance(cls, str) else cls]
        found = {}
        for table in tables:
            for row in self.__session.query(table).all():
                found["{}.{}".format(type(row).__name__, row.id)] = row
        return found

    def new(self, obj):
        if obj:
            self.__session.add(obj)

    def save(self):
        self.__session.commit()

    def delete(self, obj=None):
        if obj:
            self.__session.delete(obj)
            self.save()

    def reload(self):
        Base.metadata.create_all(self.__engine)
        factory = sessionmaker(bind=self.__engine, expire_on_commit=False)
        self.__session = scoped_session(factory)()

    def get(self, cls, id):
        """The record of class ``cls`` with this id, or None"""
        if id is None or cls is None:
            return None
        table = classes[cls] if isinstance(cls, str) else cls
        return self.__session.get(table, id)

    def get_one_by(self, cls, **kwargs):
        return self.__session.query(cls).filter_by(**kwargs).first()

    def close(self):
        self.__session.close()
