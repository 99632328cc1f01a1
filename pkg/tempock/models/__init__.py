#!/usr/bin/python3
"""Archive of verification runs, kept in a JSON file or in PostgreSQL"""

from tempock import settings
from tempock.models.check_run import CheckRun

storage = None

if settings.STORAGE_TYPE == "db":
    from tempock.models.engine.db_storage import DBStorage
    storage = DBStorage()
else:
    from tempock.models.engine.file_storage import FileStorage
    storage = FileStorage()
storage.reload()
