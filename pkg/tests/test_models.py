"""Archived runs in the file storage"""

from datetime import datetime

import pytest

from tempock.models.base_model import TIME_FORMAT
from tempock.models.check_run import CheckRun
from tempock.models.engine.file_storage import FileStorage


def make_run(**overrides):
    fields = dict(command="check", source="periodic.fcr", status="holds", exit_code=0,
                  report={"status": "holds", "properties": []})
    fields.update(overrides)
    return CheckRun.from_report(**fields)


class TestCheckRun:

    def test_to_dict(self):
        run = make_run()
        data = run.to_dict()
        assert data["__class__"] == "CheckRun"
        assert data["id"] == run.id
        assert datetime.strptime(data["created_at"], TIME_FORMAT) == run.created_at
        assert run.payload == {"status": "holds", "properties": []}

    def test_rebuilt_from_dict(self):
        run = make_run(status="violated", exit_code=1)
        copy = CheckRun(**run.to_dict())
        assert copy.id == run.id
        assert copy.created_at == run.created_at
        assert copy.summary() == run.summary()

    def test_distinct_ids(self):
        assert make_run().id != make_run().id


class TestFileStorage:

    def test_save_and_reload(self, storage):
        run = make_run()
        run.save()
        fresh = FileStorage(storage.file_path)
        fresh.reload()
        stored = fresh.get(CheckRun, run.id)
        assert stored is not None
        assert stored.payload == run.payload
        assert stored.summary() == run.summary()

    def test_all_by_name_or_class(self, storage):
        first, second = make_run(), make_run(command="sched")
        first.save()
        second.save()
        assert set(storage.all(CheckRun)) == set(storage.all("CheckRun"))
        assert len(storage.all()) == 2

    def test_delete(self, storage):
        run = make_run()
        run.save()
        run.delete()
        assert storage.get(CheckRun, run.id) is None
        fresh = FileStorage(storage.file_path)
        fresh.reload()
        assert fresh.all() == {}

    def test_missing_file(self, tmp_path):
        store = FileStorage(str(tmp_path / "nested" / "runs.json"))
        store.reload()
        assert store.all() == {}
        store.new(make_run())
        store.save()
        assert (tmp_path / "nested" / "runs.json").exists()

    def test_save_needs_a_storage(self, monkeypatch):
        from tempock import models

        monkeypatch.setattr(models, "storage", None)
        with pytest.raises(RuntimeError):
            make_run().save()
