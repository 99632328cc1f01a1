#!/usr/bin/python3
"""One archived command run and its report"""

import json

from sqlalchemy import Column, Integer, String, Text

from tempock import settings
from tempock.models.base_model import Base, BaseModel


class CheckRun(BaseModel, Base):
    """Command, source label, outcome and the JSON report of a run"""

    if settings.STORAGE_TYPE == "db":
        __tablename__ = 'check_runs'
        command = Column(String(32), nullable=False)
        source = Column(String(256), nullable=False)
        status = Column(String(32), nullable=False)
        exit_code = Column(Integer, nullable=False)
        report = Column(Text, nullable=False)
    else:
        command = ""
        source = ""
        status = ""
        exit_code = 0
        report = "{}"

    @classmethod
    def from_report(cls, command, source, status, exit_code, report: dict):
        return cls(command=command, source=source, status=status, exit_code=exit_code,
                   report=json.dumps(report))

    @property
    def payload(self) -> dict:
        return json.loads(self.report)

    def summary(self) -> dict:
        """Listing entry without the report body"""
        return {"id": self.id, "command": self.command, "source": self.source,
                "status": self.status, "exit_code": self.exit_code,
                "created_at": self.created_at.isoformat()}
