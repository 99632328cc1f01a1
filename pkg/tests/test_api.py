"""HTTP API: status, posted checks and the run archive"""

from conftest import data_file


def read(*parts):
    with open(data_file(*parts), encoding="UTF-8") as f:
        return f.read()


class TestStatus:

    def test_status(self, client):
        response = client.get('/api/v1/status')
        assert response.status_code == 200
        body = response.get_json()
        assert body["status"] == "OK"
        assert body["schema"] == 1
        assert "max_classes" in body["limits"]


class TestCheck:

    def test_check_is_archived(self, client, storage):
        response = client.post('/api/v1/check',
                               json={"model": read("models", "periodic.fcr"), "prop": "req3"})
        assert response.status_code == 200
        body = response.get_json()
        assert body["status"] == "holds"
        assert [p["name"] for p in body["properties"]] == ["req3"]
        assert body["run_id"] in {run.id for run in storage.all("CheckRun").values()}

    def test_parse_error(self, client):
        response = client.post('/api/v1/check', json={"model": "component main is par end"})
        assert response.status_code == 400
        assert response.get_json()["error"] == "ParseError"

    def test_missing_model(self, client):
        response = client.post('/api/v1/check', json={"prop": "req1"})
        assert response.status_code == 400
        assert response.get_json()["message"] == "Missing model"

    def test_not_json(self, client):
        response = client.post('/api/v1/check', data="model", content_type="text/plain")
        assert response.status_code == 400
        assert response.get_json()["message"] == "Not a JSON"

    def test_bad_limit(self, client):
        response = client.post('/api/v1/check', json={"model": "main", "max_classes": 0})
        assert response.status_code == 400


class TestSched:

    def test_single_task(self, client):
        response = client.post('/api/v1/sched', json={"table": read("tasks", "single_task.txt")})
        assert response.status_code == 200
        body = response.get_json()
        assert body["status"] == "holds"
        assert body["modes"]["wcet"]["verdict"] == "SCHEDULABLE"

    def test_invalid_table(self, client):
        response = client.post('/api/v1/sched',
                               json={"table": read("tasks", "wcet_over_deadline.txt")})
        assert response.status_code == 400
        assert response.get_json()["error"] == "InvalidTaskSpec"


class TestRuns:

    def test_list_get_delete(self, client):
        posted = client.post('/api/v1/sched',
                             json={"table": read("tasks", "single_task.txt")}).get_json()
        run_id = posted["run_id"]

        listed = client.get('/api/v1/runs').get_json()
        assert [run["id"] for run in listed] == [run_id]
        assert listed[0]["command"] == "sched"

        one = client.get('/api/v1/runs/{}'.format(run_id)).get_json()
        assert one["report"]["modes"]["interval"]["schedulable"] is True

        assert client.delete('/api/v1/runs/{}'.format(run_id)).status_code == 200
        assert client.get('/api/v1/runs/{}'.format(run_id)).status_code == 404
        assert client.get('/api/v1/runs').get_json() == []

    def test_unknown_run(self, client):
        response = client.get('/api/v1/runs/nope')
        assert response.status_code == 404
        assert response.get_json()["error"] == "Not Found"
