"""Record HTTP API responses as JSON fixtures for the console test suite.

The console is tested against recorded responses of the real service so
its expectations stay verbatim with the API. Rerun after any change to
the engine or the packaged fixtures:

    python3 scripts/record_console_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from gridresponse.model import attack_graph_to_obj, parse_attack_graph
from gridresponse.scenario import load_scenario
from gridresponse.service import create_app

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "frontend" / "tests" / "fixtures"

CRITERIA = (
    "cost_to_implement",
    "time_to_implement",
    "setup_locality",
    "duration_of_activation",
    "area_of_impact",
    "technical_impact",
)


def uniform_weights() -> dict[str, float]:
    return {criterion: 1.0 / 6.0 for criterion in CRITERIA}


def focused_weights(focus: str, value: float) -> dict[str, float]:
    rest = (1.0 - value) / (len(CRITERIA) - 1)
    return {criterion: value if criterion == focus else rest for criterion in CRITERIA}


def write(name: str, obj: object) -> None:
    path = FIXTURE_DIR / name
    path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    client = TestClient(create_app())

    havex = load_scenario("havex").template()
    havex_obj = attack_graph_to_obj(havex)
    write("havex_graph.json", havex_obj)

    single = parse_attack_graph(
        json.dumps(
            {
                "id": "single-step",
                "nodes": [havex_obj["nodes"][0]],
                "edges": [],
            }
        )
    )
    single_obj = attack_graph_to_obj(single)

    response = client.get("/api/catalog")
    assert response.status_code == 200, response.text
    write("catalog.json", response.json())

    response = client.post(
        "/api/analyze",
        json={"attack_graph": havex_obj, "weights": uniform_weights()},
    )
    assert response.status_code == 200, response.text
    write("analyze_havex_uniform.json", response.json())

    response = client.post(
        "/api/analyze",
        json={
            "attack_graph": havex_obj,
            "weights": focused_weights("cost_to_implement", 1.0),
        },
    )
    assert response.status_code == 200, response.text
    write("analyze_havex_cost.json", response.json())

    response = client.post(
        "/api/analyze",
        json={"attack_graph": single_obj, "weights": uniform_weights()},
    )
    assert response.status_code == 200, response.text
    write("analyze_single_step.json", response.json())

    response = client.post(
        "/api/sensitivity",
        json={
            "attack_graph": havex_obj,
            "focus": "cost_to_implement",
            "runs": 100,
            "seed": 42,
        },
    )
    assert response.status_code == 200, response.text
    body = response.json()
    assert body["slope"] is not None and body["slope"] < 0, body["slope"]
    write("sensitivity_havex_cost.json", body)

    response = client.post(
        "/api/sensitivity",
        json={"attack_graph": havex_obj, "focus": "cost_to_implement", "runs": 0},
    )
    assert response.status_code == 400, response.text
    write("error_runs.json", response.json())

    response = client.post(
        "/api/analyze",
        json={
            "attack_graph": havex_obj,
            "weights": uniform_weights(),
            "strategy": "topsis",
        },
    )
    assert response.status_code == 400, response.text
    body = response.json()
    assert body.get("element") == "topsis", body
    write("error_strategy.json", body)


if __name__ == "__main__":
    main()
