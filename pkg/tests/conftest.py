from __future__ import annotations

import pytest

from knowcard import model
from knowcard.store import CardStore


@pytest.fixture
def fixture_card():
    return model.build_lead_protection_fixture()


@pytest.fixture
def store(tmp_path):
    return CardStore(tmp_path / "store")


@pytest.fixture
def client(store):
    from fastapi.testclient import TestClient

    from knowcard.service import create_app

    return TestClient(create_app(store))
