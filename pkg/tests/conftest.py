import pathlib

import pytest

ROOT = pathlib.Path(__file__).resolve().parent.parent


@pytest.fixture(autouse=True)
def _repo_cwd(monkeypatch):
    # plumbing fixtures are referenced relative to the repository root
    monkeypatch.chdir(ROOT)
