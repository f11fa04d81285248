import pytest

import flipmc._kernels as kernels
from flipmc._kernels import backends

BACKENDS = sorted(backends())


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Route kernel calls through one backend for the duration of a test."""
    mod = backends()[request.param]
    monkeypatch.setattr(kernels, "Evaluator", mod.Evaluator)
    monkeypatch.setattr(kernels, "all_pairs_bfs", mod.all_pairs_bfs)
    return request.param
