from pathlib import Path

import pytest

from speedprof import Boundary, ProblemSpec, cubic_path, reparametrize

ROOT = Path(__file__).resolve().parents[1]
PROBLEMS = ROOT / "problems"
CORPUS = sorted(PROBLEMS.glob("*.json"))

# composite Simpson, 2e6 panels, on sqrt(45 + 9 tau^4) over [-1, 1]
CUBIC_LENGTH = 13.67775412238972

FIG2 = dict(A=1.5, B=2.0, C=1.0, V=5.0)


@pytest.fixture(scope="session")
def cubic():
    amap, model = reparametrize(cubic_path())
    return amap, model


@pytest.fixture(scope="session")
def cubic_model(cubic):
    return cubic[1]


def fig2_spec(model, v0, vL):
    return ProblemSpec(L=model.length, v0=v0, vL=vL, **FIG2)


@pytest.fixture
def fig2a_spec(cubic_model):
    return fig2_spec(cubic_model, Boundary.fixed(0.0), Boundary.fixed(0.0))
