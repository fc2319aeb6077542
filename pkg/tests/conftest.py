import os
import sys

import numpy as np
import pytest

from tcith_sdp import params, piop, rsdp, vc
from tcith_sdp.field import get_field
from tcith_sdp.polyrel import PolyVec


def random_polyvec(K, rows, deg, rng):
    return PolyVec(K, rng.integers(0, K.p, (rows, deg + 1, K.mu)))


def honest_round1(ps, rng=None, w=None):
    inst, w0 = rsdp.keygen(ps)
    w = w0 if w is None else w
    tables = rsdp.homogeneous_tables(inst)
    salt = os.urandom(2 * ps.lam // 8)
    com, dw, state = piop.prover_round1(w, inst, salt, os.urandom(ps.lam // 8), ps, tables)
    return inst, w, tables, salt, com, dw, state


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def toy():
    return params.toy()


@pytest.fixture
def toy_field(toy):
    return get_field(toy.p, toy.mu)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
