from __future__ import annotations

import pytest

from qcpline import qcp


@pytest.fixture(scope="session")
def ref_dec():
    """Reference configuration q=2, c=1, t1=1, N=256, K=40."""
    return qcp.decompose(qcp.TruncationContext(q=2.0, c=1.0, N=256, margin=64), 40)


@pytest.fixture(scope="session")
def ref_report(ref_dec):
    return qcp.measure_decomposition(ref_dec)
