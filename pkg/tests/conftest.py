import math
from pathlib import Path

import pytest

from kellygame import build_market, shannon_demon_market

# Exact scenario constants, computed independently of the package:
# volatility ln 2, drift sigma^2 / 2, and the derived rates for the
# half-stock rule against the buy-and-hold rule.
SIGMA = math.log(2.0)
SIGMA2 = SIGMA * SIGMA                      # 0.4804530139182014
MU = SIGMA2 / 2.0                           # 0.2402265069591007
HALF_GROWTH = MU * 0.5 - SIGMA2 * 0.125     # 0.0600566267397752
HALF_VARIANCE = 0.25 * SIGMA2               # 0.1201132534795503
KERNEL_HALF_VS_ONE = (MU - SIGMA2) * (0.5 - 1.0)  # 0.1201132534795503

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(scope="session")
def shannon():
    return shannon_demon_market()


@pytest.fixture(scope="session")
def two_asset():
    return build_market(r=0.02, mu=[0.06, 0.1], sigma=[0.2, 0.3], rho=[[1.0, 0.4], [0.4, 1.0]])
