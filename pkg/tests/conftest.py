import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fraczee import FitConfig, builtin_table, fit, select_records


@pytest.fixture(scope="session")
def default_fit():
    """The standard baryon-band fit, run once for the whole session."""
    cfg = FitConfig()
    selected = select_records(builtin_table(), cfg)
    t0 = time.perf_counter()
    result = fit(selected, cfg)
    elapsed = time.perf_counter() - t0
    return cfg, selected, result, elapsed
