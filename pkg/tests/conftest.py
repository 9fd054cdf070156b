import os
import tempfile

# The run registry must not touch the working tree; set before config is imported.
_DATA_DIR = tempfile.mkdtemp(prefix="hankel-lab-")
os.environ.setdefault("HANKEL_DATA_DIR", _DATA_DIR)
os.environ.setdefault("HANKEL_DATABASE_URL", f"sqlite+aiosqlite:///{_DATA_DIR}/runs.db")
os.environ.setdefault("HANKEL_SPECTRA_THREADS", "2")

import pytest  # noqa: E402

from services.params import SymbolKind, SymbolSpec  # noqa: E402


@pytest.fixture
def pure_spec():
    return SymbolSpec(d=1, gamma=1.0)


@pytest.fixture
def general_spec():
    return SymbolSpec(d=2, gamma=1.0, b1=1.0, bm1=0.5, kind=SymbolKind.GENERAL)
