import io
from pathlib import Path

import pytest

from oposqueeze.cli import main

REPO = Path(__file__).resolve().parents[1]


@pytest.fixture
def paper_cfg():
    return str(REPO / "paper.cfg")


@pytest.fixture
def run():
    """Run the CLI in-process; returns (exit_code, stdout_text)."""
    def _run(*argv):
        out = io.StringIO()
        code = main(list(argv), out=out)
        return code, out.getvalue()
    return _run


def report(text):
    return dict(line.split(": ", 1) for line in text.splitlines() if ": " in line)
