"""Replay every stored fixture and require byte-identical output."""

import json
from pathlib import Path

import pytest

from fqlin.cli import main

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"
CASES = sorted(p.name for p in FIXTURES.iterdir() if p.is_dir())


@pytest.mark.parametrize("name", CASES)
def test_fixture_replays_byte_identical(name, tmp_path):
    case = FIXTURES / name
    argv = json.loads((case / "argv.json").read_text(encoding="utf-8"))
    if (case / "input.json").exists():
        argv += ["-i", str(case / "input.json")]
    target = tmp_path / "output.json"
    assert main(argv + ["-o", str(target)]) == 0
    assert target.read_bytes() == (case / "output.json").read_bytes()
