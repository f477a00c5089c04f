"""Session fixture: real artifacts produced by the quasispec CLI.

The renderer is exercised against genuine producer output, reached only
through the installed console script, never by importing the producer.
"""

import shutil
import subprocess

import pytest


def _run(exe, *args):
    proc = subprocess.run([exe, *args], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    return proc


@pytest.fixture(scope="session")
def artifacts(tmp_path_factory):
    exe = shutil.which("quasispec")
    assert exe is not None, "the quasispec console script must be installed"
    root = tmp_path_factory.mktemp("artifacts")
    decay = root / "decay"
    average = root / "average"
    dos = root / "dos"
    for d in (decay, average, dos):
        d.mkdir()
    _run(exe, "decay", "--coupling", "0.5", "--half-width", "50",
         "--xi-max", "150", "--xi-points", "1501", "--out", str(decay))
    _run(exe, "average", "--coupling", "0", "--half-width", "60",
         "--t-max", "12", "--t-points", "25", "--out", str(average))
    _run(exe, "dos", "--coupling", "0.5", "--half-width", "0", "--out", str(dos))
    return {"decay": decay, "average": average, "dos": dos}
