import math
import os
import subprocess
from pathlib import Path

import pytest

SOURCE = Path(os.environ.get("TRACTLAB_SOURCE_DIR", Path(__file__).resolve().parents[2]))
GOLDEN = SOURCE / "tests" / "golden"
CLI = os.environ.get("TRACTLAB_CLI")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


@pytest.mark.skipif(not CLI, reason="TRACTLAB_CLI not set")
class TestExecutable:
    def test_version(self):
        r = run("--version")
        assert r.returncode == 0
        assert "0.1.0" in r.stdout

    def test_complexity_matches_golden(self):
        r = run("complexity", "--config", str(GOLDEN / "korobov_complexity.json"))
        assert r.returncode == 0
        assert r.stdout == (GOLDEN / "korobov_complexity.complexity.out").read_text()

    def test_json_output_parses(self, tmp_path):
        import json

        out = tmp_path / "o.json"
        r = run("classify", "--config", str(GOLDEN / "tensor_classify.json"), "--format", "json", "--out", str(out))
        assert r.returncode == 0, r.stderr
        doc = json.loads(out.read_text())
        assert doc["command"] == "classify"

    def test_exit_codes(self, tmp_path):
        assert run("complexity", "--config", str(tmp_path / "missing.json")).returncode == 2
        assert run("verify", "--config", str(GOLDEN / "corrupted_tolerance.json")).returncode == 4
        r = run("spectrum", "--config", str(GOLDEN / "korobov_spectrum.json"), "--budget", "3")
        assert r.returncode == 3
        assert "completed ranks" in r.stderr


tl = None
try:
    import tractlab as tl
except ImportError:
    pass


@pytest.mark.skipif(tl is None, reason="python module not installed")
class TestModule:
    def test_zeta(self):
        assert abs(tl.zeta(2.0) - math.pi**2 / 6) < 1e-12

    def test_korobov_counts(self):
        m = tl.SpectrumModel.korobov(1.0)
        assert [tl.n_worst(m, d, 0.9) for d in range(1, 6)] == [3**d for d in range(1, 6)]

    def test_top_eigenvalues_sorted(self):
        top = tl.top_eigenvalues(tl.SpectrumModel.korobov(2.0), 3, 50)
        vals = [v for v, _ in top]
        assert len(vals) == 50
        assert vals[0] == 1.0
        assert all(a >= b for a, b in zip(vals, vals[1:]))

    def test_average_case(self):
        m = tl.SpectrumModel.explicit([tl.UnivariateSpectrum.geometric(1.0, 0.5)])
        assert abs(tl.avg_error(m, 1, 4) - 0.25) < 1e-14
        assert tl.n_avg(m, 1, 0.5) == 2

    def test_spt_verdict(self):
        m = tl.SpectrumModel.weighted_korobov(1.0, tl.WeightSequence.geometric(0.25))
        v = tl.alg_spt_check(m, tau=1.0, d_max=8)
        assert v["status"] == "HoldsUpToDmax"
        assert len(v["per_d"]) == 8

    def test_bad_parameter_raises(self):
        with pytest.raises(ValueError):
            tl.SpectrumModel.korobov(-1.0)

    def test_run_cli_in_process(self):
        code, out, _ = tl.run_cli(["complexity", "--config", str(GOLDEN / "korobov_complexity.json")])
        assert code == 0
        assert out == (GOLDEN / "korobov_complexity.complexity.out").read_text()
