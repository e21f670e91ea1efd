import json
from fractions import Fraction

from click.testing import CliRunner

from padr import plocal
from padr.cli import main
from padr.plocal import PadicChar


def run(*args):
    return CliRunner().invoke(main, list(args))


class TestVerify:
    def test_gauss_suite_p7(self):
        res = run("verify", "gauss", "--p", "7")
        assert res.exit_code == 0
        report = json.loads(res.output)
        assert report["suite"] == "gauss"
        assert report["failed"] == 0
        assert len(report["identities"]) == 12

    def test_all_suites_pass(self):
        res = run("verify", "all", "--seed", "1")
        assert res.exit_code == 0
        report = json.loads(res.output)
        assert len(report["suites"]) == 8
        assert all(sub["failed"] == 0 for sub in report["suites"])

    def test_seed_determinism(self):
        a = run("verify", "tate", "--seed", "3")
        b = run("verify", "tate", "--seed", "3")
        assert a.output == b.output
        assert a.exit_code == b.exit_code == 0

    def test_text_format(self):
        res = run("verify", "fourier", "--format", "text")
        assert res.exit_code == 0
        lines = res.output.splitlines()
        assert lines[0].startswith("suite fourier:")
        assert all(l.lstrip().startswith("ok") for l in lines[1:])

    def test_unknown_suite_usage_error(self):
        res = run("verify", "nope")
        assert res.exit_code == 2


class TestInterp:
    def test_default_report(self):
        res = run("interp")
        assert res.exit_code == 0
        report = json.loads(res.output)
        assert report["p"] == 5
        assert report["E_inf"] == "1"
        assert report["m_Q"] == 0
        assert report["Gamma_VQ"] == "1/8*pi^-10"
        assert report["criticality"] == {"x_critical": True,
                                         "y_critical": True}
        pi = tuple(PadicChar.unramified(5, u) for u in (2, 1, 3))
        sigma = (PadicChar.unramified(5, 5),
                 PadicChar.unramified(5, Fraction(1, 2)))
        assert report["E_p"] == plocal.euler_modified(pi, sigma).serialize()
        assert report["E_adjoint"] == \
            plocal.adjoint_modified(sigma).serialize()

    def test_satake_override(self):
        data = json.dumps({"pi": ["3", "1", "2"], "sigma": ["7", "1/3"]})
        res = run("interp", "--p", "7", "--satake", data)
        assert res.exit_code == 0
        report = json.loads(res.output)
        pi = tuple(PadicChar.unramified(7, u) for u in (3, 1, 2))
        sigma = (PadicChar.unramified(7, 7),
                 PadicChar.unramified(7, Fraction(1, 3)))
        assert report["E_p"] == plocal.euler_modified(pi, sigma).serialize()

    def test_malformed_satake_scalar(self):
        data = json.dumps({"pi": ["1//2", "1", "3"], "sigma": ["5", "1/2"]})
        res = run("interp", "--satake", data)
        assert res.exit_code == 2

    def test_malformed_weights(self):
        res = run("interp", "--weights", "1,2")
        assert res.exit_code == 2

    def test_noncritical_warns(self):
        res = run("interp", "--weights", "0,0,1", "--kp", "1,1")
        assert res.exit_code == 0
        report = json.loads(res.output)
        assert not report["criticality"]["x_critical"]
        assert "warnings" in report

    def test_text_format(self):
        res = run("interp", "--format", "text")
        assert res.exit_code == 0
        assert "Gamma_VQ: 1/8*pi^-10" in res.output
