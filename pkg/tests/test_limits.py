"""Precision-cap and resource-limit behavior."""

from fractions import Fraction

import pytest

from dyndeg.cli import main
from dyndeg.errors import PrecisionError
from dyndeg.gaussian import GaussianInt
from dyndeg.diophantine import cf_expand, theta_interval
from dyndeg.oracle import compose_raw_components, g_map, reduce_triple
from dyndeg.solver import precision_cap, solve_lambda

ZETA = GaussianInt(1, 2)


class TestPrecisionCap:
    def test_default_cap(self, monkeypatch):
        monkeypatch.delenv("DYNDEG_PRECISION_CAP", raising=False)
        assert precision_cap() == 1 << 16

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("DYNDEG_PRECISION_CAP", "4096")
        assert precision_cap() == 4096

    def test_solver_raises_at_cap(self, monkeypatch):
        monkeypatch.setenv("DYNDEG_PRECISION_CAP", "64")
        with pytest.raises(PrecisionError):
            solve_lambda(ZETA, Fraction(1, 10**40))

    def test_cf_raises_at_cap(self, monkeypatch):
        monkeypatch.setenv("DYNDEG_PRECISION_CAP", "32")
        ctx = theta_interval(ZETA, 16)
        with pytest.raises(PrecisionError):
            cf_expand(ctx, 60)

    def test_cli_exit3(self, monkeypatch, capsys):
        monkeypatch.setenv("DYNDEG_PRECISION_CAP", "64")
        code = main(["lambda", "--zeta", "1+2i", "--digits", "40"])
        assert code == 3
        assert "cap" in capsys.readouterr().err

    def test_rejects_tiny_cap(self, monkeypatch):
        monkeypatch.setenv("DYNDEG_PRECISION_CAP", "4")
        with pytest.raises(ValueError):
            precision_cap()


class TestReduceIdempotence:
    def test_on_raw_involution_square(self):
        raw = compose_raw_components(g_map(), g_map())
        once = reduce_triple(*raw)
        twice = reduce_triple(*once.components)
        assert once.components == twice.components
