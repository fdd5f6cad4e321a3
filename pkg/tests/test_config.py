"""
Unit tests for solver settings and config files.
"""

import argparse

import pytest

from ellipsoid_distance.config import (
    SolverSettings,
    apply_config,
    load_config_file,
)
from ellipsoid_distance.exceptions import ConfigError
from ellipsoid_distance.solvers import UpdateRule


class TestSolverSettings:
    """Test suite for SolverSettings."""

    def test_solver_defaults_survive(self):
        """Unset fields keep each solver's own defaults."""
        settings = SolverSettings()

        convex = settings.to_convex_options(adaptive=True)
        nonconvex = settings.to_nonconvex_options()

        assert (convex.tau0, convex.eta) == (1.0, 0.1)
        assert (nonconvex.tau0, nonconvex.eta) == (10.0, 0.99)
        assert convex.adaptive

    def test_values_forwarded(self):
        """Provided values reach both option types."""
        settings = SolverSettings(epsilon=1e-8, tau0=3.0, max_iterations=50, tau_max=1e6)

        convex = settings.to_convex_options(adaptive=False)
        nonconvex = settings.to_nonconvex_options()

        assert convex.epsilon == 1e-8 and convex.tau0 == 3.0 and convex.max_iterations == 50
        assert nonconvex.epsilon0 == 1e-8
        assert nonconvex.tau_max == 1e6

    def test_unknown_rule(self):
        """Unknown update rules raise ConfigError."""
        with pytest.raises(ConfigError):
            SolverSettings(update_rule="random").to_nonconvex_options()

    def test_from_namespace(self):
        """Flags map onto settings; --no-restart disables the restart."""
        args = argparse.Namespace(
            eps=1e-7,
            tau0=None,
            max_iters=200,
            update_rule="theoretical",
            no_restart=True,
            reduced_system=True,
        )

        settings = SolverSettings.from_namespace(args)

        assert settings.epsilon == 1e-7
        assert settings.max_iterations == 200
        assert settings.restart is False
        assert settings.use_reduced_system is True
        assert settings.to_nonconvex_options().update_rule == UpdateRule.THEORETICAL
        assert settings.tol_feas == 1e-6


class TestConfigFile:
    """Test suite for load_config_file and apply_config."""

    def test_sections_flattened(self, tmp_path):
        """Sections and dashed keys flatten to flag names."""
        path = tmp_path / "config.yaml"
        path.write_text("solver:\n  max-iters: 10\n  eps: 1.0e-7\nsweep:\n  count: 3\nd: [2, 3]\n")

        values = load_config_file(path)

        assert values == {"max_iters": 10, "eps": 1e-7, "count": 3, "d": [2, 3]}

    def test_empty_file(self, tmp_path):
        """An empty file has no settings."""
        path = tmp_path / "empty.yaml"
        path.write_text("")

        assert load_config_file(path) == {}

    @pytest.mark.parametrize(
        "text", ["solver: [1, 2\n", "- just\n- a list\n", "colour: blue\n"]
    )
    def test_invalid_files(self, tmp_path, text):
        """Malformed YAML, non-mappings and unknown keys are rejected."""
        path = tmp_path / "bad.yaml"
        path.write_text(text)

        with pytest.raises(ConfigError):
            load_config_file(path)

    def test_missing_file(self, tmp_path):
        """A missing file is a ConfigError."""
        with pytest.raises(ConfigError):
            load_config_file(tmp_path / "absent.yaml")

    def test_apply_only_unset(self):
        """apply_config fills None attributes only."""
        args = argparse.Namespace(count=None, seed=5)

        apply_config(args, {"count": 3, "seed": 9})

        assert args.count == 3
        assert args.seed == 5
