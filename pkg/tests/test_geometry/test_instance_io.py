"""
Unit tests for the JSON instance format.
"""

import json
import tempfile
from pathlib import Path

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ellipsoid_distance.exceptions import InstanceFormatError
from ellipsoid_distance.geometry import (
    Ellipsoid,
    instance_to_dict,
    load_instance,
    parse_instance,
    save_instance,
)


class TestParseInstance:
    """Test suite for parse_instance."""

    def setup_method(self):
        """Set up a valid document in the ellipsoid layout."""
        self.document = {
            "d": 2,
            "Q1": [[1.0, 0.0], [0.0, 1.0]],
            "z1": [0.0, 0.0],
            "Q2": [[4.0, 0.0], [0.0, 9.0]],
            "z2": [10.0, 0.0],
        }

    def test_ellipsoid_layout(self):
        """Q/z layout produces the two ellipsoids."""
        e1, e2 = parse_instance(self.document)

        assert e1.d == 2
        assert_allclose(e2.q.entries, np.diag([4.0, 9.0]))
        assert_allclose(e2.z, [10.0, 0.0])

    def test_quadric_layout(self):
        """A/b/alpha layout is converted to center/shape form."""
        document = {
            "d": 2,
            "E1": {"A": [[1.0, 0.0], [0.0, 1.0]], "b": [-2.0, 0.0], "alpha": 0.0},
            "E2": {"A": [[1.0, 0.0], [0.0, 4.0]], "b": [0.0, 0.0], "alpha": -2.0},
        }

        e1, e2 = parse_instance(document)

        assert_allclose(e1.z, [1.0, 0.0])
        assert_allclose(e2.q.entries, np.diag([0.5, 2.0]))

    def test_asymmetric_noise_symmetrized(self):
        """File-sourced rounding noise is symmetrized on load."""
        self.document["Q1"] = [[1.0, 0.2 + 1e-14], [0.2, 1.0]]

        e1, _ = parse_instance(self.document)

        assert e1.q.entries[0, 1] == e1.q.entries[1, 0]

    def test_missing_key(self):
        """A missing matrix is reported by name."""
        del self.document["Q2"]

        with pytest.raises(InstanceFormatError, match="Q2"):
            parse_instance(self.document)

    def test_wrong_shape(self):
        """A center of the wrong length is rejected."""
        self.document["z1"] = [0.0, 0.0, 0.0]

        with pytest.raises(InstanceFormatError, match="z1"):
            parse_instance(self.document)

    def test_not_positive_definite(self):
        """An indefinite shape matrix becomes an InstanceFormatError."""
        self.document["Q1"] = [[1.0, 0.0], [0.0, -1.0]]

        with pytest.raises(InstanceFormatError, match="positive definite"):
            parse_instance(self.document)

    def test_bad_dimension(self):
        """d must be a positive integer."""
        self.document["d"] = "two"

        with pytest.raises(InstanceFormatError):
            parse_instance(self.document)

    def test_not_an_object(self):
        """The document must be a JSON object."""
        with pytest.raises(InstanceFormatError):
            parse_instance([1, 2, 3])


class TestInstanceFiles:
    """Test suite for load_instance and save_instance."""

    def setup_method(self):
        """Set up an ellipsoid pair."""
        self.e1 = Ellipsoid.from_arrays([[2.0, 0.5], [0.5, 1.0]], [0.1, -0.2])
        self.e2 = Ellipsoid.from_arrays(np.diag([0.25, 0.3]), [0.05, 0.02])

    def test_save_and_load(self):
        """An ellipsoid-layout file loads back exactly."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = save_instance(Path(tmpdir) / "pair.json", self.e1, self.e2)

            e1, e2 = load_instance(path)

        assert_allclose(e1.q.entries, self.e1.q.entries, rtol=0.0, atol=0.0)
        assert_allclose(e2.z, self.e2.z, rtol=0.0, atol=0.0)

    def test_quadric_form(self):
        """A quadric-layout file loads back to the same pair."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = save_instance(Path(tmpdir) / "pair.json", self.e1, self.e2, form="quadric")
            with open(path) as f:
                assert "E1" in json.load(f)

            e1, e2 = load_instance(path)

        assert_allclose(e1.q.entries, self.e1.q.entries, rtol=1e-12)
        assert_allclose(e2.z, self.e2.z, rtol=1e-12)

    def test_metadata_kept(self):
        """Metadata is written and ignored on load."""
        data = instance_to_dict(self.e1, self.e2, metadata={"seed": 7})

        assert data["metadata"] == {"seed": 7}
        parse_instance(data)

    def test_unknown_form(self):
        """Only the two layouts can be written."""
        with pytest.raises(ValueError):
            instance_to_dict(self.e1, self.e2, form="matrix")

    def test_syntax_error_reports_line(self):
        """Malformed JSON is reported with file and line."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "broken.json"
            path.write_text('{\n  "d": 2,\n  "Q1": [[1, 0], [0, 1]\n}\n')

            with pytest.raises(InstanceFormatError) as info:
                load_instance(path)

        assert info.value.line == 4
        assert str(info.value).startswith(f"{path}:4: ")

    def test_schema_error_reports_line(self):
        """A wrongly shaped matrix is reported at the line of its key."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = save_instance(Path(tmpdir) / "pair.json", self.e1, self.e2)
            data = json.loads(path.read_text())
            data["Q2"] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
            text = json.dumps(data, indent=2)
            path.write_text(text)

            with pytest.raises(InstanceFormatError, match="Q2") as info:
                load_instance(path)

        lines = text.splitlines()
        expected = next(i for i, s in enumerate(lines, start=1) if '"Q2"' in s)
        assert info.value.line == expected
        assert str(info.value).startswith(f"{path}:{expected}: ")

    def test_nested_key_reports_line(self):
        """Errors inside E2 point at the offending entry of E2, not of E1."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "pair.json"
            path.write_text(
                "{\n"
                '  "d": 2,\n'
                '  "E1": {"A": [[1, 0], [0, 1]], "b": [0, 0], "alpha": -1},\n'
                '  "E2": {\n'
                '    "A": [[1, 0], [0, 1]],\n'
                '    "b": [0, 0, 0],\n'
                '    "alpha": -1\n'
                "  }\n"
                "}\n"
            )

            with pytest.raises(InstanceFormatError, match="E2.b") as info:
                load_instance(path)

        assert info.value.line == 6
        assert info.value.key == "E2.b"

    def test_missing_key_reports_enclosing_object(self):
        """A missing key is reported at the object that lacks it."""
        with tempfile.TemporaryDirectory() as tmpdir:
            path = Path(tmpdir) / "pair.json"
            path.write_text('\n{\n  "d": 2,\n  "Q1": [[1, 0], [0, 1]],\n  "z1": [0, 0]\n}\n')

            with pytest.raises(InstanceFormatError, match="Q2") as info:
                load_instance(path)

        assert info.value.line == 2

    def test_missing_file(self):
        """An unreadable file is an InstanceFormatError naming the path."""
        with pytest.raises(InstanceFormatError, match="missing.json"):
            load_instance("does/not/exist/missing.json")
