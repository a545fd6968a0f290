import json
import math

import pytest

from propratio import (
    SummaryInput,
    generate_population,
    load_population_csv,
    load_summary_json,
    write_population_csv,
)
from propratio.errors import ParseError, ValidationError
from propratio.sampling import SyntheticSpec


class TestPopulationCsv:
    def test_minimal_file(self, tmp_path):
        path = tmp_path / "pop.csv"
        path.write_text("phi,x\n1,2.0\n0,1.0\n")
        pop = load_population_csv(path)
        assert pop.size == 2
        assert pop.units[0].phi == 1
        assert pop.units[1].x == 1.0

    def test_round_trip_is_exact(self, tmp_path):
        pop = generate_population(SyntheticSpec(N=60, target_p=0.4, target_rho=0.7, seed=2))
        path = tmp_path / "pop.csv"
        write_population_csv(path, pop)
        assert load_population_csv(path) == pop

    def test_bad_phi_reports_line(self, tmp_path):
        path = tmp_path / "pop.csv"
        path.write_text("phi,x\n1,2.0\n2,1.0\n")
        with pytest.raises(ParseError) as err:
            load_population_csv(path)
        assert err.value.line == 3

    def test_missing_header(self, tmp_path):
        path = tmp_path / "pop.csv"
        path.write_text("1,2.0\n0,1.0\n")
        with pytest.raises(ParseError) as err:
            load_population_csv(path)
        assert err.value.line == 1

    def test_empty_file(self, tmp_path):
        path = tmp_path / "pop.csv"
        path.write_text("")
        with pytest.raises(ParseError):
            load_population_csv(path)

    def test_bad_float(self, tmp_path):
        path = tmp_path / "pop.csv"
        path.write_text("phi,x\n1,two\n")
        with pytest.raises(ParseError) as err:
            load_population_csv(path)
        assert err.value.line == 2

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "pop.csv"
        path.write_text("phi,x\n1,2.0,9\n")
        with pytest.raises(ParseError):
            load_population_csv(path)

    def test_non_finite_x(self, tmp_path):
        path = tmp_path / "pop.csv"
        path.write_text("phi,x\n1,inf\n")
        with pytest.raises(ParseError):
            load_population_csv(path)


def write_summary(tmp_path, **overrides):
    data = {
        "n": 11, "N": 40, "P": 0.525, "x_bar_pop": 14.4,
        "rho_pb": 0.897, "c_p": 0.963, "c_x": 0.3085,
    }
    data.update(overrides)
    path = tmp_path / "summary.json"
    path.write_text(json.dumps(data))
    return path


class TestSummaryJson:
    def test_reference_fixture(self, tmp_path):
        summary = load_summary_json(write_summary(tmp_path))
        assert summary == SummaryInput(
            n=11, N=40, P=0.525, x_bar_pop=14.4, rho_pb=0.897, c_p=0.963, c_x=0.3085
        )

    def test_design_moments_conversion(self, tmp_path):
        dm = load_summary_json(write_summary(tmp_path)).to_design_moments()
        assert math.isclose(dm.f, 29 / 440, rel_tol=1e-15)
        assert dm.summary.p == 0.525

    def test_unknown_key_rejected(self, tmp_path):
        with pytest.raises(ValidationError, match="unknown"):
            load_summary_json(write_summary(tmp_path, c_y=0.5))

    def test_missing_key_rejected(self, tmp_path):
        path = tmp_path / "summary.json"
        path.write_text(json.dumps({"n": 11, "N": 40}))
        with pytest.raises(ValidationError, match="missing"):
            load_summary_json(path)

    def test_out_of_range_correlation(self, tmp_path):
        with pytest.raises(ValidationError):
            load_summary_json(write_summary(tmp_path, rho_pb=1.2))

    def test_zero_sample_size(self, tmp_path):
        with pytest.raises(ValidationError):
            load_summary_json(write_summary(tmp_path, n=0))

    def test_non_numeric_value(self, tmp_path):
        with pytest.raises(ValidationError):
            load_summary_json(write_summary(tmp_path, P="half"))

    def test_invalid_json_reports_line(self, tmp_path):
        path = tmp_path / "summary.json"
        path.write_text("{\n  broken\n}")
        with pytest.raises(ParseError) as err:
            load_summary_json(path)
        assert err.value.line == 2
