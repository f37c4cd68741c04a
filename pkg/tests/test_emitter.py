import io
import json

import pytest

from catcoh.models import OutputFormat, SweepRecord
from catcoh.services.emitter import emit_csv, emit_json, parse_csv, write_records


def make_record(**overrides):
    fields = dict(
        L=2,
        k=1,
        l0=0,
        theta=0.0,
        hermitian_fk=0.75,
        paper_expression_fk=0.5,
        closed_form_paper=0.5,
        closed_form_hermitian=0.75,
        fidelity_gap=0.25,
        asymmetry_systems=0.1,
        asymmetry_bound=0.6931471805599453,
        reservoir_entropy_nats=0.5623351446188083,
        entropy_increment_nats=0.5623351446188083,
        landauer_cost=0.5623351446188083,
        landauer_cost_energy=0.5623351446188083,
        trace_distance_actual=0.1,
        trace_distance_bound=0.2,
    )
    fields.update(overrides)
    return SweepRecord(**fields)


SCHEMA_COLUMNS = [
    "L",
    "k",
    "l0",
    "theta",
    "hermitian_fk",
    "paper_expression_fk",
    "closed_form_paper",
    "closed_form_hermitian",
    "asymmetry_systems",
    "asymmetry_bound",
    "reservoir_entropy_nats",
    "landauer_cost",
    "trace_distance_actual",
    "trace_distance_bound",
    "runtime_ms",
]

EXTRA_COLUMNS = [
    "fidelity_gap",
    "entropy_increment_nats",
    "reservoir_entropy_bits",
    "landauer_cost_energy",
]


def test_csv_header_keeps_schema_prefix():
    stream = io.StringIO()
    emit_csv([], stream, SweepRecord)
    header = stream.getvalue().strip().split(",")
    assert header == SCHEMA_COLUMNS + EXTRA_COLUMNS


def test_csv_cells():
    stream = io.StringIO()
    emit_csv([make_record(closed_form_paper=None, theta=0.1 + 0.2)], stream, SweepRecord)
    row = stream.getvalue().splitlines()[1].split(",")
    header = list(SweepRecord.model_fields)
    cells = dict(zip(header, row))
    assert cells["closed_form_paper"] == ""
    assert cells["runtime_ms"] == ""
    assert cells["theta"] == "0.30000000000000004"
    assert cells["L"] == "2"


def test_csv_parses_back():
    records = [make_record(), make_record(k=2, closed_form_hermitian=None, runtime_ms=1.5)]
    stream = io.StringIO()
    emit_csv(records, stream, SweepRecord)
    assert parse_csv(stream.getvalue(), SweepRecord) == records


def test_parse_rejects_foreign_header():
    with pytest.raises(ValueError):
        parse_csv("a,b\n1,2\n", SweepRecord)


def test_json_nulls():
    stream = io.StringIO()
    emit_json([make_record(closed_form_paper=None)], stream)
    rows = json.loads(stream.getvalue())
    assert rows[0]["closed_form_paper"] is None
    assert rows[0]["hermitian_fk"] == 0.75


def test_write_records_to_file(tmp_path):
    path = tmp_path / "rows.json"
    write_records([make_record()], SweepRecord, str(path), OutputFormat.JSON)
    assert json.loads(path.read_text())[0]["k"] == 1


def test_write_records_to_stdout(capsys):
    write_records([make_record()], SweepRecord, "-", OutputFormat.CSV)
    out = capsys.readouterr().out
    assert out.startswith("L,k,l0,theta")
    assert len(out.splitlines()) == 2
