import json

import pytest

from complement_forge.catalog import Catalog, CatalogIntegrityError, PAPER_BLOCKS
from complement_forge.cli import main
from complement_forge.density import DensityParams
from complement_forge.fractal import build_density_spec
from complement_forge.solver import CoverInstance, exact_min_complement
from complement_forge.ternary import enumerate_pattern, zero_one_pattern


@pytest.fixture()
def catalog(tmp_path, monkeypatch):
    monkeypatch.setenv("COMPLEMENT_FORGE_CATALOG", str(tmp_path / "cat"))
    return Catalog.default()


def test_seed_entries_verify(catalog):
    ids = catalog.ensure_seeded()
    assert len(ids) == 5
    for k in range(1, 6):
        entry, cert = catalog.best_complement(k)
        assert cert.verify()
        assert len(entry["values"]) == len(PAPER_BLOCKS[k])
        assert entry["provenance"]["source"] == "paper"
        assert entry["optimal"] == "unknown"  # no proof artifact shipped


def test_round_trip_and_tamper_detection(catalog):
    inst = CoverInstance(2, enumerate_pattern(zero_one_pattern(2)))
    cert = exact_min_complement(inst)
    entry_id = catalog.add_complement(cert, source="solver")
    loaded = catalog.load_entry(entry_id)
    assert loaded["optimal"] == "proven-optimal"
    # tamper with the stored code
    path = catalog._path(entry_id)
    data = json.loads(path.read_text())
    data["values"] = [0, 1, 2]
    path.write_text(json.dumps(data))
    with pytest.raises(CatalogIntegrityError):
        catalog.load_entry(entry_id)


def test_spec_round_trip(catalog):
    params = DensityParams.from_alpha("0.8")
    spec = build_density_spec(params, 3)
    catalog.add_spec(spec, "quadratic-a4-5-s3", params=params.describe())
    entry = catalog.find_spec("quadratic-a4-5-s3")
    rebuilt = catalog.spec_from_entry(entry)
    assert [st.n for st in rebuilt.stages] == [1, 3, 5]
    assert [st.code.values for st in rebuilt.stages] == [st.code.values for st in spec.stages]


def test_best_complement_prefers_proofs(catalog):
    catalog.ensure_seeded()
    inst = CoverInstance(3, enumerate_pattern(zero_one_pattern(3)))
    catalog.add_complement(exact_min_complement(inst), source="solver")
    entry, _ = catalog.best_complement(3)
    assert entry["optimal"] == "proven-optimal"


def test_product_probe_via_catalog(catalog):
    catalog.ensure_seeded()
    rep = catalog.product_probe(2, 3)
    assert rep.product_size == 15 and rep.reference_size == 14
    assert rep.verdict == "suboptimal" and rep.covers


# -- CLI ------------------------------------------------------------------------


def run_cli(*argv):
    return main(list(argv))


def test_cli_complement_and_verify(catalog, capsys):
    assert run_cli("complement", "--k", "3", "--method", "exact") == 0
    out = capsys.readouterr().out
    assert "size=5" in out and "proven-optimal" in out
    assert run_cli("verify", "--k", "3", "--values", "0,2,7,12,14") == 0
    assert run_cli("verify", "--k", "3", "--values", "000,002,021,110,112", "--ternary") == 0
    assert run_cli("verify", "--k", "3", "--values", "0,2,7,12") == 3
    out = capsys.readouterr().out
    assert "uncovered" in out


def test_cli_exit_codes(catalog, capsys):
    assert run_cli("complement", "--k", "0") == 2  # invalid input
    assert (
        run_cli("complement", "--k", "4", "--method", "exact", "--budget-nodes", "10") == 4
    )  # budget exhausted
    with pytest.raises(SystemExit) as ei:
        run_cli("no-such-command")
    assert ei.value.code == 2


def test_cli_decompose_paper_example(catalog, capsys):
    assert run_cli("decompose", "--x", "0.020", "--spec", "uniform-k3", "--depth", "3") == 0
    out = capsys.readouterr().out
    assert "a=011 b=002" in out
    assert "exact: True" in out


def test_cli_density_json_deterministic(catalog, capsys):
    args = ("density", "--alpha", "0.8", "--n", "500", "--format", "json")
    assert run_cli(*args) == 0
    first = capsys.readouterr().out
    assert run_cli(*args) == 0
    second = capsys.readouterr().out
    assert first == second  # byte-identical for identical args
    doc = json.loads(first)
    assert doc["schema"] == "complement-forge/1"
    assert doc["prefix_match"] is True


def test_cli_gamma_and_report(catalog, capsys):
    assert run_cli("gamma", "--k", "3") == 0
    out = capsys.readouterr().out
    assert "0.488325" in out
    assert run_cli("report", "--all") == 0
    out = capsys.readouterr().out
    for fragment in ("1     2", "2     3", "3     5", "4     9", "5    14"):
        assert fragment in out
    assert "B2 x B3: size 15 vs best 14" in out


def test_cli_boxdim_csv(catalog, capsys, tmp_path):
    target = tmp_path / "est.csv"
    assert run_cli("boxdim", "--set", "cantor", "--depth", "12", "--format", "csv", "--out", str(target)) == 0
    lines = target.read_text().strip().split("\n")
    assert lines[0] == "scale,count,estimate"
    assert len(lines) == 13


def test_cli_netcheck_and_massratio(catalog, capsys):
    assert run_cli("netcheck", "--trials", "30", "--max-level", "6", "--seed", "5") == 0
    out = capsys.readouterr().out
    assert "violations: 0" in out
    assert run_cli("massratio", "--alpha", "0.8", "--levels", "5:9", "--samples", "5", "--seed", "3") == 0
    out = capsys.readouterr().out
    assert "bound violations: 0" in out


def test_cli_spec_build_quadratic(catalog, capsys):
    assert run_cli("spec-build", "--kind", "quadratic", "--alpha", "0.8", "--stages", "3") == 0
    out = capsys.readouterr().out
    assert "quadratic-a4-5-s3" in out
    assert run_cli("decompose", "--x", "0.2", "--spec", "quadratic-a4-5-s3", "--depth", "2") == 0
