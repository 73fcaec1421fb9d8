import csv
import json
import os
import subprocess
import sys

import pytest

from layerws import LayeredTree
from layerws.cli import main
from layerws.errors import IncompatibleTraceError
from layerws.harness import (RunConfig, corrupt_color, corrupt_header,
                             corrupt_layer, corrupt_next_layer,
                             corrupt_queue_swap, lockstep_replay, run,
                             verify_structure)
from layerws.workload import GeneratorSpec, TraceOp, parse

SCENARIO_A = "I 1\nI 2\nI 3\nI 4\nI 5\nS 1\n"


def write_trace(tmp_path, text, name="trace.txt"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_run_scenario_a(tmp_path):
    config = RunConfig(
        structure="lws",
        trace=parse(SCENARIO_A),
        verify_every=1,
        csv_path=str(tmp_path / "rows.csv"),
        json_path=str(tmp_path / "summary.json"),
    )
    result = run(config)
    assert result.exit_code == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["violations"] == 0
    assert summary["final_layers"] == {"1": [1, 5, 4, 3], "2": [2]}
    assert set(summary) >= {"max_cost", "mean_cost", "max_cost_over_lgw",
                            "amortized_ratio", "ops", "violations"}
    with open(tmp_path / "rows.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["i", "op", "key", "cost", "layer", "w", "ub", "bound"]
    assert len(rows) == 7
    search_row = rows[6]
    assert search_row[1] == "S" and search_row[4] == "2"  # found in layer 2


def test_run_rejects_updates_for_skip_splay():
    config = RunConfig(structure="skip_splay", trace=parse("I 5\n"))
    with pytest.raises(IncompatibleTraceError):
        run(config)


def test_run_skip_splay_searches(tmp_path):
    trace = [TraceOp("S", 1 + (7 * i) % 15) for i in range(60)]
    config = RunConfig(structure="skip_splay", trace=trace, verify_every=10,
                       json_path=str(tmp_path / "s.json"))
    result = run(config)
    assert result.exit_code == 0
    assert result.summary["ops"] == 60
    assert result.summary["max_cost"] > 0


def test_verify_empty_tree_is_clean():
    assert verify_structure(LayeredTree()) == []


def test_run_zipf_respects_committed_search_bound(tmp_path):
    from layerws.constants import load_constants
    config = RunConfig(structure="lws",
                       gen=GeneratorSpec("zipf_recency", universe=300, ops=5000, seed=41),
                       verify_every=1000,
                       json_path=str(tmp_path / "z.json"))
    result = run(config)
    assert result.exit_code == 0
    assert result.summary["max_cost_over_lgw"] <= load_constants()["search_per_lgw"]


def test_run_generated_baseline():
    config = RunConfig(structure="redblack_baseline",
                       gen=GeneratorSpec("uniform", universe=60, ops=400, seed=5),
                       verify_every=50)
    result = run(config)
    assert result.exit_code == 0


def test_run_ws_reference_has_no_cost():
    config = RunConfig(structure="ws_reference",
                       gen=GeneratorSpec("uniform", universe=40, ops=200, seed=5))
    result = run(config)
    assert result.exit_code == 0
    assert result.summary["max_cost"] == 0


def test_reports_are_deterministic(tmp_path):
    def one(path):
        config = RunConfig(structure="lws",
                           gen=GeneratorSpec("zipf_recency", universe=50, ops=300, seed=9),
                           csv_path=str(path), verify_every=100)
        run(config)
        return path.read_text()

    assert one(tmp_path / "a.csv") == one(tmp_path / "b.csv")


def test_lockstep_replay_catches_planted_divergence():
    from layerws.errors import DivergenceError
    trace = parse(SCENARIO_A)
    stats = lockstep_replay(trace)
    assert stats.hits == 1 and not stats.violations

    # sabotage: run again but corrupt the tree mid-flight via a wrong op
    import layerws.harness as hmod
    tree_ops = []
    orig = hmod.LayeredTree.search

    def crooked(self, key, fresh=True):
        out = orig(self, key, fresh)
        if key == 1:
            corrupt_queue_swap(self, 4)
        return out

    hmod.LayeredTree.search = crooked
    try:
        with pytest.raises(DivergenceError):
            lockstep_replay(trace)
    finally:
        hmod.LayeredTree.search = orig


# -- fault injection --------------------------------------------------------------

def fresh_tree(n=40):
    tree = LayeredTree()
    for k in range(1, n + 1):
        tree.insert(k)
    assert not verify_structure(tree)
    return tree


def test_color_flip_detected():
    tree = fresh_tree()
    corrupt_color(tree, 12)
    kinds = {v.kind for v in verify_structure(tree)}
    assert kinds & {"rb-red-red", "rb-black-height", "rb-root-red"}


def test_layer_inversion_detected():
    tree = fresh_tree()
    root_key = tree.engine.root.key
    corrupt_layer(tree, root_key, 2)
    kinds = {v.kind for v in verify_structure(tree)}
    assert kinds & {"layer-monotone", "layer-size", "layer-shape"}


def test_queue_swap_detected():
    tree = fresh_tree()
    victim = tree.layer_snapshot()[2][3]
    corrupt_queue_swap(tree, victim)
    found = verify_structure(tree)
    assert any(v.kind in ("queue-chain", "queue-nextlayer") for v in found)


def test_header_desync_detected():
    tree = fresh_tree()
    corrupt_header(tree, last_size=tree.last_size + 1)
    found = verify_structure(tree)
    assert any(v.kind == "header" for v in found)


def test_next_layer_corruption_detected():
    tree = fresh_tree()
    youngest = tree.layer_snapshot()[1][0]
    corrupt_next_layer(tree, youngest, 999)
    found = verify_structure(tree)
    assert any(v.kind == "queue-nextlayer" for v in found)


# -- command line ---------------------------------------------------------------------

def test_cli_scenario_a(tmp_path, capsys):
    trace = write_trace(tmp_path, SCENARIO_A)
    code = main(["--structure", "lws", "--trace", trace, "--verify-every", "1"])
    out = capsys.readouterr().out
    assert code == 0
    assert '"violations": 0' in out


def test_cli_incompatible_trace(tmp_path, capsys):
    trace = write_trace(tmp_path, "I 5\n")
    code = main(["--structure", "skip_splay", "--trace", trace])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cli_parse_error(tmp_path, capsys):
    trace = write_trace(tmp_path, "Q 5\n")
    code = main(["--structure", "lws", "--trace", trace])
    assert code == 2
    assert "line 1" in capsys.readouterr().err


def test_cli_generator(tmp_path):
    code = main(["--structure", "lws", "--gen", "zipf_recency", "--n", "30",
                 "--ops", "200", "--seed", "3",
                 "--json", str(tmp_path / "g.json")])
    assert code == 0
    assert json.loads((tmp_path / "g.json").read_text())["ops"] == 200


def test_cli_entrypoint_subprocess(tmp_path):
    trace = write_trace(tmp_path, SCENARIO_A)
    proc = subprocess.run(
        [sys.executable, "-m", "layerws.cli", "--structure", "lws",
         "--trace", trace],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr


def test_constants_env_override(tmp_path):
    alt = tmp_path / "constants.json"
    alt.write_text(json.dumps({
        "search_per_lgw": 1e-9,
        "update_per_lgn": 1e-9,
        "skip_per_lgn": 1.0,
        "skip_doubled_factor": 1.0,
        "skip_doubled_additive": 0.0,
        "amortized_flag_threshold": 1.0,
    }))
    env = dict(os.environ, LWS_CONSTANTS=str(alt))
    proc = subprocess.run(
        [sys.executable, "-c",
         "from layerws.constants import load_constants;"
         "print(load_constants()['search_per_lgw'])"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert float(proc.stdout.strip()) == 1e-9
