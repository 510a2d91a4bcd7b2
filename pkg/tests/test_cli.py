import io
import json
from pathlib import Path

import pytest

from relaxrev.cli import main

SAMPLES = Path(__file__).resolve().parents[1] / "samples"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    args = [str(SAMPLES / a) if a.endswith((".kb", ".toml")) else a for a in argv]
    code = main(args, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    doc = json.loads(out)
    assert doc["schema"] == 1
    return doc


def test_tweety_coherent_kappa_bot():
    doc = run_json("revise", "tweety_old.kb", "tweety_new.kb", "--op", "kappa_bot", "--mode", "coherent")
    assert doc["vector"] == [1, 1]
    assert doc["revised"] == ["Bot [= bird", "Bot [= flies", "Tweety & flies [= Bot"]
    assert doc["candidates"] == [[0, 1], [1, 0]]


def test_tweety_minimal_tie_break():
    doc = run_json("revise", "tweety_old.kb", "tweety_new.kb", "--op", "kappa_bot")
    assert doc["mode"] == "minimal" and doc["vector"] == [1, 0]
    assert doc["revised"] == ["Bot [= bird", "bird [= flies", "Tweety & flies [= Bot"]


def test_exception_relaxation_on_el_document():
    argv = ("revise", "tweety_old.kb", "tweety_new.kb", "--op", "rho_exceptions", "--exceptions", "Tweety")
    code, _, err = run(*argv)
    assert code == 3 and "not exhaustive" in json.loads(err)["error"]["message"]
    doc = run_json(*argv, "--allow-non-exhaustive")
    assert doc["vector"] == [0, 1]
    assert doc["revised"][1] == "bird [= flies | Tweety"


def test_rich_variants():
    cup = run_json("revise", "rich_old.kb", "rich_new.kb", "--op", "rho_cup", "--bound", "2",
                   "--allow-non-exhaustive")
    assert cup["revised"][0] == "Bob [= all hasChild. (rich | John)"
    q = run_json("revise", "rich_old.kb", "rich_new.kb", "--op", "rho_q", "--bound", "2")
    assert q["revised"][0] == "Bob [= some hasChild. rich"
    assert cup["vector"] == q["vector"] == [1, 0, 0]


def test_bob_rho_e():
    doc = run_json("revise", "bob_old.kb", "bob_new.kb", "--op", "rho_e", "--bound", "3")
    assert doc["vector"] == [1]
    assert doc["revised"][1] == "judge & female [= Bot"


def test_consistent_on_contradiction_is_not_an_error():
    doc = run_json("consistent", "contradiction.kb")
    assert doc["consistent"] is False
    code, out, _ = run("models", "contradiction.kb", "--format", "text")
    assert code == 0 and out.startswith("0 non-trivial models")


def test_entails_and_models():
    assert run_json("entails", "tweety_old.kb", "Tweety [= flies")["entails"] is True
    assert run_json("entails", "tweety_old.kb", "bird [= Tweety")["entails"] is False
    doc = run_json("models", "equality_old.kb", "--bound", "3", "--limit", "0")
    assert doc["command"] == "models"


def test_relax_uses_the_kb_as_context():
    code, out, _ = run("relax", "tweety_old.kb", "--op", "hamming")
    assert code == 3
    doc = run_json("relax", "tweety_old.kb", "--op", "rho_leaves", "--times", "1")
    assert doc["command"] == "relax"


def test_check_agm_small_corpus():
    doc = run_json("check-agm", "hamming_coherent.toml", "--atoms", "1", "--sentences", "2")
    rows = {r["postulate"]: r for r in doc["postulates"]}
    for g in ("G1", "G2", "G3"):
        assert rows[g]["failed"] == 0 and rows[g]["checked"] == 92 * 92
    assert doc["corpus"]["kbs"] == 92


def test_output_is_deterministic():
    argv = ("revise", "tweety_old.kb", "tweety_new.kb", "--op", "kappa_bot", "--mode", "coherent")
    assert run(*argv)[1] == run(*argv)[1]


@pytest.mark.parametrize("argv,code,kind", [
    (("nope",), 1, "usage"),
    (("revise", "tweety_old.kb"), 1, "usage"),
    (("consistent", "missing.kb"), 2, "io"),
    (("entails", "tweety_old.kb", "Tweety [= "), 2, "parse"),
    (("revise", "tweety_old.kb", "tweety_new.kb", "--op", "no_such_op"), 3, None),
    (("revise", "tweety_old.kb", "tweety_new.kb", "--op", "rho_exceptions",
      "--allow-non-exhaustive"), 3, None),
    (("revise", "tweety_old.kb", "contradiction.kb", "--op", "kappa_bot"), 2, "signature"),
])
def test_errors_are_json_on_stderr(argv, code, kind):
    got, out, err = run(*argv)
    assert got == code and out == ""
    payload = json.loads(err)
    assert payload["schema"] == 1 and payload["error"]["message"]
    if kind is not None:
        assert payload["error"]["kind"] == kind


def test_bad_config_is_input_error(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[operator\n")
    code, _, err = run("check-agm", str(bad))
    assert code == 2 and json.loads(err)["error"]["kind"] == "parse"


def test_text_format():
    code, out, _ = run("revise", "tweety_old.kb", "tweety_new.kb", "--op", "kappa_bot",
                       "--mode", "coherent", "--format", "text")
    assert code == 0
    assert out.splitlines()[0] == "vector: [1, 1]  mode: coherent"
    assert "Tweety & flies [= Bot" in out
