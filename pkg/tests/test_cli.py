"""CLI behaviour: output formats, determinism, exit codes, golden corpus."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from h4approx.cli import make_corpus, parse_alpha, run, surd_to_json
from h4approx.exact_field import Surd, ZRt2
from h4approx.h4_expansion import RuleStream


def h4(*argv: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "h4approx.cli", *argv],
        capture_output=True,
        text=True,
        timeout=120,
    )


class TestParseAlpha:
    def test_presets(self):
        assert parse_alpha("one").cmp(1) == 0
        alpha = parse_alpha("surd17")
        assert isinstance(alpha, Surd) and not alpha.is_degenerate()

    def test_json(self):
        alpha = parse_alpha('{"P":[3,0],"Q":[1,0],"D":[17,0],"S":[0,2]}')
        assert alpha == parse_alpha("surd17")

    def test_streams(self):
        assert isinstance(parse_alpha("stream:three-powers"), RuleStream)
        assert isinstance(parse_alpha("stream:four-blocks"), RuleStream)

    def test_rejects_bad_json(self):
        from h4approx.cli import ParseError

        with pytest.raises(ParseError):
            parse_alpha('{"P":[3,0]}')
        with pytest.raises(ParseError):
            parse_alpha("nonsense")

    def test_rejects_invalid_surd(self):
        from h4approx.cli import ValidationError

        with pytest.raises(ValidationError):
            parse_alpha('{"P":[1,0],"Q":[1,0],"D":[-3,0],"S":[1,0]}')
        with pytest.raises(ValidationError):
            parse_alpha('{"P":[1,0],"Q":[0,0],"D":[1,0],"S":[0,0]}')


class TestCommands:
    def test_expand_one_digits(self):
        res = h4("expand", "--alpha", "one", "--digits", "5")
        assert res.returncode == 0
        assert res.stdout == "2 2 2 2 2\n"

    def test_expand_terminating_value(self):
        res = h4("expand", "--alpha", '{"P":[5,0],"Q":[0,0],"D":[1,0],"S":[0,1]}',
                 "--digits", "10", "--json")
        assert res.returncode == 0
        payload = json.loads(res.stdout)
        assert payload["digits"] == [3, 3] and payload["terminated"]
        assert payload["boundary"] == "inv_sqrt2"
        assert len(payload["completions"]) == 2

    def test_k_exact_one(self):
        res = h4("k", "--alpha", "one", "--exact", "--json")
        assert res.returncode == 0
        payload = json.loads(res.stdout)
        assert payload["value"] == {"P": [1, 1], "Q": [0, 0], "D": [1, 0], "S": [2, 0]}
        assert payload["decimal"].startswith("1.2071067811865475244")

    def test_best_count_four(self):
        res = h4("best", "--alpha", "surd17", "--count", "4", "--json")
        payload = json.loads(res.stdout)
        got = [(b["p"], b["q"]) for b in payload["best"]]
        assert got == [
            ([0, 2], [1, 0]),
            ([7, 0], [0, 2]),
            ([0, 16], [9, 0]),
            ([57, 0], [0, 16]),
        ]
        assert all(b["is_rosen_convergent"] and b["is_dual_convergent"] for b in payload["best"])

    def test_rosen_csv(self):
        res = h4("rosen", "--alpha", "surd17", "--digits", "3", "--csv")
        lines = res.stdout.strip().splitlines()
        assert lines[0] == "i,eps,a,p_a,p_b,q_a,q_b"
        assert lines[1].startswith("0,,,0,2,1,0")

    def test_legendre(self):
        res = h4("legendre", "--alpha", "surd17", "--p", "0,2", "--q", "1,0")
        assert res.returncode == 0
        assert "best-by-sufficient" in res.stdout

    def test_oracle_matches_best(self):
        a = h4("oracle", "--alpha", "surd17", "--max-q", "30", "--json")
        b = h4("best", "--alpha", "surd17", "--max-q", "30", "--json")
        fa = [(f["p"], f["q"]) for f in json.loads(a.stdout)["best"]]
        fb = [(f["p"], f["q"]) for f in json.loads(b.stdout)["best"]]
        assert fa == fb

    def test_dirichlet(self):
        res = h4("dirichlet", "--alpha", "surd17", "--n-max", "20", "--json")
        payload = json.loads(res.stdout)
        assert payload["all_verified"] and len(payload["witnesses"]) == 20

    def test_optimality_small(self):
        res = h4("optimality", "--stream", "B", "--i-max", "2", "--json")
        payload = json.loads(res.stdout)
        assert len(payload["points"]) == 2

    def test_stream_alpha_for_best(self):
        res = h4("best", "--alpha", "stream:three-powers", "--count", "3", "--json")
        assert res.returncode == 0
        assert len(json.loads(res.stdout)["best"]) == 3


class TestExitCodes:
    def test_bad_alpha_is_validation_error(self):
        res = h4("expand", "--alpha", "garbage", "--digits", "3")
        assert res.returncode == 2
        assert "error:" in res.stderr

    def test_k_exact_on_stream_is_validation_error(self):
        res = h4("k", "--alpha", "stream:three-powers", "--exact")
        assert res.returncode == 2

    def test_cap_exceeded(self):
        # 1+√7 never cycles, so period detection must hit the cap.
        res = h4("period", "--alpha", '{"P":[1,0],"Q":[1,0],"D":[7,0],"S":[1,0]}',
                 "--cap-iterations", "200")
        assert res.returncode == 3
        assert "cap exceeded" in res.stderr

    def test_rosen_rejects_sqrt2_rational(self):
        res = h4("rosen", "--alpha", '{"P":[0,1],"Q":[0,0],"D":[1,0],"S":[1,0]}',
                 "--digits", "3")
        assert res.returncode == 2


class TestDeterminismAndConfig:
    def test_byte_identical_runs(self):
        a = h4("best", "--alpha", "surd17", "--count", "6", "--json")
        b = h4("best", "--alpha", "surd17", "--count", "6", "--json")
        assert a.stdout == b.stdout

    def test_corpus_golden_seed1(self):
        got = [surd_to_json(s) for s in make_corpus(1, 3, 5)]
        assert got == [
            {"P": [-4, 5], "Q": [-2, 1], "D": [-2, 4], "S": [4, 0]},
            {"P": [1, 1], "Q": [5, -3], "D": [0, 3], "S": [5, 0]},
            {"P": [6, -2], "Q": [-4, 3], "D": [1, 3], "S": [8, 0]},
        ]

    def test_corpus_cli_respects_seed(self):
        a = h4("corpus", "--size", "2", "--seed", "7", "--json")
        b = h4("corpus", "--size", "2", "--seed", "7", "--json")
        c = h4("corpus", "--size", "2", "--seed", "8", "--json")
        assert a.stdout == b.stdout
        assert a.stdout != c.stdout

    def test_corpus_values_positive_irrational(self):
        for s in make_corpus(3, 20, 5):
            assert s.sign() > 0
            assert not s.is_rational() and not s.is_sqrt2_rational()

    def test_config_file_sets_format(self, tmp_path):
        cfg = tmp_path / "h4.cfg"
        cfg.write_text("format = json\ncorpus_rng = python-mersenne\n")
        res = h4("expand", "--alpha", "one", "--digits", "3", "--config", str(cfg))
        assert json.loads(res.stdout)["digits"] == [2, 2, 2]

    def test_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "h4.cfg"
        cfg.write_text("format = json\n")
        res = h4("expand", "--alpha", "one", "--digits", "3", "--format", "text",
                 "--config", str(cfg))
        assert res.stdout == "2 2 2\n"

    def test_config_rejects_other_rng(self, tmp_path):
        cfg = tmp_path / "h4.cfg"
        cfg.write_text("corpus_rng = xorshift\n")
        res = h4("corpus", "--size", "1", "--config", str(cfg))
        assert res.returncode == 2

    def test_json_roundtrip_through_parse_alpha(self):
        for s in make_corpus(5, 5, 4):
            again = parse_alpha(json.dumps(surd_to_json(s)))
            assert again == s
