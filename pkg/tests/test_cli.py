"""End-to-end checks of the command line interface.

Each test drives ``hmix.cli.run`` with a real argument vector and reads
back the files or captured stdout, so the exit-code contract, the CSV
and JSON layouts, and the determinism of the data sections are all
exercised exactly as a shell user would see them.
"""

import json
import math

import numpy as np
import pytest

from hmix import cli, dirichlet, harper, mixing
from hmix.errors import NumericalCheckError


def data_lines(path):
    """CSV payload with the metadata comment block stripped."""
    with open(path, encoding="utf-8") as handle:
        return [ln.rstrip("\n") for ln in handle if not ln.startswith("#")]


def parse_csv(path):
    lines = data_lines(path)
    header = lines[0].split(",")
    rows = [ln.split(",") for ln in lines[1:]]
    return header, rows


class TestSpectrum:
    def test_sweep_and_sibling_base_spectrum(self, tmp_path):
        out = tmp_path / "sweep.csv"
        assert cli.run(["spectrum", "--n", "9", "--out", str(out)]) == 0
        header, rows = parse_csv(out)
        assert header == ["xi", "beta_top", "beta_bottom", "beta_star"]
        assert [int(r[0]) for r in rows] == list(range(1, 9))
        stars = {int(r[0]): float(r[3]) for r in rows}
        for xi in range(1, 9):
            assert stars[xi] == stars[9 - xi]

        m1_header, m1_rows = parse_csv(tmp_path / "sweep-m1.csv")
        assert m1_header == ["index", "eigenvalue"]
        assert len(m1_rows) == 9
        eigs = np.array([float(r[1]) for r in m1_rows])
        assert np.all(np.diff(eigs) <= 1e-15)
        expect = harper.spectrum(harper.build_harper(9, 1))
        np.testing.assert_allclose(eigs, expect, atol=1e-14)

    def test_xi_range_and_alpha_flags(self, tmp_path):
        out = tmp_path / "part.csv"
        code = cli.run(
            [
                "spectrum",
                "--n",
                "12",
                "--xi-range",
                "2:5",
                "--alpha",
                "0.5",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert [int(r[0]) for r in rows] == [2, 3, 4, 5]
        spec = harper.spectrum(harper.build_harper(12, 3, alpha=0.5))
        assert float(rows[1][1]) == pytest.approx(spec[0], abs=1e-15)

    def test_stdout_holds_both_sections(self, capsys):
        assert cli.run(["spectrum", "--n", "5"]) == 0
        captured = capsys.readouterr().out
        assert "xi,beta_top,beta_bottom,beta_star" in captured
        assert "# section: m1" in captured
        assert "index,eigenvalue" in captured

    def test_json_format(self, tmp_path):
        out = tmp_path / "sweep.json"
        code = cli.run(
            ["spectrum", "--n", "7", "--format", "json", "--out", str(out)]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        assert payload["metadata"]["tool"].startswith("hmix ")
        assert payload["data"]["sweep"]["header"][0] == "xi"
        assert len(payload["data"]["sweep"]["rows"]) == 6
        assert len(payload["data"]["m1"]["rows"]) == 7


class TestMix:
    def test_curve_matches_library(self, tmp_path):
        out = tmp_path / "mix.csv"
        assert cli.run(["mix", "--n", "5", "--kmax", "10", "--out", str(out)]) == 0
        header, rows = parse_csv(out)
        assert header == ["n", "k", "eta", "tv_exact", "ub_fourier", "lb_projection"]
        assert len(rows) == 11
        points = mixing.exact_tv_curve(5, 10)
        for row, pt in zip(rows, points):
            assert int(row[0]) == 5
            assert int(row[1]) == pt.k
            assert float(row[3]) == pt.tv_exact
            assert float(row[4]) == pt.ub_fourier
            assert float(row[5]) == pt.lb_projection

    def test_eta_grid_rows(self, tmp_path):
        out = tmp_path / "eta.csv"
        code = cli.run(
            ["mix", "--n", "9", "--eta-grid", "0.25,0.5", "--out", str(out)]
        )
        assert code == 0
        _, rows = parse_csv(out)
        assert [int(r[1]) for r in rows] == [
            math.ceil(0.25 * 81),
            math.ceil(0.5 * 81),
        ]
        assert [float(r[2]) for r in rows] == [0.25, 0.5]
        tv = mixing.hybrid_tv(9, [21])[0]
        assert float(rows[0][3]) == pytest.approx(tv, rel=1e-12)

    def test_requires_exactly_one_mode(self, tmp_path):
        assert cli.run(["mix", "--n", "5"]) == 1
        assert (
            cli.run(["mix", "--n", "5", "--kmax", "4", "--eta-grid", "0.5"]) == 1
        )

    def test_even_modulus_is_a_validation_error(self):
        assert cli.run(["mix", "--n", "6", "--kmax", "4"]) == 1


class TestBound:
    def test_sweep_columns_and_inequalities(self, tmp_path):
        out = tmp_path / "bound.csv"
        code = cli.run(
            ["bound", "--n", "9", "--xi-range", "1:4", "--out", str(out)]
        )
        assert code == 0
        header, rows = parse_csv(out)
        assert header == [
            "n",
            "xi",
            "bound_upper",
            "beta1_exact",
            "gap_ratio",
            "bound_lower",
            "betamin_exact",
        ]
        assert len(rows) == 4
        for row in rows:
            assert float(row[2]) >= float(row[3])
            assert float(row[5]) <= float(row[6])
            assert float(row[4]) > 0.0

    def test_default_range_covers_low_half(self, tmp_path):
        out = tmp_path / "b.csv"
        assert cli.run(["bound", "--n", "11", "--out", str(out)]) == 0
        _, rows = parse_csv(out)
        assert [int(r[1]) for r in rows] == list(range(1, 6))

    def test_profile_file_single_row(self, tmp_path):
        diag = harper.build_harper(9, 1).diagonal()
        profile = tmp_path / "profile.txt"
        np.savetxt(profile, diag)
        out = tmp_path / "prof.csv"
        code = cli.run(["bound", "--profile", str(profile), "--out", str(out)])
        assert code == 0
        header, rows = parse_csv(out)
        assert header == ["n", "bound_upper", "beta1_exact", "gap_ratio"]
        assert len(rows) == 1
        assert int(rows[0][0]) == 9
        top = float(harper.spectrum(harper.build_harper(9, 1))[0])
        assert float(rows[0][2]) == pytest.approx(top, abs=1e-14)
        assert float(rows[0][1]) >= float(rows[0][2])

    def test_profile_matches_library_route(self, tmp_path):
        rng = np.random.default_rng(5)
        diag = rng.uniform(-0.4, 0.4, size=12)
        diag[3] = -0.2
        profile = tmp_path / "p.txt"
        np.savetxt(profile, diag)
        out = tmp_path / "p.csv"
        assert cli.run(["bound", "--profile", str(profile), "--out", str(out)]) == 0
        _, rows = parse_csv(out)
        expect = dirichlet.upper_bound_from_profile(diag)
        assert float(rows[0][1]) == pytest.approx(expect.value, rel=1e-12)

    def test_missing_modulus_is_usage_error(self):
        assert cli.run(["bound"]) == 1

    def test_missing_profile_file_is_validation_error(self, tmp_path):
        assert cli.run(["bound", "--profile", str(tmp_path / "nope.txt")]) == 1


class TestCenter:
    def test_two_step_law_on_stdout(self, capsys):
        assert cli.run(["center", "--p", "5", "--k", "2"]) == 0
        lines = [
            ln
            for ln in capsys.readouterr().out.splitlines()
            if ln and not ln.startswith("#")
        ]
        assert lines[0] == "z,probability"
        probs = {int(r.split(",")[0]): float(r.split(",")[1]) for r in lines[1:]}
        expect = {0: 0.75, 1: 0.125, 2: 0.0, 3: 0.0, 4: 0.125}
        assert probs.keys() == expect.keys()
        for z, want in expect.items():
            assert probs[z] == pytest.approx(want, abs=1e-12)

    def test_rows_sum_to_one(self, tmp_path):
        out = tmp_path / "c.csv"
        assert cli.run(["center", "--p", "7", "--k", "30", "--out", str(out)]) == 0
        _, rows = parse_csv(out)
        assert len(rows) == 7
        assert sum(float(r[1]) for r in rows) == pytest.approx(1.0, abs=1e-12)

    def test_composite_modulus_rejected(self):
        assert cli.run(["center", "--p", "6", "--k", "2"]) == 1


class TestRepcheck:
    def test_irrep_table_and_gram_section(self, tmp_path):
        out = tmp_path / "reps.csv"
        assert cli.run(["repcheck", "--n", "6", "--out", str(out)]) == 0
        header, rows = parse_csv(out)
        assert header == ["m", "a", "b", "c", "dim"]
        assert sum(int(r[4]) ** 2 for r in rows) == 6**3
        gram_header, gram_rows = parse_csv(tmp_path / "reps-gram.csv")
        assert gram_header == ["labels", "gram_residual"]
        assert float(gram_rows[0][1]) < 1e-9

    def test_large_modulus_skips_gram(self, tmp_path):
        out = tmp_path / "big.csv"
        assert cli.run(["repcheck", "--n", "60", "--out", str(out)]) == 0
        _, rows = parse_csv(out)
        assert sum(int(r[4]) ** 2 for r in rows) == 60**3
        assert not (tmp_path / "big-gram.csv").exists()

    def test_kmax_adds_bound_curve(self, tmp_path):
        out = tmp_path / "reps.csv"
        code = cli.run(["repcheck", "--n", "5", "--kmax", "6", "--out", str(out)])
        assert code == 0
        header, rows = parse_csv(tmp_path / "reps-bounds.csv")
        assert header == ["n", "k", "term_I", "term_II", "bound_tv"]
        assert len(rows) == 7
        for row in rows:
            want = 0.5 * math.sqrt(float(row[2]) + float(row[3]))
            assert float(row[4]) == pytest.approx(want, rel=1e-15)

    def test_bound_curve_needs_odd_modulus(self, tmp_path):
        out = tmp_path / "reps.csv"
        assert cli.run(["repcheck", "--n", "6", "--kmax", "4", "--out", str(out)]) == 1


class TestSimulate:
    def test_return_json_schema(self, tmp_path):
        out = tmp_path / "ret.json"
        code = cli.run(
            [
                "simulate",
                "return",
                "--k",
                "10",
                "--trials",
                "20000",
                "--seed",
                "3",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        payload = json.loads(out.read_text())
        data = payload["data"]
        assert set(data) == {
            "k",
            "trials",
            "seed",
            "estimate",
            "stderr",
            "k2_scaled",
            "c_conjectured",
        }
        assert data["k"] == 10
        assert data["trials"] == 20000
        assert data["seed"] == 3
        assert 0.0 < data["estimate"] < 1.0
        assert data["stderr"] > 0.0
        assert data["k2_scaled"] == pytest.approx(100 * data["estimate"])
        assert data["c_conjectured"] == pytest.approx(5.3274869680272054)
        assert payload["metadata"]["seed"] == 3

    def test_levy_json_nulls(self, tmp_path):
        out = tmp_path / "levy.json"
        code = cli.run(
            [
                "simulate",
                "levy",
                "--k",
                "1000",
                "--trials",
                "3000",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        data = json.loads(out.read_text())["data"]
        assert data["stderr"] is None
        assert data["k2_scaled"] is None
        assert 0.0 < data["estimate"] < 0.1
        assert data["seed"] == 0

    def test_jobs_flag_does_not_change_data(self, tmp_path):
        outs = []
        for jobs, name in ((1, "a.json"), (4, "b.json")):
            out = tmp_path / name
            code = cli.run(
                [
                    "simulate",
                    "return",
                    "--k",
                    "8",
                    "--trials",
                    "50000",
                    "--seed",
                    "11",
                    "--jobs",
                    str(jobs),
                    "--out",
                    str(out),
                ]
            )
            assert code == 0
            outs.append(json.loads(out.read_text())["data"])
        assert outs[0] == outs[1]

    def test_odd_step_count_rejected(self):
        assert cli.run(["simulate", "return", "--k", "7", "--trials", "100"]) == 1


class TestContract:
    def test_data_sections_byte_identical_across_runs(self, tmp_path):
        paths = [tmp_path / "one.csv", tmp_path / "two.csv"]
        for path in paths:
            assert (
                cli.run(["spectrum", "--n", "15", "--out", str(path)]) == 0
            )
        assert data_lines(paths[0]) == data_lines(paths[1])
        sib = [tmp_path / "one-m1.csv", tmp_path / "two-m1.csv"]
        assert data_lines(sib[0]) == data_lines(sib[1])

    def test_simulate_byte_identical_documents(self, tmp_path):
        docs = []
        for name in ("x.json", "y.json"):
            out = tmp_path / name
            cli.run(
                [
                    "simulate",
                    "return",
                    "--k",
                    "6",
                    "--trials",
                    "4096",
                    "--seed",
                    "9",
                    "--out",
                    str(out),
                ]
            )
            docs.append(json.dumps(json.loads(out.read_text())["data"], sort_keys=True))
        assert docs[0] == docs[1]

    def test_metadata_block_present(self, tmp_path):
        out = tmp_path / "m.csv"
        cli.run(["center", "--p", "5", "--k", "3", "--out", str(out)])
        head = out.read_text().splitlines()[:4]
        assert head[0].startswith("# tool: hmix ")
        assert head[1].startswith("# config: ")
        assert "p=5" in head[1] and "k=3" in head[1]
        assert head[2].startswith("# seed: ")
        assert head[3].startswith("# wall_time_s: ")

    def test_unknown_subcommand_exits_one(self, capsys):
        assert cli.run(["no-such-command"]) == 1
        assert "usage error" in capsys.readouterr().err

    def test_missing_required_flag_exits_one(self):
        assert cli.run(["spectrum"]) == 1

    def test_bad_range_exits_one(self):
        assert cli.run(["spectrum", "--n", "9", "--xi-range", "5:1"]) == 1
        assert cli.run(["spectrum", "--n", "9", "--xi-range", "abc"]) == 1

    def test_bad_eta_grid_exits_one(self):
        assert cli.run(["mix", "--n", "5", "--eta-grid", "x,y"]) == 1

    def test_numerical_failure_exits_two(self, monkeypatch, capsys):
        def boom(p, k):
            raise NumericalCheckError("synthetic failure")

        monkeypatch.setattr(mixing, "center_distribution", boom)
        assert cli.run(["center", "--p", "5", "--k", "2"]) == 2
        assert "numerical failure" in capsys.readouterr().err

    def test_help_exits_zero(self, capsys):
        assert cli.run(["--help"]) == 0
        assert "spectrum" in capsys.readouterr().out
