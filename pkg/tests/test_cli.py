import csv

import pytest
from click.testing import CliRunner

from eidolon.cli import main
from eidolon.graphs import read_graph_file


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def keypair(runner, tmp_path):
    pk = tmp_path / "key.pk"
    sk = tmp_path / "key.sk"
    result = runner.invoke(
        main,
        ["keygen", "--n", "16", "--k", "3", "--seed", "1",
         "--out-pk", str(pk), "--out-sk", str(sk)],
    )
    assert result.exit_code == 0, result.output
    return pk, sk


def parse_kv(output):
    out = {}
    for line in output.splitlines():
        if "=" in line:
            key, _, value = line.partition("=")
            out[key] = value
    return out


class TestKeygen:
    def test_writes_keys_and_summary(self, runner, tmp_path):
        pk = tmp_path / "a.pk"
        sk = tmp_path / "a.sk"
        result = runner.invoke(
            main,
            ["keygen", "--n", "16", "--k", "3", "--seed", "5",
             "--out-pk", str(pk), "--out-sk", str(sk)],
        )
        assert result.exit_code == 0
        kv = parse_kv(result.output)
        assert kv["n"] == "16" and kv["k"] == "3"
        assert kv["sizes"] == "[6, 5, 5]"
        assert pk.read_bytes()[:4] == b"EIDK"
        assert sk.read_bytes()[:4] == b"EIDK"

    def test_seed_determinism(self, runner, tmp_path):
        blobs = []
        for tag in ("x", "y"):
            pk = tmp_path / f"{tag}.pk"
            sk = tmp_path / f"{tag}.sk"
            runner.invoke(
                main,
                ["keygen", "--n", "16", "--k", "3", "--seed", "9",
                 "--out-pk", str(pk), "--out-sk", str(sk)],
            )
            blobs.append((pk.read_bytes(), sk.read_bytes()))
        assert blobs[0] == blobs[1]

    def test_env_seed_fallback(self, runner, tmp_path, monkeypatch):
        monkeypatch.setenv("EIDOLON_SEED", "77")
        paths = []
        for tag in ("x", "y"):
            pk = tmp_path / f"{tag}.pk"
            sk = tmp_path / f"{tag}.sk"
            runner.invoke(
                main,
                ["keygen", "--n", "16", "--k", "3",
                 "--out-pk", str(pk), "--out-sk", str(sk)],
            )
            paths.append(pk.read_bytes())
        assert paths[0] == paths[1]

    def test_usage_error_exit_2(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["keygen", "--n", "4", "--k", "6", "--seed", "1",
             "--out-pk", str(tmp_path / "p"), "--out-sk", str(tmp_path / "s")],
        )
        assert result.exit_code == 2


class TestSignVerify:
    @pytest.mark.parametrize("variant", ["plain", "merkle", "merkle-shared"])
    def test_round_trip(self, runner, tmp_path, keypair, variant):
        pk, sk = keypair
        msg = tmp_path / "msg.txt"
        msg.write_bytes(b"attack at dawn")
        sig = tmp_path / "sig.bin"
        result = runner.invoke(
            main,
            ["sign", "--pk", str(pk), "--sk", str(sk), "--msg-file", str(msg),
             "--t", "8", "--variant", variant, "--seed", "2", "--out", str(sig)],
        )
        assert result.exit_code == 0, result.output
        kv = parse_kv(result.output)
        assert kv["variant"] == variant
        assert int(kv["size_bytes"]) == len(sig.read_bytes())
        result = runner.invoke(
            main,
            ["verify", "--pk", str(pk), "--msg-file", str(msg), "--sig", str(sig)],
        )
        assert result.exit_code == 0
        assert "accept" in result.output

    def test_wrong_message_exit_1(self, runner, tmp_path, keypair):
        pk, sk = keypair
        msg = tmp_path / "msg.txt"
        msg.write_bytes(b"original")
        sig = tmp_path / "sig.bin"
        runner.invoke(
            main,
            ["sign", "--pk", str(pk), "--sk", str(sk), "--msg-file", str(msg),
             "--t", "4", "--seed", "2", "--out", str(sig)],
        )
        msg.write_bytes(b"tampered")
        result = runner.invoke(
            main,
            ["verify", "--pk", str(pk), "--msg-file", str(msg), "--sig", str(sig)],
        )
        assert result.exit_code == 1
        assert "reject" in result.output

    def test_garbage_signature_exit_2(self, runner, tmp_path, keypair):
        pk, _ = keypair
        msg = tmp_path / "msg.txt"
        msg.write_bytes(b"m")
        sig = tmp_path / "sig.bin"
        sig.write_bytes(b"not a signature")
        result = runner.invoke(
            main,
            ["verify", "--pk", str(pk), "--msg-file", str(msg), "--sig", str(sig)],
        )
        assert result.exit_code == 2
        assert "malformed" in result.output

    def test_stdin_message(self, runner, tmp_path, keypair):
        pk, sk = keypair
        sig = tmp_path / "sig.bin"
        result = runner.invoke(
            main,
            ["sign", "--pk", str(pk), "--sk", str(sk), "--msg-file", "-",
             "--t", "4", "--seed", "3", "--out", str(sig)],
            input="from stdin",
        )
        assert result.exit_code == 0, result.output
        result = runner.invoke(
            main,
            ["verify", "--pk", str(pk), "--msg-file", "-", "--sig", str(sig)],
            input="from stdin",
        )
        assert result.exit_code == 0

    def test_shared_variant_reports_savings(self, runner, tmp_path, keypair):
        pk, sk = keypair
        msg = tmp_path / "msg.txt"
        msg.write_bytes(b"m")
        sig = tmp_path / "sig.bin"
        result = runner.invoke(
            main,
            ["sign", "--pk", str(pk), "--sk", str(sk), "--msg-file", str(msg),
             "--t", "16", "--variant", "merkle-shared", "--seed", "4",
             "--out", str(sig)],
        )
        kv = parse_kv(result.output)
        assert float(kv["shared_per_round_with_sibling_levels"]) >= \
            float(kv["shared_per_round_suffix"]) >= 0


class TestSizes:
    def test_all_variants_listed(self, runner):
        result = runner.invoke(
            main, ["sizes", "--n", "200", "--t", "256", "--s-bar", "0.9375"]
        )
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert len(lines) == 3
        assert "13176832" in lines[0]
        assert "1183744" in lines[1]
        # the shared row at s_bar=0.9375 is exactly 140288 bytes
        assert "140288" in lines[2]

    def test_shared_skipped_without_s_bar(self, runner):
        result = runner.invoke(main, ["sizes", "--n", "16", "--t", "8"])
        assert result.exit_code == 0
        assert len(result.output.splitlines()) == 2


class TestSoundness:
    def test_empirical_close_to_analytic(self, runner):
        result = runner.invoke(
            main,
            ["soundness", "--n", "16", "--k", "3", "--rounds", "4",
             "--trials", "20000", "--seed", "6"],
        )
        assert result.exit_code == 0, result.output
        kv = parse_kv(result.output)
        emp = float(kv["empirical_escape"])
        ana = float(kv["analytic_escape"])
        assert abs(emp - ana) < 0.05


class TestAttack:
    def test_attack_recovers_from_pk(self, runner, tmp_path, keypair):
        pk, _ = keypair
        csv_path = tmp_path / "out.csv"
        result = runner.invoke(
            main,
            ["attack", "--pk", str(pk), "--solvers", "dsatur,exact",
             "--time-limit", "30", "--csv", str(csv_path)],
        )
        assert result.exit_code == 0, result.output
        with open(csv_path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 2
        assert any(r["recovered"] == "1" for r in rows)

    def test_mutually_exclusive_inputs(self, runner, tmp_path, keypair):
        pk, _ = keypair
        result = runner.invoke(main, ["attack", "--pk", str(pk), "--graph", str(pk)])
        assert result.exit_code == 2

    def test_attack_from_exported_graph(self, runner, tmp_path, keypair):
        pk, _ = keypair
        graph_path = tmp_path / "g.txt"
        result = runner.invoke(
            main, ["export-graph", "--pk", str(pk), "--out", str(graph_path)]
        )
        assert result.exit_code == 0
        g, k = read_graph_file(graph_path)
        assert g.n == 16 and k == 3
        result = runner.invoke(
            main,
            ["attack", "--graph", str(graph_path), "--solvers", "exact",
             "--time-limit", "30"],
        )
        assert result.exit_code == 0, result.output


class TestExperiment:
    def test_sweep_writes_csv(self, runner, tmp_path):
        csv_path = tmp_path / "exp.csv"
        result = runner.invoke(
            main,
            ["experiment", "--n-min", "8", "--n-max", "10", "--n-step", "2",
             "--trials", "1", "--solvers", "dsatur", "--seed", "3",
             "--csv", str(csv_path)],
        )
        assert result.exit_code == 0, result.output
        with open(csv_path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        # 2 sizes x 1 trial x 2 kinds x 1 solver
        assert len(rows) == 4
        assert {r["instance_kind"] for r in rows} == {"planted", "er"}

    def test_sweep_deterministic_with_seed(self, runner, tmp_path):
        outs = []
        for tag in ("a", "b"):
            csv_path = tmp_path / f"{tag}.csv"
            runner.invoke(
                main,
                ["experiment", "--n-min", "8", "--n-max", "8", "--trials", "2",
                 "--solvers", "dsatur", "--seed", "11", "--csv", str(csv_path)],
            )
            rows = csv_path.read_text().splitlines()
            # wall_ms varies run to run; drop it before comparing
            outs.append([",".join(r.split(",")[:9]) for r in rows])
        assert outs[0] == outs[1]
