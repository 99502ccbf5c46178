import csv

import pytest

from aesbench import cli
from aesbench.modes import Mode, unpad

KEY = "000102030405060708090a0b0c0d0e0f"
IV = "0f0e0d0c0b0a09080706050403020100"


@pytest.fixture
def sample(tmp_path, rng):
    p = tmp_path / "data.bin"
    p.write_bytes(rng.bytes(1202))
    return p


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_selftest_passes(capsys):
    assert run("selftest", "--trials", 200) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 10


@pytest.mark.parametrize("mode", [m.value for m in Mode])
def test_file_round_trip(mode, sample, tmp_path):
    enc = tmp_path / "data.enc"
    dec = tmp_path / "data.out"
    iv = [] if mode == "ecb" else ["--iv", IV]
    assert run("encrypt-file", sample, "--mode", mode, "--key", KEY, *iv, "--out", enc) == 0
    assert enc.stat().st_size == 1216
    assert run("decrypt-file", enc, "--mode", mode, "--key", KEY, *iv, "--out", dec) == 0
    assert dec.read_bytes() == sample.read_bytes()


def test_default_output_beside_input(sample):
    assert run("encrypt-file", sample, "--key", KEY) == 0
    enc = sample.with_name("data.bin.enc")
    assert enc.exists() and enc.stat().st_size == 1216
    assert run("decrypt-file", enc, "--key", KEY) == 0
    assert sample.with_name("data.bin.enc.dec").read_bytes() == sample.read_bytes()


def test_ecb_output_is_padded_input(sample, tmp_path):
    from aesbench import CipherContext
    from aesbench.modes import ecb_decrypt
    enc = tmp_path / "e"
    run("encrypt-file", sample, "--key", KEY, "--out", enc)
    padded = ecb_decrypt(enc.read_bytes(), CipherContext.from_key(bytes.fromhex(KEY)))
    assert padded[-14:] == bytes([14]) * 14
    assert unpad(padded) == sample.read_bytes()


def test_env_key_fallback(sample, tmp_path, monkeypatch):
    monkeypatch.setenv("AES_BENCH_KEY", KEY)
    monkeypatch.setenv("AES_BENCH_IV", IV)
    enc, dec = tmp_path / "e", tmp_path / "d"
    assert run("encrypt-file", sample, "--mode", "cbc", "--out", enc) == 0
    assert run("decrypt-file", enc, "--mode", "cbc", "--key", KEY, "--iv", IV, "--out", dec) == 0
    assert dec.read_bytes() == sample.read_bytes()


@pytest.mark.parametrize("argv", [
    ["--key", "abc"], ["--key", "zz" * 16], [], ["--mode", "cbc", "--key", KEY],
    ["--mode", "ctr", "--key", KEY, "--iv", "00"],
])
def test_bad_key_material(argv, sample, monkeypatch):
    monkeypatch.delenv("AES_BENCH_KEY", raising=False)
    monkeypatch.delenv("AES_BENCH_IV", raising=False)
    assert run("encrypt-file", sample, *argv) == cli.EXIT_KEY


def test_corrupt_ciphertext(sample, tmp_path):
    enc = tmp_path / "e"
    run("encrypt-file", sample, "--key", KEY, "--out", enc)
    assert run("decrypt-file", enc, "--key", "ff" * 16, "--out", tmp_path / "d") == cli.EXIT_CORRUPT
    ragged = tmp_path / "r"
    ragged.write_bytes(b"x" * 17)
    assert run("decrypt-file", ragged, "--key", KEY) == cli.EXIT_CORRUPT


def test_missing_input(tmp_path):
    assert run("encrypt-file", tmp_path / "nope", "--key", KEY) == cli.EXIT_IO


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        run("bench", "--mode", "xts")
    assert exc.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        run("bench", "--sizes", "5,3")
    assert exc.value.code == cli.EXIT_USAGE
    with pytest.raises(SystemExit) as exc:
        run()
    assert exc.value.code == cli.EXIT_USAGE


def test_distinct_exit_codes():
    codes = [cli.EXIT_USAGE, cli.EXIT_KEY, cli.EXIT_IO, cli.EXIT_CORRUPT, cli.EXIT_SELFTEST, cli.EXIT_GATE]
    assert len(set(codes)) == len(codes) and 0 not in codes


def test_bench_csv(tmp_path):
    out = tmp_path / "b.csv"
    assert run("bench", "--sizes", "1202,4652", "--reps", 1, "--warmup", 0, "--workers", 2, "--out", out) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 8


def test_bench_markdown_one_op(tmp_path):
    out = tmp_path / "b.md"
    assert run("bench", "--sizes", "1202", "--reps", 1, "--op", "decrypt", "--format", "markdown",
               "--mode", "ctr", "--out", out) == 0
    text = out.read_text()
    assert "decryption" in text and "encryption" not in text


def test_selftest_failure_exit_code(monkeypatch):
    monkeypatch.setattr(cli, "KAT_CIPHER", bytes(16))
    assert run("selftest", "--trials", 10) == cli.EXIT_SELFTEST
