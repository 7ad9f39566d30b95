import json
from pathlib import Path

import pytest

from cubeforge import cli
from cubeforge.formats import loads_json, loads_lcube

import oracles

FIG1 = Path(__file__).parent / "data" / "fig1.lcube"


@pytest.fixture(autouse=True)
def private_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("CUBEFORGE_CACHE", str(tmp_path / "cache"))


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_construct_writes_verifiable_file(tmp_path):
    out = tmp_path / "c.lcube"
    assert run("construct", "--partition", "5,5,3", "-o", out) == 0
    data = loads_lcube(out.read_text())
    assert data.partition == (5, 5, 3)
    assert oracles.is_normal_realization(data.cube.tolist(), data.partition)
    assert run("verify", out) == 0


def test_cached_construct_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.lcube", tmp_path / "b.lcube"
    assert run("construct", "--partition", "7,7,4", "-o", a) == 0
    assert run("construct", "--partition", "4,7,7", "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_construct_json(tmp_path):
    out = tmp_path / "c.json"
    assert run("construct", "--partition", "2,2,1", "-o", out) == 0
    assert loads_json(out.read_text()).partition == (2, 2, 1)
    assert run("verify", out) == 0


def test_construct_to_stdout(capsys):
    assert run("construct", "--partition", "2,2,1") == 0
    assert capsys.readouterr().out.startswith("lcube 1\norder 5\n")


@pytest.mark.parametrize("partition,code", [
    ("4,1,1,1", 2),   # provably nonexistent
    ("3,1,1", 2),
    ("9,9,5", 4),     # existence unknown
    ("3,2,1", 4),     # unknown and search budget runs out
    ("5,5,3,3", 3),   # exists but only by citation
    ("24,24,13", 3),  # needs an OA(3,5,24)
    ("x", 64),
    ("3,0", 64),
])
def test_construct_exit_codes(partition, code):
    assert run("construct", "--partition", partition) == code


def test_verify_fig1_with_placements(tmp_path, capsys):
    spec = [
        {"rows": [1, 2], "cols": [1, 2], "files": [1, 2], "symbols": [1, 2]},
        {"rows": [3, 5], "cols": [3, 5], "files": [3, 4], "symbols": [3, 5]},
        {"rows": [4], "cols": [4], "files": [5], "symbols": [4]},
    ]
    pl = tmp_path / "pl.json"
    pl.write_text(json.dumps(spec))
    assert run("verify", FIG1, "--placements", pl) == 0
    assert "valid cube of order 5" in capsys.readouterr().out
    spec[2]["symbols"] = [5]
    pl.write_text(json.dumps(spec))
    assert run("verify", FIG1, "--placements", pl) == 1


def test_verify_catches_mutation(tmp_path, capsys):
    data = loads_lcube(FIG1.read_text())
    lines = FIG1.read_text().splitlines()
    # the first layer line after the header block
    first = next(i for i, line in enumerate(lines) if line and line[0].isdigit())
    vals = lines[first].split()
    vals[0] = str(data.cube[0, 1, 0])
    lines[first] = " ".join(vals)
    bad = tmp_path / "bad.lcube"
    bad.write_text("\n".join(lines) + "\n")
    assert run("verify", bad) == 1
    assert "lines" in capsys.readouterr().err


def test_verify_wrong_partition():
    assert run("verify", FIG1, "--partition", "2,1,2") == 1
    assert run("verify", FIG1, "--partition", "3,3") == 1


def test_verify_partial(tmp_path):
    text = FIG1.read_text()
    lines = text.splitlines()
    first = next(i for i, line in enumerate(lines) if line and line[0].isdigit())
    vals = lines[first].split()
    vals[-1] = "."
    lines[first] = " ".join(vals)
    holey = tmp_path / "holey.lcube"
    holey.write_text("\n".join(lines) + "\n")
    assert run("verify", holey) == 1
    assert run("verify", holey, "--partial") == 0


def test_verify_format_errors(tmp_path):
    bad = tmp_path / "bad.lcube"
    bad.write_text("lcube 2\norder 1\n\n1\n")
    assert run("verify", bad) == 65
    binary = tmp_path / "bin.lcube"
    binary.write_bytes(b"\xff\xfe\x00")
    assert run("verify", binary) == 65
    pl = tmp_path / "pl.json"
    pl.write_text("{oops")
    assert run("verify", FIG1, "--placements", pl) == 65


def test_verify_missing_file(tmp_path):
    assert run("verify", tmp_path / "nope.lcube") == 64


def test_oa_roundtrip(tmp_path):
    out = tmp_path / "oa7.txt"
    assert run("oa", 7, "-o", out) == 0
    assert run("verify", out) == 0
    text = out.read_text().splitlines()
    text[1], text[2] = text[1], text[1]
    out.write_text("\n".join(text) + "\n")
    assert run("verify", out) == 1


@pytest.mark.parametrize("n,code", [(6, 3), (12, 3), (0, 64)])
def test_oa_exit_codes(n, code):
    assert run("oa", n) == code


@pytest.mark.parametrize("partition,code,text", [
    ("7,7,4", 0, "Exists (Thm odd-a)"),
    ("4,1,1,1", 2, "NotExists"),
    ("9,9,5", 4, "Unknown"),
])
def test_exists(partition, code, text, capsys):
    assert run("exists", partition) == code
    assert text in capsys.readouterr().out


def test_search(tmp_path):
    out = tmp_path / "s.lcube"
    assert run("search", "2,2,1", "-o", out) == 0
    assert run("verify", out) == 0
    assert run("search", "3,1,1") == 2
    assert run("search", "2,2,2", "--budget", "5") == 3


def test_catalog_list(capsys):
    assert run("catalog", "list") == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 15
    assert any(line.startswith("lc-6-6-5") for line in lines)


def test_catalog_show(tmp_path, capsys):
    out = tmp_path / "six.lcube"
    assert run("catalog", "show", "lc-6-6-5", "-o", out) == 0
    assert run("verify", out) == 0
    assert run("catalog", "show", "pair-2-2-1/2-2-2") == 0
    assert "shared transversal" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ("catalog", "show"),
    ("catalog", "show", "lc-0-0-0"),
    ("frobnicate",),
    (),
    ("oa", "seven"),
])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as info:
        code = run(*argv)
        raise SystemExit(code)
    assert info.value.code == 64
