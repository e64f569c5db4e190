import json
import subprocess
import sys

import pytest

from zeckstats.cli import main, parse_config


def run(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def test_decomp_text(capsys):
    status, out, _ = run(capsys, "decomp", "100", "--spec", "1,1")
    assert status == 0
    assert out == "100 = H_10 + H_5 + H_3 (k=3)\n"


def test_decomp_formats(capsys):
    _, out, _ = run(capsys, "decomp", "305", "--spec", "10", "--format", "jsonl")
    assert json.loads(out) == {"value": "305", "top_index": 3, "digits": [3, 0, 5], "summands": 8}
    _, out, _ = run(capsys, "decomp", "305", "--spec", "10", "--format", "tsv")
    assert out == "305\t3\t3,0,5\n"


def test_root(capsys):
    status, out, _ = run(capsys, "root", "--spec", "1,1")
    assert status == 0
    assert out.splitlines()[0] == "lambda = 1.618033988749895"


def test_root_jsonl(capsys):
    _, out, _ = run(capsys, "root", "--spec", "1,1,1", "--format", "jsonl")
    rec = json.loads(out)
    assert rec["spec"] == "1,1,1" and rec["lambda"] == "1.83928675521416"


def test_fdstats(capsys):
    status, out, _ = run(capsys, "fdstats", "20")
    lines = out.splitlines()
    assert status == 0
    assert lines[0] == "n,k_plus,k_minus,count"
    assert lines[-1].startswith("correlation=") and lines[-1].endswith("target=-0.551058")
    total = sum(int(line.split(",")[3]) for line in lines[1:-1])
    assert total == 4895


def test_fdstats_to_file(tmp_path, capsys):
    path = tmp_path / "fd.csv"
    status, out, _ = run(capsys, "fdstats", "12", "--interval", "fibonacci", "-o", str(path))
    assert status == 0
    assert out.startswith("correlation=")
    assert path.read_text().startswith("n,k_plus,k_minus,count\n")


def test_fardiff(capsys):
    _, out, _ = run(capsys, "fardiff", "4", "-4", "0")
    assert out.splitlines() == ["4 = +F_4 - F_1", "-4 = -F_4 + F_1", "0 = 0"]
    _, out, _ = run(capsys, "fardiff", "100", "--format", "jsonl")
    assert json.loads(out)["terms"] == [[10, 1], [6, 1], [2, -1]]


def test_legal(capsys):
    _, out, _ = run(capsys, "legal", "1,0,1,0,1")
    assert out == "1,0,1,0,1 legal (value=12)\n"
    _, out, _ = run(capsys, "legal", "1,1")
    assert "illegal" in out
    _, out, _ = run(capsys, "legal", "3,0,5", "--spec", "10", "--format", "jsonl")
    assert json.loads(out)["legal"] is True


def test_seq(capsys):
    _, out, _ = run(capsys, "seq", "-n", "6", "--spec", "1,1,1")
    assert out == "index,term\n1,1\n2,2\n3,4\n4,7\n5,13\n6,24\n"


def test_count_dp_and_exhaustive_agree(capsys):
    _, dp, _ = run(capsys, "count", "12", "--spec", "1,1,1")
    _, ex, _ = run(capsys, "count", "12", "--spec", "1,1,1", "--exhaustive")
    assert dp == ex
    assert dp.splitlines()[0] == "n,k,count"


def test_stats(capsys):
    status, out, _ = run(capsys, "stats", "50", "60")
    lines = out.splitlines()
    assert status == 0
    assert lines[0] == "n,mean,variance,ks_distance"
    assert len([l for l in lines if not l.startswith("#")]) == 12
    fits = [json.loads(l[2:]) for l in lines if l.startswith("# ")]
    assert [f["fit"] for f in fits] == ["mean", "variance"]
    assert set(fits[0]) == {"fit", "spec", "n_min", "n_max", "slope", "intercept", "residual"}
    assert abs(float(fits[0]["slope"]) - 0.2763932) < 1e-4


def test_stats_jsonl_exact_values(capsys):
    _, out, _ = run(capsys, "stats", "1", "6", "--format", "jsonl")
    rows = [json.loads(l) for l in out.splitlines()]
    n5 = next(r for r in rows if r.get("n") == 5)
    assert n5["mean"] == "2" and n5["variance"] == "2/5"
    assert next(r for r in rows if r.get("n") == 1)["ks"] is None


@pytest.mark.parametrize(
    "argv, code",
    [
        (["decomp", "5", "--spec", "0,1"], 2),
        (["decomp", "-3"], 2),
        (["decomp", "abc"], 2),
        (["stats", "5", "5"], 2),
        (["root", "--tol", "1e-20"], 2),
        (["count", "9", "--spec", "10", "--exhaustive"], 3),
        (["fdstats", "45"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    status, out, err = run(capsys, *argv)
    assert status == code
    assert err.startswith("zeckstats: ") and err.count("\n") == 1
    assert out == ""


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["count"])
    assert info.value.code == 2


def test_run_config():
    cfg = parse_config(["fdstats", "20", "--interval", "fibonacci", "--threads", "2", "--seed", "7"])
    assert (cfg.command, cfg.n, cfg.interval, cfg.threads, cfg.seed) == ("fdstats", 20, "fibonacci", 2, 7)


def test_outputs_are_byte_stable(tmp_path):
    for argv in (["count", "60"], ["stats", "20", "40"], ["fdstats", "16"], ["seq", "-n", "50"]):
        blobs = []
        for i in range(2):
            path = tmp_path / f"out{i}"
            assert main(argv + ["-o", str(path)]) == 0
            blobs.append(path.read_bytes())
        assert blobs[0] == blobs[1]


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "zeckstats", "decomp", "12"], capture_output=True, text=True
    )
    assert res.returncode == 0
    assert res.stdout == "12 = H_5 + H_3 + H_1 (k=3)\n"
