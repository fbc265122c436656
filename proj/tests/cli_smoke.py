"""End-to-end checks of the command line tool. Usage: cli_smoke.py <binary>."""

import json
import os
import subprocess
import sys
import tempfile

BIN = sys.argv[1]

UNSAT_2CNF = "p cnf 2 4\n1 2 0\n-1 2 0\n1 -2 0\n-1 -2 0\n"


def run(*args, stdin=None, expect=0):
    proc = subprocess.run([BIN, *args], input=stdin, capture_output=True, text=True)
    assert proc.returncode == expect, (
        f"{args}: exit {proc.returncode} (wanted {expect})\n{proc.stderr}"
    )
    return proc.stdout


def main():
    # gen is deterministic and self-describing
    a = run("gen", "--n", "100", "--k", "3", "--p", "0.25", "--m", "420", "--seed", "7")
    b = run("gen", "--n", "100", "--k", "3", "--p", "0.25", "--m", "420", "--seed", "7")
    assert a == b
    assert a.startswith("c polarsat n=100 k=3 m=420 p=0.25 seed=7\n")
    assert "p cnf 100 420" in a

    # solve: UNSAT is a result, exit 0; with solver exit codes, 20
    out = run("solve", stdin=UNSAT_2CNF)
    assert out.strip() == "UNSAT"
    run("solve", "--solver-exit-codes", stdin=UNSAT_2CNF, expect=20)
    sat_out = run("solve", stdin="p cnf 2 1\n1 -2 0\n")
    assert sat_out.startswith("SAT")
    parsed = json.loads(run("solve", "--json", stdin="p cnf 2 1\n1 -2 0\n"))
    assert parsed["status"] == "SAT"

    # spine on a formula with a unique model
    spine = json.loads(run("spine", "--json", stdin="p cnf 2 3\n1 2 0\n1 -2 0\n-1 2 0\n"))
    assert spine["positive"] == [1, 2]
    assert spine["size"] == 2

    # twosat checks
    bike = json.loads(run("twosat", "--check", "bicycle", "--json", stdin=UNSAT_2CNF))
    assert bike["found"] is True
    pretzel = json.loads(run("twosat", "--check", "pretzel", "--json", stdin=UNSAT_2CNF))
    assert pretzel["found"] is True
    uni = json.loads(run("twosat", "--check", "unicycles", "--max-t", "2", "--json",
                         stdin=UNSAT_2CNF))
    assert len(uni["counts"]) == 2

    # bounds table carries the closed-form threshold density
    table = run("bounds", "--k", "3")
    assert "5.190893" in table

    # usage errors exit 2, domain errors exit 1
    run("nonsense", expect=2)
    run("gen", "--n", "5", expect=2)
    run("solve", stdin="p cnf 2 1\n1 1 0\n", expect=1)
    run("spine", stdin=UNSAT_2CNF, expect=1)

    # a sweep writes results and is reproducible across worker counts
    with tempfile.TemporaryDirectory() as tmp:
        base1 = os.path.join(tmp, "w1")
        base4 = os.path.join(tmp, "w4")
        common = ["sweep", "--n", "60", "--k", "2", "--p-grid", "0,0.5",
                  "--m-grid", "40,66", "--trials", "25", "--seed", "5"]
        run(*common, "--out", base1, "--workers", "1")
        run(*common, "--out", base4, "--workers", "4")
        with open(base1 + ".json") as fh:
            body1 = json.load(fh)["body"]
        with open(base4 + ".json") as fh:
            body4 = json.load(fh)["body"]
        assert body1 == body4
        assert len(body1) == 4
        with open(base1 + ".csv") as fh:
            lines = [l for l in fh.read().splitlines() if l and not l.startswith("#")]
        assert lines[0] == "n,k,p,m,trials,sat_count,p_hat,ci_lo,ci_hi,seconds"
        assert len(lines) == 5

    # threshold mode end to end
    with tempfile.TemporaryDirectory() as tmp:
        base = os.path.join(tmp, "th")
        run("threshold", "--n", "50", "--k", "2", "--p-grid", "0.5", "--trials", "10",
            "--seed", "3", "--out", base)
        with open(base + ".json") as fh:
            body = json.load(fh)["body"]
        assert len(body) == 1
        assert 0.1 < body[0]["median_mstar_over_n"] < 3.0

    print("cli smoke tests passed")


if __name__ == "__main__":
    main()
