"""Runs the bdhomog executable on small configs and checks exit codes and artifacts."""
import json
import os
import subprocess
import sys
import tempfile

EXE = sys.argv[1]


def run(args, env=None):
    e = dict(os.environ)
    e.pop("BDHOMOG_SEED", None)
    if env:
        e.update(env)
    return subprocess.run([EXE] + args, capture_output=True, text=True, env=e)


def write(d, name, text):
    p = os.path.join(d, name)
    with open(p, "w") as f:
        f.write(text)
    return p


def strip_times(doc):
    if isinstance(doc, dict):
        return {k: strip_times(v) for k, v in doc.items() if "wall_time" not in k}
    if isinstance(doc, list):
        return [strip_times(v) for v in doc]
    return doc


def main():
    failures = []

    def check(cond, what):
        print(("ok   " if cond else "FAIL ") + what)
        if not cond:
            failures.append(what)

    with tempfile.TemporaryDirectory() as d:
        cfg = write(d, "v.toml", '[integrand]\nname = "homogeneous_norm"\n')
        r = run(["verify-integrand", "--config", cfg, "--out", os.path.join(d, "v")])
        check(r.returncode == 0, "verify-integrand exits 0")
        doc = json.load(open(os.path.join(d, "v", "verify-integrand.json")))
        check(doc["all_pass"] is True, "verify-integrand all_pass")
        check(doc["version"] and doc["config"]["integrand"]["name"] == "homogeneous_norm", "json embeds config and version")

        bad = write(d, "bad.toml", 'experiment = "cell-bulk"\n[integrand\n')
        r = run(["cell-bulk", "--config", bad, "--out", os.path.join(d, "bad")])
        check(r.returncode == 1, "malformed TOML exits 1")
        check(not os.path.exists(os.path.join(d, "bad")), "malformed TOML writes nothing")
        check(r.stderr.strip() != "", "diagnostic on stderr")

        r = run(["cell-bulk", "--out", d])
        check(r.returncode == 1, "missing --config exits 1")

        r = run(["verify-integrand", "--config", cfg, "--out", d], env={"BDHOMOG_SEED": "abc"})
        check(r.returncode == 1, "bad BDHOMOG_SEED exits 1")

        q = write(d, "q.toml", '[integrand]\nname = "homogeneous_norm"\n[solver]\nmax_sweeps = 0\n')
        r = run(["verify-integrand", "--config", q, "--out", d])
        check(r.returncode == 1, "invalid solver option exits 1")

        cb = write(d, "cb.toml", """
[integrand]
name = "laminate"
[datum]
A = [[1.0, 0.0], [0.0, 0.0]]
[schedule]
r = [1, 2, 4]
""")
        r = run(["cell-bulk", "--config", cb, "--out", os.path.join(d, "cb")])
        check(r.returncode == 0, "cell-bulk exits 0")
        rows = open(os.path.join(d, "cb", "cell-bulk.csv")).read().strip().splitlines()
        check(rows[0] == "r,h,normalized_value,wall_time_ms" and len(rows) == 4, "cell-bulk CSV has 3 rows")
        doc = json.load(open(os.path.join(d, "cb", "cell-bulk.json")))
        check("plateau_flag" in doc["result"], "plateau flag present")
        check(os.path.exists(os.path.join(d, "cb", "cell-bulk.svg")), "cell-bulk SVG written")

        st = write(d, "st.toml", """
seed = 3
[integrand]
name = "random_checkerboard"
law = { kind = "bernoulli", p = 0.5, a_soft = 1.0, a_hard = 2.0 }
[stoch]
mode = "subadditive"
triples = 4
""")
        outs = []
        for k, extra in enumerate([["--threads", "1"], ["--threads", "3"]]):
            o = os.path.join(d, "st%d" % k)
            r = run(["stoch", "--config", st, "--out", o] + extra)
            check(r.returncode == 0, "stoch subadditive exits 0 (%s)" % " ".join(extra))
            outs.append((strip_times(json.load(open(os.path.join(o, "stoch.json")))),
                         open(os.path.join(o, "stoch.csv")).read()))
        check(outs[0] == outs[1], "identical outputs for identical config and seed")

        o = os.path.join(d, "st_seed")
        run(["stoch", "--config", st, "--out", o], env={"BDHOMOG_SEED": "99"})
        doc = json.load(open(os.path.join(o, "stoch.json")))
        check(doc["config"]["seed"] == 99, "BDHOMOG_SEED overrides the config seed")
        run(["stoch", "--config", st, "--out", o, "--seed", "5"], env={"BDHOMOG_SEED": "99"})
        doc = json.load(open(os.path.join(o, "stoch.json")))
        check(doc["config"]["seed"] == 5, "--seed overrides BDHOMOG_SEED")

        viol = write(d, "viol.toml", """
[oracle]
profile = "laminate"
h = [0.5]
""")
        r = run(["oracle1d", "--config", viol, "--out", os.path.join(d, "viol")])
        check(r.returncode in (0, 2), "oracle1d runs")

    print("%d failure(s)" % len(failures))
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
