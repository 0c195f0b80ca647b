"""End-to-end checks of the fracrd binary: exit codes, output files, and
report.json against the published schema."""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

FRACRD, SOURCE = Path(sys.argv[1]), Path(sys.argv[2])
SCHEMA = json.loads((SOURCE / "schemas" / "report.schema.json").read_text())
CONFIGS = SOURCE / "configs"

failures = []


def check(cond, what):
    print(("ok    " if cond else "FAIL  ") + what)
    if not cond:
        failures.append(what)


def fracrd(*args):
    return subprocess.run([str(FRACRD), *map(str, args)], capture_output=True, text=True)


def valid_report(path, what):
    try:
        jsonschema.validate(json.loads(path.read_text()), SCHEMA)
        check(True, what + ": report.json matches the schema")
    except (OSError, ValueError, jsonschema.ValidationError) as e:
        check(False, what + ": report.json matches the schema (" + str(e).splitlines()[0] + ")")


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    expected = {"decay": 0, "linear": 0, "blowup": 2, "pme": 0, "bounded_1d": 0}
    for name, code in expected.items():
        out = tmp / name
        r = fracrd("run", CONFIGS / (name + ".ini"), "--out", out)
        check(r.returncode == code, "run %s exits %d (got %d)" % (name, code, r.returncode))
        for f in ("norms.csv", "coeffs_final.csv", "report.json"):
            check((out / f).exists(), "run %s writes %s" % (name, f))
        valid_report(out / "report.json", "run " + name)

    bad = tmp / "bad.ini"
    bad.write_text((CONFIGS / "linear.ini").read_text().replace("alpha = 0.5", "alpha = 1.5"))
    r = fracrd("run", bad, "--out", tmp / "bad")
    check(r.returncode == 1 and "alpha" in r.stderr, "alpha = 1.5 exits 1 naming the key")
    valid_report(tmp / "bad" / "report.json", "invalid config")

    unknown = tmp / "unknown.ini"
    unknown.write_text((CONFIGS / "linear.ini").read_text() + "\nfrobnicate = 1\n")
    r = fracrd("run", unknown, "--out", tmp / "unknown")
    check(r.returncode == 1 and "frobnicate" in r.stderr, "unknown key exits 1 naming the key")
    valid_report(tmp / "unknown" / "report.json", "unknown key")

    r = fracrd("run", tmp / "missing.ini", "--out", tmp / "missing")
    check(r.returncode == 1, "missing config exits 1")
    valid_report(tmp / "missing" / "report.json", "missing config")

    r = fracrd("sweep", CONFIGS / "linear.ini", "--key", "alpha", "--values", "0.9,0.5", "--out", tmp / "sw")
    check(r.returncode == 0, "sweep exits 0")
    index = (tmp / "sw" / "index.csv").read_text().splitlines()
    check(len(index) == 3 and index[1].startswith("0.5,"), "sweep index is ordered by value")
    for d in ("run_000", "run_001"):
        valid_report(tmp / "sw" / d / "report.json", "sweep " + d)
    r = fracrd("sweep", CONFIGS / "linear.ini", "--key", "run.output", "--values", "x", "--out", tmp / "sw2")
    check(r.returncode == 1, "sweep over a non-sweepable key exits 1")

    r = fracrd("verify", "mlf")
    lines = [json.loads(l) for l in r.stdout.splitlines()]
    check(r.returncode == 0 and [l["id"] for l in lines] == ["C1"] and lines[0]["pass"], "verify mlf passes")
    check(all(k in lines[0] for k in ("id", "pass", "measured", "bound", "runtime_ms")), "verify line fields")
    r = fracrd("verify", "nonsense")
    check(r.returncode == 1, "verify with an unknown suite exits 1")

    r = fracrd("mlf", "eval", "--alpha", "0.5", "--beta", "1", "--z", "-1")
    check(r.returncode == 0 and abs(float(r.stdout) - 0.42758357615580700) < 1e-14, "mlf eval value")
    r = fracrd("mlf", "eval", "--alpha", "0", "--beta", "1", "--z", "-1")
    check(r.returncode == 1, "mlf eval rejects alpha = 0")
    r = fracrd()
    check(r.returncode == 1, "no subcommand exits 1")

sys.exit(1 if failures else 0)
