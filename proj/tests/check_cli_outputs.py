"""End-to-end checks of the fbbm command line: exit codes, schema validity,
CSV layout and byte-identical reruns."""
import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

EXE = sys.argv[1]
SRC = Path(sys.argv[2])
failures = []


def check(ok, what):
    print(("ok    " if ok else "FAIL  ") + what)
    if not ok:
        failures.append(what)


def fbbm(*args, env=None):
    return subprocess.run([EXE, *map(str, args)], capture_output=True, text=True, env=env)


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    r = fbbm("schema")
    check(r.returncode == 0, "schema exits 0")
    schema = json.loads(r.stdout)
    shipped = json.loads((SRC / "schemas" / "summary.schema.json").read_text())
    check(schema == shipped, "printed schema equals the shipped file")
    jsonschema.Draft202012Validator.check_schema(schema)

    small = {
        "evolve": "scenario: evolve\nalpha: 0.5\nn: 256\nL: 30\ndt: 0.01\nT: 0.2\nrecord_every: 5\n",
        "groundstate": "scenario: groundstate\nalpha: 2\nn: 1024\nL: 40\n",
        "stein": "scenario: stein\nalpha: 0.5\ntheta: 0.25\nper_decade: 8\nn: 256\nL: 20\n",
        "ucp": "scenario: ucp\nalpha: 0.5\nn: 256\nL: 30\ndt: 0.02\nt1: 0\nt2: 1\n"
               "amplitude: 0.5\n",
    }
    for name, text in small.items():
        cfg = tmp / f"{name}.yaml"
        cfg.write_text(text)
        check(fbbm("validate", cfg).returncode == 0, f"{name}: validate")
        outs = []
        for rep in ("a", "b"):
            out = tmp / f"{name}-{rep}"
            r = fbbm("run", cfg, "--out", out)
            check(r.returncode == 0, f"{name}: run exits 0 ({r.stdout.strip().splitlines()[-1:]})")
            outs.append(out)
        summary = json.loads((outs[0] / "summary.json").read_text())
        try:
            jsonschema.validate(summary, schema)
            check(True, f"{name}: summary.json validates")
        except jsonschema.ValidationError as e:
            check(False, f"{name}: summary.json validates ({e.message})")
        manifest = json.loads((outs[0] / "manifest.json").read_text())
        try:
            jsonschema.validate(manifest, schema)
            check(True, f"{name}: manifest.json validates")
        except jsonschema.ValidationError as e:
            check(False, f"{name}: manifest.json validates ({e.message})")
        check("wall_clock_seconds" in manifest and "wall_clock_seconds" not in summary,
              f"{name}: wall clock only in the manifest")
        check(not list(outs[0].glob("*.tmp")), f"{name}: no temporary files left")
        for f in sorted(outs[0].iterdir()):
            if f.name == "manifest.json":
                continue
            same = f.read_bytes() == (outs[1] / f.name).read_bytes()
            check(same, f"{name}: {f.name} identical on rerun")
            if f.suffix == ".csv":
                lines = f.read_text().split("\n")
                comments = [l for l in lines if l.startswith("#")]
                check(lines[0].startswith("#") and any(summary["config_hash"] in l for l in comments),
                      f"{name}: {f.name} comment header carries the hash")
                header = next(l for l in lines if not l.startswith("#"))
                check("[" in header and "," in header, f"{name}: {f.name} names columns and units")
                check("\r" not in f.read_text(), f"{name}: {f.name} LF endings")

    bad = tmp / "bad.yaml"
    bad.write_text("scenario: evolve\ndt: -0.01\nalpha: 3\nnonsense: 1\n")
    r = fbbm("validate", bad)
    check(r.returncode == 2, "invalid config exits 2")
    msg = r.stderr + r.stdout
    check("dt must be positive" in msg and "alpha" in msg and "nonsense" in msg,
          "all violations reported")
    check(fbbm("run", bad).returncode == 2, "run refuses an invalid config")

    failing = tmp / "failing.yaml"
    failing.write_text("scenario: groundstate\nalpha: 0.5\nn: 64\nL: 10\nmax_iter: 3\n")
    r = fbbm("run", failing, "--out", tmp / "failing")
    check(r.returncode == 1, "module error gives exit 1")
    m = json.loads((tmp / "failing" / "manifest.json").read_text())
    check(m["status"] == "error" and m["errors"], "module error recorded in the manifest")

    env = dict(os.environ, FBBM_OUTPUT_ROOT=str(tmp / "root"))
    r = fbbm("run", tmp / "groundstate.yaml", env=env)
    check(r.returncode == 0 and any((tmp / "root").glob("groundstate-*/manifest.json")),
          "FBBM_OUTPUT_ROOT sets the default output root")

    r = fbbm("run", tmp / "ucp.yaml", "--out", tmp / "seeded", "--seed", 5, "--threads", 1)
    check(r.returncode == 0, "--seed and --threads accepted")

if failures:
    print(f"{len(failures)} check(s) failed")
    sys.exit(1)
print("all CLI checks passed")
