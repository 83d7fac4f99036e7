#!/usr/bin/env python3
"""Runs the ebltl binary over the corpus, checks exit codes and validates
every --json document against docs/report.schema.json."""

import json
import subprocess
import sys
from pathlib import Path

import jsonschema

CASES = [
    # (arguments, expected exit code, substring of text output or None)
    (["parse", "vm/vm1.eb"], 0, "machine VM1"),
    (["parse", "--prop", "G([a] => F [b])"], 0, "alphabet {a, b}"),
    (["parse", "--prop", "G([a] =>"], 3, None),
    (["explore", "vm/vm0.eb"], 0, "4 states, 6 edges, 0 deadlocks"),
    (["explore", "vm/vm4.eb", "--bound-states", "10"], 4, None),
    (["po", "--chain", "vm/chain.json"], 0, None),
    (["po", "--chain", "vm/mutants/vm2_variant_inverted.json"], 1, "FAIL WFD_REF"),
    (["strategy", "--chain", "vm/chain.json"], 0, "C={refund}"),
    (["strategy", "--chain", "vm/chain-to-vm3.json"], 1, "rule 6"),
    (["ca", "--chain", "vm/chain.json"], 0, "CA holds"),
    (["ca", "--chain", "vm/mutants/vm4_divergent.json"], 1, "CA fails"),
    (["mc", "vm/vm1.eb", "--prop", "phi2"], 0, "holds"),
    (["mc", "vm/vm1.eb", "--prop", "phi4"], 1, "counterexample"),
    (["mc", "lift/lift_doors.eb", "--prop", "top_ground"], 1, None),
    (["mc", "vm/vm4.eb", "--const", "maxCredit=2", "--prop", "phi7"], 0, None),
    (["beta", "--prop", "G F [pay]", "--beta", "pay", "--sigma", "pay,refill"], 0, "certified"),
    (["beta", "--prop", "!G [pay]", "--beta", "pay", "--sigma", "pay,refill"], 1, "refuted"),
    (["translate", "--chain", "vm/chain-vm0.json", "--prop", "item"], 0,
     "G ([selectBiscuit] | [selectChoc] => F ([dispenseBiscuit] | [dispenseChoc]))"),
    (["gf", "--chain", "vm/chain.json"], 0, "ASSERTED"),
    (["gf", "--chain", "vm/chain-vm0.json"], 0, "Lemma 3"),
    (["gf", "--chain", "vm/chain-to-vm3.json"], 2, "BLOCKED"),
    (["preserve", "--chain", "vm/chain.json", "--at", "1", "--prop", "phi2"], 0, "ASSERTED"),
    (["preserve", "--chain", "vm/chain.json", "--at", "2", "--prop", "phi7"], 0, "ASSERTED"),
    (["preserve", "--chain", "vm/chain.json", "--at", "1", "--prop", "phi4"], 2, "VM1 |= phi"),
    (["preserve", "--chain", "vm/chain-vm0.json", "--at", "1", "--prop", "item"], 0, "Lemma 4"),
    (["preserve", "--chain", "vm/chain.json", "--at", "9", "--prop", "phi2"], 3, None),
    (["oracle", "--random", "50"], 0, "0 disagreements"),
]


def run(binary, corpus, args):
    return subprocess.run([binary, *args, "--corpus", corpus], capture_output=True, text=True)


def main():
    binary, root = sys.argv[1], Path(sys.argv[2])
    corpus = str(root / "corpus")
    schema = json.loads((root / "docs" / "report.schema.json").read_text())
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for args, code, needle in CASES:
        label = " ".join(args)
        text = run(binary, corpus, args)
        doc = run(binary, corpus, args + ["--json"])
        problems = []
        if text.returncode != code:
            problems.append(f"exit {text.returncode}, expected {code}: {text.stderr.strip()}")
        if needle and needle not in text.stdout:
            problems.append(f"output lacks {needle!r}")
        if doc.returncode != code:
            problems.append(f"--json exit {doc.returncode}, expected {code}")
        try:
            parsed = json.loads(doc.stdout)
            for err in validator.iter_errors(parsed):
                problems.append(f"schema: {err.message} at {list(err.absolute_path)}")
            if doc.stdout != run(binary, corpus, args + ["--json"]).stdout:
                problems.append("JSON differs between runs")
        except json.JSONDecodeError as e:
            problems.append(f"invalid JSON: {e}")
        status = "ok  " if not problems else "FAIL"
        print(f"{status} {label}")
        for p in problems:
            print(f"     {p}")
        failures += bool(problems)
    print(f"{len(CASES) - failures}/{len(CASES)} cases passed")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
