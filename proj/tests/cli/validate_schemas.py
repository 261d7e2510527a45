"""Run each JSON-emitting command and validate its output against schema/."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CASES = [
    ("check", ["check", "--theta", "0.5,-0.5"], 0),
    ("check", ["check", "--theta", "0,1"], 1),
    ("estimate", ["estimate", "--theta", "0.5", "--noise", "gaussian", "--seed", "1",
                  "--h", "50", "--sigma2", "1"], 0),
    ("estimate", ["estimate", "--input", "{ones}", "--theta-dim", "1", "--h", "2",
                  "--sigma2", "1"], 0),
    ("limits", ["limits", "--theta", "1", "--sigma2", "1"], 0),
    ("limits", ["limits", "--theta", "0,1", "--sigma2", "2"], 0),
    ("limits", ["limits", "--theta", "1,-1", "--sigma2", "1"], 0),
    ("make-theta", ["make-theta", "--root=-1", "--root", "0.2:0.3"], 0),
    ("experiment-normality", ["experiment", "normality", "--theta", "0.5,0.1", "--noise",
                              "gaussian", "--sigma2", "1", "--seed", "3", "--h", "100",
                              "--replications", "20"], 0),
    ("experiment-normality", ["experiment", "normality", "--theta", "0.5", "--noise",
                              "gaussian", "--sigma2", "1", "--seed", "3", "--h", "1e6",
                              "--replications", "3", "--max-n", "10", "--timing"], 1),
    ("experiment-stopping", ["experiment", "stopping", "--theta", "1", "--noise", "gaussian",
                             "--sigma2", "1", "--seed", "3", "--h", "200",
                             "--replications", "20", "--steps-per-unit", "1000"], 0),
    ("experiment-stopping", ["experiment", "stopping", "--theta", "0.5", "--noise",
                             "rademacher", "--sigma2", "1", "--seed", "3", "--h", "200",
                             "--replications", "20", "--timing"], 0),
    ("experiment-fisher-ratio", ["experiment", "fisher-ratio", "--theta", "1,-1", "--noise",
                                 "gaussian", "--sigma2", "1", "--seed", "3", "--n", "500",
                                 "--seeds", "4"], 0),
]


def main() -> int:
    cli, schema_dir = sys.argv[1], sys.argv[2]
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        ones = os.path.join(tmp, "ones.csv")
        with open(ones, "w") as f:
            f.write("k,x\n1,1\n2,1\n3,1\n4,1\n5,1\n")
        for name, args, code in CASES:
            args = [a.replace("{ones}", ones) for a in args]
            with open(os.path.join(schema_dir, name + ".schema.json")) as f:
                schema = json.load(f)
            jsonschema.Draft202012Validator.check_schema(schema)
            proc = subprocess.run([cli, *args], capture_output=True, text=True)
            label = " ".join(args)
            if proc.returncode != code:
                print(f"FAIL {label}: exit {proc.returncode}, want {code}\n{proc.stderr}")
                failures += 1
                continue
            try:
                jsonschema.validate(json.loads(proc.stdout), schema,
                                    cls=jsonschema.Draft202012Validator)
            except jsonschema.ValidationError as e:
                print(f"FAIL {label}: {e.message} at {list(e.absolute_path)}")
                failures += 1
                continue
            print(f"ok   {label}")

        # a schema that accepts anything would pass the loop above
        with open(os.path.join(schema_dir, "check.schema.json")) as f:
            schema = json.load(f)
        doc = json.loads(subprocess.run([cli, "check", "--theta", "0.5"],
                                        capture_output=True, text=True).stdout)
        doc["result"]["unexpected"] = 1
        if jsonschema.Draft202012Validator(schema).is_valid(doc):
            print("FAIL schema accepted an unknown result field")
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
