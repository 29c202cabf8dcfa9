"""Counts SVG shape elements with a real XML parser and compares them with
the mark count reported by the engine for the same state."""

import json
import os
import subprocess
import sys
import xml.etree.ElementTree as ET

SHAPES = {"rect", "line", "polyline", "circle", "text", "path"}


def shapes(path):
    root = ET.parse(path).getroot()
    return [el.tag.split("}")[-1] for el in root.iter() if el.tag.split("}")[-1] in SHAPES]


def main():
    cli, data, out = sys.argv[1:4]
    dataset = os.path.join(data, "walkthrough.json")
    script = os.path.join(out, "check_svg_script.ndjson")
    failures = 0

    cases = {
        "overview": [],
        "walkthrough": [json.loads(l) for l in open(os.path.join(data, "walkthrough.ndjson")) if l.strip() and not l.startswith("#")],
    }
    for name, commands in cases.items():
        with open(script, "w") as f:
            for c in commands:
                f.write(json.dumps(c) + "\n")
            f.write(json.dumps({"kind": "query_stats"}) + "\n")
        svg = os.path.join(out, "check_svg_%s.svg" % name)
        res = subprocess.run([cli, "--data", dataset, "--script", script, "--snapshot", svg, "--events"],
                             capture_output=True, text=True)
        if res.returncode != 0:
            print("FAIL %s: rmc exited %d: %s" % (name, res.returncode, res.stderr))
            failures += 1
            continue
        stats = [json.loads(l) for l in res.stdout.splitlines() if l.startswith("{")]
        stats = [e for e in stats if e.get("kind") == "stats"]
        marks = stats[-1]["payload"]["markCount"]
        found = len(shapes(svg))
        status = "ok" if found == marks else "FAIL"
        failures += found != marks
        print("%s %s: %d shape elements, %d marks" % (status, name, found, marks))

    # Two snapshots of the same state are byte-identical.
    a, b = (os.path.join(out, "check_svg_same_%d.svg" % i) for i in (1, 2))
    for p in (a, b):
        subprocess.run([cli, "--data", dataset, "--snapshot", p], check=True)
    if open(a, "rb").read() != open(b, "rb").read():
        print("FAIL repeated snapshots differ")
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
