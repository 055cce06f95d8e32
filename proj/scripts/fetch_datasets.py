#!/usr/bin/env python3
"""Download the size datasets read by `mte fit`.

    debian  ->  <out>/Packages            (stable/main/binary-amd64 index)
    pypi    ->  <out>/pypi/<project>.json (package-index JSON for the top N projects)

The tool itself never touches the network; run this once and point `mte fit` at the
files. Snapshots drift, so record the date of the download alongside any results.
"""

import argparse
import json
import lzma
import pathlib
import sys
import time

import requests

DEBIAN_URL = "https://deb.debian.org/debian/dists/stable/main/binary-amd64/Packages.xz"
TOP_PYPI_URL = "https://hugovk.github.io/top-pypi-packages/top-pypi-packages.min.json"
PYPI_JSON_URL = "https://pypi.org/pypi/{name}/json"


def fetch_debian(out: pathlib.Path) -> None:
    resp = requests.get(DEBIAN_URL, timeout=120)
    resp.raise_for_status()
    (out / "Packages").write_bytes(lzma.decompress(resp.content))


def fetch_pypi(out: pathlib.Path, top: int, pause: float) -> None:
    resp = requests.get(TOP_PYPI_URL, timeout=60)
    resp.raise_for_status()
    names = [row["project"] for row in resp.json()["rows"][:top]]
    target = out / "pypi"
    target.mkdir(parents=True, exist_ok=True)
    for i, name in enumerate(names, 1):
        path = target / f"{name}.json"
        if path.exists():
            continue
        r = requests.get(PYPI_JSON_URL.format(name=name), timeout=60)
        if r.status_code != 200:
            print(f"skip {name}: HTTP {r.status_code}", file=sys.stderr)
            continue
        path.write_text(json.dumps(r.json()))
        if i % 50 == 0:
            print(f"{i}/{len(names)}", file=sys.stderr)
        time.sleep(pause)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out", type=pathlib.Path, default=pathlib.Path("data"))
    ap.add_argument("--only", choices=["debian", "pypi"])
    ap.add_argument("--top", type=int, default=750, help="number of package-index projects")
    ap.add_argument("--pause", type=float, default=0.1, help="seconds between package-index requests")
    args = ap.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    if args.only in (None, "debian"):
        fetch_debian(args.out)
    if args.only in (None, "pypi"):
        fetch_pypi(args.out, args.top, args.pause)
    return 0


if __name__ == "__main__":
    sys.exit(main())
