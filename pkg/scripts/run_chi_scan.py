#!/usr/bin/env python3
"""Simulate a fringe scan: add an auxiliary phase chi to one beam, record the
detector probabilities, and fit the fringe back to (phase, visibility).

Usage: python scripts/run_chi_scan.py [outdir]
"""

import json
import math
import sys
from pathlib import Path

from spinphase.cli import main as cli_main


def run(outdir: Path) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    config = {
        "mode": "chi-scan",
        "theta": math.pi / 4,
        "phi_d": math.pi / 4,
        "chi_samples": 64,
        "format": "json",
        "out": str(outdir / "chi_scan.json"),
    }
    cfg_path = outdir / "chi_scan_config.json"
    cfg_path.write_text(json.dumps(config, indent=2))
    status = cli_main(["--config", str(cfg_path)])
    if status != 0:
        return status
    payload = json.loads(Path(config["out"]).read_text())
    print(f"wrote {config['out']}")
    print(f"fitted phase      = {payload['fit']['phi']}")
    print(f"fitted visibility = {payload['fit']['visibility']}")
    return 0


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("out")
    sys.exit(run(target))
