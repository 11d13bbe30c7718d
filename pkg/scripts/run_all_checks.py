#!/usr/bin/env python3
"""Run every CLI verification with the default configuration and summarise.

Equivalent to `padicops all --config default.toml`; kept as a script so the
whole battery can be launched without installing the console entry point.
"""

import os
import subprocess
import sys

CMD = [sys.executable, "-m", "padicops.cli", "all", "--config", "default.toml"]


def main() -> int:
    env = dict(os.environ)
    env["PYTHONPATH"] = "src" + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(CMD, env=env, capture_output=True, text=True)
    sys.stdout.write(proc.stdout)
    sys.stderr.write(proc.stderr)
    print(f"exit code: {proc.returncode}", file=sys.stderr)
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
