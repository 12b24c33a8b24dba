# %% [markdown]
# # Command line and file formats
#
# Every capability is also a `fracsobolev` subcommand writing CSV or JSON.
# Functions can be given as builtins, JSON specs or CSV grid samples.

# %%
import subprocess
import sys
import tempfile
from pathlib import Path

from fracsobolev import build_grid, parse_builtin
from fracsobolev.functionspec import write_samples_csv


def fracsobolev(*args):
    proc = subprocess.run([sys.executable, "-m", "fracsobolev", *args],
                          capture_output=True, text=True)
    print("$ fracsobolev", " ".join(args), f"  [exit {proc.returncode}]")
    print(proc.stdout[:600] + proc.stderr[:300])


fracsobolev("spectrum", "--n", "2", "--gamma", "0.5", "--L", "4")
fracsobolev("onofri", "--omega", "conformal:n=2:a=0.4")
fracsobolev("continuation", "--n", "2", "--omega", "zonal:0.3cos", "--gammas", "0.5:0.999:4:geometric")

# %% [markdown]
# Grid samples round-trip through CSV; bad input exits with status 2.

# %%
with tempfile.TemporaryDirectory() as tmp:
    grid = build_grid(2, 8)
    path = Path(tmp) / "w.csv"
    write_samples_csv(path, grid, parse_builtin("zonal:0.2cos^2", n=2).evaluate(grid))
    fracsobolev("onofri", "--omega", str(path), "--n", "2")
    spec = Path(tmp) / "w.json"
    spec.write_text(parse_builtin("extremizer:n=4:gamma=1.5:a=0.3").to_json())
    fracsobolev("sobolev", "--n", "4", "--gamma", "1.5", "--f", str(spec), "--out", "json")
fracsobolev("spectrum", "--n", "2", "--gamma", "1.5", "--L", "4")
