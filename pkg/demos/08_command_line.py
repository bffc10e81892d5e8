# %% [markdown]
# # Scenario files and the command line
#
# The same computations are available as `vaporeit <subcommand>`. Each
# run writes a CSV of the curve and a JSON file holding the resolved
# configuration and the extracted observables. This script drives the CLI
# in-process and reads back what it wrote.

# %%
import json
import tempfile
from pathlib import Path

from vaporeit.cli import main
from vaporeit.io import read_csv

out = Path(tempfile.mkdtemp())
scenario = out / "scenario.json"
scenario.write_text(json.dumps({"cell": {"preset": "long-n2"}, "d": 3.0,
                                "spectrum": {"n_points": 101}}))

# %%
main(["spectrum", "--config", str(scenario), "--out", str(out)])
header, data = read_csv(out / "spectrum.csv")
print(header, data.shape)
print(json.loads((out / "spectrum.json").read_text())["observables"])

# %%
main(["store", "--set", "d=5", "--set", "storage.tau=1e-4", "--out", str(out)])
print(json.loads((out / "store.json").read_text())["observables"])

# %% [markdown]
# Bad input is reported with the offending key and exit status 2.

# %%
print("exit status:", main(["spectrum", "--set", "cell.colour=1", "--out", str(out)]))
