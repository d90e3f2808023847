# %% [markdown]
# # Batch runs from scenario files
#
# The same experiments driven through the command line entry point. Each
# output carries its fully resolved configuration.

# %%
import json
import tempfile
from pathlib import Path

from nfbeamscope.cli import main

work = Path(tempfile.mkdtemp())
(work / "axial.json").write_text(json.dumps({"geometry": "ULA", "sweep": "axial"}))
print("exit", main(["pattern", "--config", str(work / "axial.json"),
                    "--output", str(work / "ula_axial.csv")]))
report = json.loads((work / "ula_axial.report.json").read_text())
print("PSLL", report["report"]["psll_db"], "ISLL", report["report"]["isll_db"])

# %%
(work / "sumrate.json").write_text(json.dumps(
    {"geometries": ["ULA", "UCA"], "trials": 50, "snr_grid_db": [0, 10, 20]}))
print("exit", main(["sumrate", "--config", str(work / "sumrate.json"),
                    "--output", str(work / "sumrate.csv"), "--seed", "3"]))
print((work / "sumrate.csv").read_text())

# %%
(work / "typo.json").write_text(json.dumps({"geometry": "ULA", "sweep": "axial", "gird": {}}))
print("exit", main(["pattern", "--config", str(work / "typo.json")]))
