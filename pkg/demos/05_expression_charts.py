# %% [markdown]
# # Charts from expressions and the command line
#
# The CLI reads chart components as plain arithmetic. Jacobians come from
# symbolic differentiation of the parsed expressions.

# %%
import io
import json

from wirtinger.cli import run
from wirtinger.expr import parse_components

comps = parse_components("(u, v, u^2 - v^2, 2*u*v)")
print([str(c.diff("u")) for c in comps])

# %%
job = {
    "command": "scan",
    "structure": {"kind": "standard", "n": 2},
    "chart": {"components": "(u, v, u^3 - 3*u*v^2, sin(u)*v)"},
    "grid": [[-1, 1, 11], [-1, 1, 11]],
}
csv_out, summary = io.StringIO(), io.StringIO()
run(job, stdout=csv_out, stderr=summary)
print(csv_out.getvalue().splitlines()[:3])
print(json.loads(summary.getvalue())["fractions"])
