"""Solving a puzzle step by step, and the bent-line Kurve view."""
from sudocube.clues import generate_puzzle
from sudocube.isomap import Format, LineKind, bent_line, cube_to_kurve, parse, serialize
from sudocube.solve import Status, propagate, solve

gen = generate_puzzle(seed=1, n=3, k=8)
after, trace = propagate(gen.puzzle)
for d in trace[:6]:
    print(f"{d.rule.value:>20}: {d.digit} at {tuple(d.cell)} from {[tuple(p) for p in d.premises][:3]}")
print("deductions:", len(trace), "complete:", after.grid.is_complete)

report = solve(gen.puzzle)
assert report.status is Status.UNIQUE and report.solution == gen.solution

# the same solution as three page blocks with bent rows and columns
k = cube_to_kurve(report.solution)
text = serialize(k, Format.KURVE)
print(text)
assert parse(text) == k
row0 = bent_line(LineKind.ROW, 0, 3)
print("bent row 0:", "".join(str(k[c]) for c in row0.cells))
