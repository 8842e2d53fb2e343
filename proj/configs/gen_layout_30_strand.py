#!/usr/bin/env python3
# Regenerates layout_30_strand.json: 30 parallel strands, 3 turns per slot,
# each turn band holding a staggered 6x5 grid of conductor positions. The
# strand-to-position assignment is shuffled per turn (fixed seed).
import json
import os
import random

random.seed(20240917)
n = 30
slot_width, slot_depth, stack_length = 0.008, 0.036, 0.2
r_dc = 0.05
rows, cols = 6, 5


def position(turn, p):
    r, c = divmod(p, cols)
    return (0.0008 + c * 0.0016, turn * 0.012 + 0.0009 + r * 0.0018 + c * 0.0003)


perms = [list(range(n))]
for _ in (1, 2):
    q = list(range(n))
    random.shuffle(q)
    perms.append(q)

strands = []
for i in range(n):
    path = []
    for t in range(3):
        x, y = position(t, perms[t][i])
        path.append({"x": round(x, 6), "y": round(y, 6), "polarity": 1})
    strands.append({"label": "s%02d" % (i + 1), "r_dc": r_dc, "path": path})

f = 400
harmonics = [(1, 100, 0), (5, 8, 0.3), (7, 5, -0.7), (11, 3, 1.1)]
cfg = {
    "name": "layout_30_strand",
    "layout": {
        "slot_width": slot_width,
        "slot_depth": slot_depth,
        "stack_length": stack_length,
        "end_winding_inductance": 0.0,
        "strands": strands,
    },
    "drive": {
        "period": 1 / f,
        "dc": 0.0,
        "harmonics": [{"order": h, "amplitude": a, "phase": p} for (h, a, p) in harmonics],
    },
    "analysis": {"grid_size": 1024},
    "schedules": [
        {"name": "identity", "kind": "identity"},
        {"name": "full_cyclic", "kind": "full_cyclic"},
    ],
    "sweep": {"frequencies": [0, 50, 100, 200, 400, 800, 1600]},
}
out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "layout_30_strand.json")
with open(out, "w") as fh:
    fh.write(json.dumps(cfg, indent=2) + "\n")
