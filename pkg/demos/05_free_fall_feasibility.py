"""Why the long-expansion measurements want a microgravity platform.

During free expansion the trap is off, so on the ground the sphere simply
falls. The drop distance (1/2) g t^2 sets the facility size: a tenth of a
second fits on a table, a 2 s drop already needs a ~20 m tower, and the
10-100 s expansions that make small collapse rates detectable would need
hundreds of meters to tens of kilometers of free fall. In orbit the
expansion time is limited by other things entirely.
"""
from waxsim import drop_distance

PLATFORMS = [
    ("optical table", 1.0),
    ("drop tower (100 m)", 100.0),
    ("tall drop shaft (500 m)", 500.0),
    ("space platform", float("inf")),
]

times = (0.1, 0.5, 1.0, 2.0, 4.5, 10.0, 30.0, 100.0)

header = f"{'t [s]':>7}  {'drop [m]':>12}  " + "  ".join(f"{name}" for name, _ in PLATFORMS)
print(header)
for t in times:
    d = drop_distance(t)
    fits = "  ".join(
        ("yes" if d <= height else "no").center(len(name))
        for name, height in PLATFORMS
    )
    print(f"{t:7.1f}  {d:12.1f}  {fits}")

print()
print("a 100 m tower allows t <= %.2f s of free expansion" % (2 * 100.0 / 9.81) ** 0.5)
print("t = 10 s needs %.0f m, t = 100 s needs %.0f km"
      % (drop_distance(10.0), drop_distance(100.0) / 1000.0))
