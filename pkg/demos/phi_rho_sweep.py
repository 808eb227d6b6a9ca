"""Sweep rho and phi along r for a few warped families.

rho vanishes identically on the conformally flat family h = C1 r + C2 r^2 + 1
and changes sign at r = q^2/m for Reissner-Nordstrom.
"""
import io

from pseudocurv.cli import main

runs = [
    ["sweep", "--family", "schwarzschild", "--param", "m=1", "--from", "3", "--to", "10", "--steps", "8"],
    ["sweep", "--family", "reissner_nordstrom", "--param", "m=1", "--param", "q=1",
     "--from", "0.6", "--to", "1.6", "--steps", "6"],
    ["sweep", "--family", "example63", "--function", "h=0.3*r + 0.2*r^2 + 1",
     "--from", "1", "--to", "4", "--steps", "7"],
]
for argv in runs:
    out = io.StringIO()
    code = main(argv, out=out)
    print("$ pseudocurv", " ".join(argv), f"  (exit {code})")
    print(out.getvalue())
