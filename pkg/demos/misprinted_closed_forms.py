"""Show where printed closed forms disagree with the computed tensors.

For each red acceptance criterion this prints the fitted value, the printed
value and the repaired value that the suite reports as informational.
"""
from pseudocurv import suite

results = [r for name in ("section5", "rn_point", "jnw", "nd_oracles", "theorem61")
           for r in suite.run_suite(name)]
for res in results:
    print(f"{res.name} ({'PASS' if res.passed else 'FAIL'})")
    for it in res.items:
        if it.passed and not it.informational:
            continue
        tag = "informational" if it.informational else "criterion"
        line = f"  [{tag}] {it.label}: residual {it.residual:.3e}"
        if it.value is not None:
            line += f"  got {it.value!r} expected {it.expected!r}"
        print(line)
        if it.note:
            print(f"      {it.note}")
