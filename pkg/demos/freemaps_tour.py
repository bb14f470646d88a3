"""
Free polynomial maps: evaluation, sup norms on the unit ball, the class
constant rho_f and the mapping report.
"""

from ncball import InsideBall, NcPolyMap, OperatorTuple, eval_map, random_tuple, rho_f, verify_mapping
from ncball import harnack as hk
from ncball.freemaps import sup_norm_report
from ncball.radii import omega

## Building maps
swap = NcPolyMap.from_terms(2, [{(2,): 1}, {(1,): 1}])
quad = NcPolyMap.from_terms(2, [{(1, 2): 1}, {(1, 1): 1}])
print("sum on scalars:", eval_map(NcPolyMap.from_terms(2, [{(1,): 1, (2,): 1}]), OperatorTuple.scalars([0.1, 0.2])).mats[0])

## Sup norms
for name, f in [("swap", swap), ("z1z2, z1z1", quad), ("z1 + z2", NcPolyMap.from_terms(2, [{(1,): 1, (2,): 1}]))]:
    rep = sup_norm_report(f)
    print(f"{name:12}: ||f|| = {rep.value:.6f} (converged at restriction level {rep.level})")

## The class constant
for rho, a in [(1.0, 0.3), (2.0, 0.0), (2.0, 1 / 3), (0.5, 0.5)]:
    print(f"rho={rho}, ||f(0)||={a:.3f}: rho_f={rho_f(rho, a):.4f}")

## Mapping report
T = random_tuple(2, 2, 2, InsideBall(2.0, 0.3, 6))
report = verify_mapping(quad, T, 2.0, 5)
for name, check in report.checks.items():
    print(f"  {name:22} {check.status}  value={check.value}  bound={check.bound}")

## Schwarz-Pick: f(0) = 0 maps do not increase delta
A = random_tuple(7, 2, 2, InsideBall(1.0, 0.5, 6))
B = random_tuple(8, 2, 2, InsideBall(1.0, 0.5, 6))
print("delta(A, B):", hk.delta(A, B, 1.0, 5))
print("delta(f(A), f(B)):", hk.delta(eval_map(quad, A), eval_map(quad, B), 1.0, 5))
print("omega(f(A)):", omega(eval_map(quad, A), 1.0, 5), "<= omega(A)^2:", omega(A, 1.0, 6) ** 2)
