"""Designing inner coupling matrices with prescribed transverse poles.

Undirected case: the node dynamic has an oscillatory pair, one stable
mode, and a marginally stable ramp pair.  A uniform modal level makes
every transverse mode Hurwitz; strengthening the level on the ramp pair
alone speeds up exactly those components, and pole placement lands the
weakest mode where requested.

Directed case: the topology's complex eigenvalue pair forces complex
modal entries; their argument must clear the worst eigenvalue argument
by more than 90 degrees, and the margin size trades off overshoot.

Run:  python demos/02_inner_coupling_design.py
"""

import numpy as np

from netsync import (
    ArgumentMarginViolation,
    Laplacian,
    ModalCouplingSpec,
    decompose,
    design_directed,
    design_undirected,
    realize,
    spectrum,
    verify,
)
from netsync.scenarios import load_fixture


def show_modes(analysis):
    for record in analysis.modes:
        lam = record.laplacian_eigenvalue
        print(f"  mode {record.k}: lambda = {lam:.4f}, "
              f"max Re = {record.max_real_part:+.4f}")
    print(f"  all transverse modes Hurwitz: {analysis.overall_hurwitz}")


# ── undirected design ────────────────────────────────────────────────────────

fx = load_fixture("example1")
A = np.array(fx["A"], dtype=float)
lap_spec = spectrum(Laplacian(np.array(fx["laplacian"], dtype=float)))
decomp = decompose(A)
print("node-dynamic modes:", np.round(decomp.mode_eigenvalues, 4))
print(f"lambda2 = {lap_spec.lambda2.real:.4f}")

print("\n-- uniform modal level -20 --")
uniform = ModalCouplingSpec(entries=np.full(5, -20.0, dtype=complex))
mats = realize(uniform, decomp)
print("H_eff = ")
print(np.array_str(mats.H_eff, precision=2, suppress_small=True))
show_modes(verify(A, mats.H_eff, 1.0, lap_spec))

print("\n-- strengthen only the ramp pair (zero modes) to -30 --")
entries = np.where(np.abs(decomp.mode_eigenvalues) <= 1e-6, -30.0, -20.0)
mats2 = realize(ModalCouplingSpec(entries=entries.astype(complex)), decomp)
print("H_eff diagonal:", np.diag(mats2.H_eff).round(2))
show_modes(verify(A, mats2.H_eff, 1.0, lap_spec))

print("\n-- pole placement: put the weakest transverse mode at -2 --")
placed = design_undirected(decomp, lap_spec.lambda2.real, poles=[-2.0] * 5)
mats3 = realize(placed, decomp)
mode = A + lap_spec.lambda2.real * mats3.H_eff
print("modal entries:", placed.entries.real.round(4))
print("lambda2-mode max Re eigenvalue:",
      np.linalg.eigvals(mode).real.max().round(8))

# ── directed design ──────────────────────────────────────────────────────────

fx2 = load_fixture("example2")
A2 = np.array(fx2["A"], dtype=float)
lap_spec2 = spectrum(Laplacian(np.array(fx2["laplacian"], dtype=float)))
decomp2 = decompose(A2)
print("\n\ndirected topology: theta_max ="
      f" {np.degrees(lap_spec2.theta_max):.4f} deg")

for argument_deg in (fx2["H4_argument_deg"], fx2["H5_argument_deg"]):
    spec = design_directed(
        decomp2, lap_spec2.lambda2, lap_spec2.theta_max,
        argument=np.radians(argument_deg),
        poles=[-lap_spec2.lambda2.real] * 2,
    )
    mats = realize(spec, decomp2)
    print(f"\n-- argument {argument_deg} deg "
          f"(margin {argument_deg - np.degrees(lap_spec2.theta_max):.1f} deg) --")
    print("modal entries:", np.round(spec.entries, 4))
    print("H_eff =")
    print(np.array_str(mats.H_eff, precision=4, suppress_small=True))
    show_modes(verify(A2, mats.H_eff, 1.0, lap_spec2))

print("\n-- an argument inside the 90 deg margin is rejected --")
try:
    design_directed(decomp2, lap_spec2.lambda2, lap_spec2.theta_max,
                    argument=np.radians(100.0))
except ArgumentMarginViolation as exc:
    print("rejected:", exc)
