"""Smoke test for the compiled `hubent` extension module.

Build and run from the repository root:

    cargo build -p hubent-py --release --features extension-module
    cp target/release/libhubent.so python/hubent.so   # hubent.pyd on Windows
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import hubent  # noqa: E402


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b} (tol {tol})"


def main():
    free = hubent.ModelParams(6, 0.0)
    point = hubent.entanglement_at(free, 3, 3)
    close(point.ev, 2.0, 1e-8)
    for p in point.rdm.populations():
        close(p, 0.25, 1e-9)
    close(hubent.von_neumann_entropy(point.rdm), point.ev, 1e-12)

    dimer = hubent.ModelParams(2, 4.0, boundary="open")
    e = hubent.lowest_eigenvalues(dimer, 1, 1, k=1)
    close(e[0], 2.0 - math.sqrt(8.0), 1e-10)
    assert hubent.sector_dim(10, 5, 5) == 63504
    assert hubent.sector_for_particles(5) == (3, 2)

    params = hubent.ModelParams(6, 4.0)
    plus = hubent.entanglement_at(params, 3, 3).ev
    minus = hubent.entanglement_at(hubent.ModelParams(6, -4.0), 3, 3).ev
    close(plus, minus, 1e-8)

    x = [1.0] + [0.0] * 399
    y = hubent.apply_hamiltonian(params, 3, 3, x)
    assert len(y) == 400

    gap = hubent.charge_gap(free, 6)
    close(gap.delta_e, gap.e_plus + gap.e_minus - 2 * gap.e_zero, 1e-12)
    close(gap.delta_e, 2.0, 1e-9)

    close(hubent.gs_energy_per_site(0.0), -4.0 / math.pi, 1e-8)
    close(hubent.double_occupancy(0.0), 0.25, 1e-12)
    w16 = hubent.double_occupancy(16.0)
    close(w16, hubent.series_strong_w(16.0).value, 1e-5)
    assert hubent.series_weak_w(3.0).warning is not None
    close(hubent.ev_infinite_u(2.0 / 3.0), math.log2(3.0), 1e-12)

    curve = hubent.scan_filling(6, 1e6)
    assert len(curve) == 11
    n_best, e_best = curve.argmax
    close(n_best, 2.0 / 3.0, 1e-12)
    close(e_best, math.log2(3.0), 1e-4)

    vs = [0.5 * k - 2.0 for k in range(9)]
    sweep = hubent.scan_v(4, 2.0, vs)
    assert all(0.0 <= e <= 2.0 for e in sweep.ev_values)
    assert sweep.dominant is None or -2.0 <= sweep.dominant.location <= 2.0

    grid = hubent.scan_uv(4, [-2.0, 0.0, 2.0], [0.0, 1.0])
    assert len(grid.ev) == 3 and len(grid.ev[0]) == 2

    slope = hubent.slope_jump_at_half_filling(6, 2.0)
    close(slope.slope_plus, -slope.slope_minus, 1e-8)

    sel = hubent.select_sector_by_mu(hubent.ModelParams(4, 4.0, mu=2.0))
    assert sel.particles == 4

    try:
        hubent.entanglement_at(free, 9, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("invalid sector accepted")

    print("hubent smoke test passed")


if __name__ == "__main__":
    main()
