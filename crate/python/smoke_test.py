"""Smoke test for the dfflab extension module."""

import math

import dfflab


def main():
    a = dfflab.DensityDistribution([0.0, 1.0, 2.0], [0.25, 0.5, 0.25])
    assert abs(dfflab.fidelity(a, a) - 1.0) < 1e-15
    b = dfflab.DensityDistribution([0.0, 1.0, 2.0], [1.0, 1.0, 2.0], renormalize=True)
    f = dfflab.fidelity(a, b)
    assert 0.0 < f < 1.0
    assert dfflab.susceptibility_from_fidelity(f, 0.1) > 0.0
    try:
        dfflab.DensityDistribution([0.0, 1.0], [0.3, 0.3])
    except ValueError:
        pass
    else:
        raise AssertionError("unnormalized weights accepted")

    gs = dfflab.lmg_ground_state(16, 0.5, 0.9)
    assert gs.residual < 1e-8 and len(gs.amplitudes) > 0
    curve = dfflab.lmg_dff_sweep(64, 0.5, 0.8, 1.1, 0.005)
    assert len(curve) == 61
    h_min, f_min = curve.min_fidelity()
    assert 0.9 < h_min < 1.1 and f_min < 1.0

    roots = dfflab.solve_bae(6, 6, 3, 4.0)
    ed = dfflab.exact_ground_energy_small(6, 6, 3, 4.0)
    assert abs(roots.energy() - ed) < 1e-8, (roots.energy(), ed)
    k_mid, rho = roots.density_of_state()
    assert len(k_mid) == len(rho) == 5

    hub = dfflab.hubbard_dff_sweep(14, 4.0, 1.0, 0.5)
    assert len(hub) == 6
    rho0 = dfflab.thermodynamic_dos(1e6, 0.0)
    assert abs(rho0 - 1.0 / (2.0 * math.pi)) < 1e-5
    assert abs(dfflab.bessel_j0(0.0) - 1.0) < 1e-15
    print("smoke test ok: F =", f, "E_BAE =", roots.energy())


if __name__ == "__main__":
    main()
