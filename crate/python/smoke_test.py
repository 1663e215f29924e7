"""Smoke test for the qhamil extension module.

Build and install with

    pip install --no-build-isolation ./crates/python

or build in place with ``cargo build -p qhamil-py --release`` and copy
``target/release/libqhamil_py.so`` to ``python/qhamil.so``.
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import numpy as np

import qhamil


def main():
    h = qhamil.build("harmonic-ladder", 4)
    assert h.dim == 4
    assert np.allclose(h.eigenvalues(), [0.5, 1.5, 2.5, 3.5], atol=1e-12)

    dense = np.array(h.to_list())
    assert np.allclose(dense, np.diag([0.5, 1.5, 2.5, 3.5]))

    s = h.decompose()
    assert s.qubits == 2
    terms = dict(s.terms())
    assert math.isclose(terms["II"], 2.0)
    assert np.allclose(np.array(s.reconstruct().to_list()), dense, atol=1e-12)

    # expectation agrees with numpy on a random normalized state
    rng = np.random.default_rng(0)
    psi = rng.normal(size=4) + 1j * rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    assert math.isclose(s.expectation(list(psi)), float(np.real(psi.conj() @ dense @ psi)), abs_tol=1e-12)

    r = qhamil.vqe_run(s, depth=3, max_iterations=500, seed=1)
    assert r["converged"] and r["relative_error"] <= 0.02, r

    one = qhamil.PauliSum(1, [("I", 1.0), ("Z", -0.5)])
    r1 = qhamil.vqe_run(one, depth=0, tolerance=1e-12)
    assert abs(r1["best_energy"] - 0.5) < 1e-6

    hp = qhamil.build("harmonic-xp", 16, basis="position")
    density = hp.density(0)
    assert abs(sum(d for _, d in density) - 1.0) < 1e-10

    assert qhamil.exact_ho_energy(3) == 3.5
    assert math.isclose(qhamil.musin_susy_energy(0, 0, 0.05), -0.0025)
    lam = qhamil.CUBIC_LAMBDA_PER_ALPHA * 0.05
    assert qhamil.heisenberg_cubic_energy(0, lam) < 0.5

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "h.pauli")
        s.save(path)
        assert qhamil.PauliSum.load(path).terms() == s.terms()

    try:
        qhamil.build("harmonic-xp", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("n=1 should be rejected")

    print("qhamil", qhamil.__version__, "smoke test passed")


if __name__ == "__main__":
    main()
