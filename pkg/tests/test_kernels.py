"""Cross-checks between the pure-Python and compiled kernel backends."""

import math

import numpy as np
import pytest

from headmimic._kernels import available_backends

BACKENDS = available_backends()
needs_compiled = pytest.mark.skipif(
    "compiled" not in BACKENDS,
    reason="compiled kernel extension not built",
)


def random_unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


@needs_compiled
def test_rotation_between_backends_agree():
    pure, compiled = BACKENDS["pure"], BACKENDS["compiled"]
    rng = np.random.default_rng(17)
    for _ in range(2000):
        u = random_unit(rng)
        v = random_unit(rng)
        a = pure.rotation_between(*u, *v, 1e-6, 1e-7)
        b = compiled.rotation_between(*u, *v, 1e-6, 1e-7)
        assert a == pytest.approx(b, abs=1e-12)


@needs_compiled
def test_euler_backends_agree():
    pure, compiled = BACKENDS["pure"], BACKENDS["compiled"]
    rng = np.random.default_rng(19)
    for _ in range(2000):
        rotvec = rng.normal(size=3) * rng.uniform(0.0, math.pi)
        a = pure.rotvec_to_ypr_deg(*rotvec, 1e-7, 0.1)
        b = compiled.rotvec_to_ypr_deg(*rotvec, 1e-7, 0.1)
        assert a == pytest.approx(b, abs=1e-9)


@needs_compiled
def test_rbf_predict_backends_agree():
    pure, compiled = BACKENDS["pure"], BACKENDS["compiled"]
    rng = np.random.default_rng(23)
    xs = np.sort(rng.uniform(-120, 120, 15))
    beta = rng.normal(size=15)
    for x in rng.uniform(-120, 120, 100):
        a = pure.rbf_predict(float(x), xs, beta, 1.0 / 1800.0, 0.5)
        b = compiled.rbf_predict(float(x), xs, beta, 1.0 / 1800.0, 0.5)
        assert a == pytest.approx(b, rel=1e-12)


@needs_compiled
def test_smo_sweep_backends_agree():
    pure, compiled = BACKENDS["pure"], BACKENDS["compiled"]
    rng = np.random.default_rng(29)
    for _ in range(10):
        n = int(rng.integers(3, 12))
        xs = np.sort(rng.uniform(-100, 100, n))
        ys = rng.uniform(-40, 30, n)
        diff = xs[:, None] - xs[None, :]
        kmat = np.ascontiguousarray(np.exp(-(diff ** 2) / 1800.0))
        state = {}
        for name, impl in (("pure", pure), ("compiled", compiled)):
            beta = np.zeros(n)
            grad = ys.copy()
            steps = []
            for _ in range(50):
                max_step, updates = impl.smo_sweep(kmat, ys, beta, grad, 100.0, 0.5)
                steps.append(max_step)
                if max_step < 1e-10:
                    break
            state[name] = (beta, grad, steps)
        assert state["pure"][0] == pytest.approx(state["compiled"][0], abs=1e-9)
        assert state["pure"][1] == pytest.approx(state["compiled"][1], abs=1e-9)


def test_active_backend_is_reported():
    import headmimic
    assert headmimic.KERNEL_BACKEND in ("pure", "compiled")


def test_pure_fallback_forced_by_env():
    import os
    import subprocess
    import sys
    from pathlib import Path

    repo = Path(__file__).resolve().parent.parent
    env = dict(os.environ, HEADMIMIC_PURE="1",
               PYTHONPATH=str(repo / "src"))
    out = subprocess.run(
        [sys.executable, "-c", "import headmimic; print(headmimic.KERNEL_BACKEND)"],
        capture_output=True, text=True, check=True, env=env,
    )
    assert out.stdout.strip() == "pure"
