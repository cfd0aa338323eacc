"""Central finite-difference gradient oracle (float64 shadow computation)."""

import numpy as np

from xwgrid.nn import Tape


def finite_diff_check(build_loss, tensors, eps=1e-4, rtol=1e-3, max_coords=24, rng=None):
    """Compare reverse-mode gradients of build_loss() against central differences.

    build_loss must re-run the forward pass from the current tensor values and
    return a scalar Tensor.  All checked tensors should be float64.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    for t in tensors:
        t.grad = None
    with Tape() as tape:
        loss = build_loss()
    tape.backward(loss)
    analytic = [t.grad.copy() if t.grad is not None else np.zeros_like(t.data) for t in tensors]

    worst = 0.0
    for t, grad in zip(tensors, analytic):
        flat = t.data.reshape(-1)
        n = flat.size
        coords = np.arange(n) if n <= max_coords else rng.choice(n, size=max_coords, replace=False)
        for idx in coords:
            orig = flat[idx]
            flat[idx] = orig + eps
            f_plus = float(build_loss().data)
            flat[idx] = orig - eps
            f_minus = float(build_loss().data)
            flat[idx] = orig
            numeric = (f_plus - f_minus) / (2 * eps)
            ana = float(grad.reshape(-1)[idx])
            err = abs(ana - numeric) / max(abs(ana) + abs(numeric), 1e-4)
            worst = max(worst, err)
            assert err < rtol, (
                f"gradient mismatch at {t.data.shape} coord {idx}: "
                f"analytic {ana:.8g} vs numeric {numeric:.8g} (rel {err:.2e})"
            )
    return worst
