"""Central finite-difference gradient oracle shared by the autodiff tests."""
import numpy as np

from vibtact.autodiff import Tensor


def finite_diff_grad(f, x: np.ndarray, eps: float = 1e-5) -> np.ndarray:
    """Gradient of scalar f at x by central differences, one coordinate at a time."""
    g = np.zeros_like(x, dtype=np.float64)
    flat = x.reshape(-1)
    gflat = g.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + eps
        hi = f(x)
        flat[i] = orig - eps
        lo = f(x)
        flat[i] = orig
        gflat[i] = (hi - lo) / (2 * eps)
    return g


def check_gradients(build_loss, arrays: dict, eps: float = 1e-5, tol: float = 1e-4):
    """Compare reverse-mode gradients of build_loss(tensors) against finite differences.

    ``arrays`` maps names to float64 ndarrays; build_loss receives a dict of
    Tensors (requires_grad=True) and must return a scalar Tensor.
    Returns the max relative error across all inputs.
    """
    tensors = {k: Tensor(v.copy(), requires_grad=True, dtype=np.float64)
               for k, v in arrays.items()}
    loss = build_loss(tensors)
    loss.backward()

    worst = 0.0
    for name, arr in arrays.items():
        def f(x, _name=name):
            probe = {k: Tensor(x if k == _name else v.copy(), dtype=np.float64)
                     for k, v in arrays.items()}
            return build_loss(probe).item()

        numeric = finite_diff_grad(f, arr.copy(), eps)
        analytic = tensors[name].grad
        assert analytic is not None, f"no gradient reached input {name}"
        denom = max(np.max(np.abs(numeric)), np.max(np.abs(analytic)), 1e-8)
        rel = np.max(np.abs(analytic - numeric)) / denom
        assert rel < tol, f"gradient mismatch on {name}: rel err {rel:.3e}"
        worst = max(worst, rel)
    return worst
