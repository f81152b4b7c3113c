"""Dense tensors with reverse-mode automatic differentiation.

A deliberately small tape: each Tensor produced by an op keeps its parents
and a closure that maps the output gradient to parent-gradient
contributions.  ``backward`` runs a reverse topological sweep, accumulates
additively, then frees the graph; a second call without a fresh forward
pass is an error.

Every op checks its output for NaN/Inf and aborts instead of propagating.
"""
from __future__ import annotations

import numpy as np


class ShapeError(ValueError):
    pass


class NonFiniteError(FloatingPointError):
    pass


def _check_finite(arr: np.ndarray, op: str) -> None:
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError(f"non-finite values produced by {op}")


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum a gradient back down to the shape it was broadcast from."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, extent in enumerate(shape):
        if extent == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward", "_freed")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        arr = np.asarray(data, dtype=dtype)
        if arr.dtype not in (np.float32, np.float64):
            arr = arr.astype(np.float64)
        _check_finite(arr, "tensor creation")
        self.data = arr
        self.grad = None
        self.requires_grad = requires_grad
        self._parents = ()
        self._backward = None
        self._freed = False

    # -- bookkeeping --------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self):
        return f"Tensor(shape={self.shape}, dtype={self.dtype.name}, grad={self.requires_grad})"

    def backward(self) -> None:
        if self.data.size != 1:
            raise ShapeError(f"backward requires a scalar loss, got shape {self.shape}")
        if self._freed:
            raise RuntimeError("backward already called on this graph; run forward again")

        topo: list[Tensor] = []
        visited = set()
        stack = [(self, False)]
        while stack:
            node, processed = stack.pop()
            if processed:
                topo.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for p in node._parents:
                if id(p) not in visited:
                    stack.append((p, False))

        self.grad = np.ones_like(self.data)
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)
            node._backward = None
            node._parents = ()
            node._freed = True

    # -- operator sugar -----------------------------------------------------

    def __add__(self, other):
        return add(self, _as_tensor(other, self.dtype))

    def __radd__(self, other):
        return add(_as_tensor(other, self.dtype), self)

    def __sub__(self, other):
        return sub(self, _as_tensor(other, self.dtype))

    def __rsub__(self, other):
        return sub(_as_tensor(other, self.dtype), self)

    def __mul__(self, other):
        return mul(self, _as_tensor(other, self.dtype))

    def __rmul__(self, other):
        return mul(_as_tensor(other, self.dtype), self)

    def __neg__(self):
        return mul(self, _as_tensor(-1.0, self.dtype))

    def __matmul__(self, other):
        return matmul(self, other)

    def __getitem__(self, key):
        return take(self, key)

    def reshape(self, *shape):
        return reshape(self, shape)

    def sum(self, axis=None, keepdims=False):
        return reduce_sum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        return reduce_mean(self, axis=axis, keepdims=keepdims)


def _as_tensor(x, dtype) -> Tensor:
    if isinstance(x, Tensor):
        return x
    return Tensor(np.asarray(x, dtype=dtype))


def _make(data: np.ndarray, parents, backward_fn, op: str) -> Tensor:
    _check_finite(data, op)
    out = Tensor.__new__(Tensor)
    out.data = data
    out.grad = None
    out.requires_grad = any(p.requires_grad for p in parents)
    out._freed = False
    if out.requires_grad:
        out._parents = tuple(parents)
        out._backward = backward_fn
    else:
        out._parents = ()
        out._backward = None
    return out


def _accum(t: Tensor, grad: np.ndarray) -> None:
    if not t.requires_grad:
        return
    if t.grad is None:
        t.grad = grad.astype(t.dtype, copy=True)
    else:
        t.grad = t.grad + grad.astype(t.dtype, copy=False)


# -- elementwise and linear-algebra ops -------------------------------------

def add(a: Tensor, b: Tensor) -> Tensor:
    data = a.data + b.data

    def bw(g):
        _accum(a, _unbroadcast(g, a.shape))
        _accum(b, _unbroadcast(g, b.shape))

    return _make(data, (a, b), bw, "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    data = a.data - b.data

    def bw(g):
        _accum(a, _unbroadcast(g, a.shape))
        _accum(b, -_unbroadcast(g, b.shape))

    return _make(data, (a, b), bw, "sub")


def mul(a: Tensor, b: Tensor) -> Tensor:
    data = a.data * b.data

    def bw(g):
        _accum(a, _unbroadcast(g * b.data, a.shape))
        _accum(b, _unbroadcast(g * a.data, b.shape))

    return _make(data, (a, b), bw, "mul")


def matmul(a: Tensor, b: Tensor) -> Tensor:
    if a.data.ndim != 2 or b.data.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    data = a.data @ b.data

    def bw(g):
        _accum(a, g @ b.data.T)
        _accum(b, a.data.T @ g)

    return _make(data, (a, b), bw, "matmul")


def relu(x: Tensor) -> Tensor:
    mask = x.data > 0  # subgradient at 0 is 0
    data = np.where(mask, x.data, 0.0).astype(x.dtype)

    def bw(g):
        _accum(x, g * mask)

    return _make(data, (x,), bw, "relu")


def _stable_sigmoid(x: np.ndarray) -> np.ndarray:
    # split by sign so exp never overflows
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def sigmoid(x: Tensor) -> Tensor:
    data = _stable_sigmoid(x.data)

    def bw(g):
        _accum(x, g * data * (1.0 - data))

    return _make(data, (x,), bw, "sigmoid")


def tanh(x: Tensor) -> Tensor:
    data = np.tanh(x.data)

    def bw(g):
        _accum(x, g * (1.0 - data * data))

    return _make(data, (x,), bw, "tanh")


def reduce_sum(x: Tensor, axis=None, keepdims=False) -> Tensor:
    data = x.data.sum(axis=axis, keepdims=keepdims)

    def bw(g):
        if axis is None:
            grad = np.full(x.shape, g if np.ndim(g) == 0 else g.reshape(()), dtype=x.dtype)
        else:
            g2 = g if keepdims else np.expand_dims(g, axis)
            grad = np.broadcast_to(g2, x.shape).astype(x.dtype)
        _accum(x, grad)

    return _make(np.asarray(data), (x,), bw, "sum")


def reduce_mean(x: Tensor, axis=None, keepdims=False) -> Tensor:
    if axis is None:
        count = x.data.size
    else:
        axes = (axis,) if isinstance(axis, int) else tuple(axis)
        count = int(np.prod([x.shape[a] for a in axes]))
    s = reduce_sum(x, axis=axis, keepdims=keepdims)
    return mul(s, _as_tensor(1.0 / count, x.dtype))


def reshape(x: Tensor, shape) -> Tensor:
    data = x.data.reshape(shape)

    def bw(g):
        _accum(x, g.reshape(x.shape))

    return _make(data, (x,), bw, "reshape")


def flatten(x: Tensor, start_axis: int = 1) -> Tensor:
    lead = x.shape[:start_axis]
    return reshape(x, lead + (-1,))


def transpose(x: Tensor, axes) -> Tensor:
    data = x.data.transpose(axes)
    inv = np.argsort(axes)

    def bw(g):
        _accum(x, g.transpose(inv))

    return _make(data, (x,), bw, "transpose")


def take(x: Tensor, key) -> Tensor:
    data = x.data[key]

    def bw(g):
        grad = np.zeros_like(x.data)
        np.add.at(grad, key, g)
        _accum(x, grad)

    return _make(np.asarray(data), (x,), bw, "take")


def concat(tensors, axis: int = 0) -> Tensor:
    tensors = list(tensors)
    data = np.concatenate([t.data for t in tensors], axis=axis)
    sizes = [t.shape[axis] for t in tensors]
    offsets = np.cumsum([0] + sizes)

    def bw(g):
        for t, lo, hi in zip(tensors, offsets[:-1], offsets[1:]):
            sl = [slice(None)] * g.ndim
            sl[axis] = slice(lo, hi)
            _accum(t, g[tuple(sl)])

    return _make(data, tuple(tensors), bw, "concat")


def split(x: Tensor, sizes, axis: int = 0):
    """Inverse of concat; returns views as separate graph nodes."""
    offsets = np.cumsum([0] + list(sizes))
    parts = []
    for lo, hi in zip(offsets[:-1], offsets[1:]):
        sl = [slice(None)] * x.data.ndim
        sl[axis] = slice(int(lo), int(hi))
        parts.append(take(x, tuple(sl)))
    return parts


# -- neural-network ops -----------------------------------------------------

def linear(x: Tensor, weight: Tensor, bias: Tensor | None = None) -> Tensor:
    out = matmul(x, weight)
    if bias is not None:
        out = add(out, bias)
    return out


def dropout(x: Tensor, p: float, train: bool, rng: np.random.Generator | None = None) -> Tensor:
    if not (0.0 <= p < 1.0):
        raise ValueError(f"dropout p must be in [0, 1), got {p}")
    if not train or p == 0.0:
        return x
    if rng is None:
        raise ValueError("dropout in train mode needs an rng")
    mask = (rng.random(x.shape) >= p).astype(x.dtype) / (1.0 - p)
    data = x.data * mask

    def bw(g):
        _accum(x, g * mask)

    return _make(data, (x,), bw, "dropout")


def mse(pred: Tensor, target) -> Tensor:
    t = target.data if isinstance(target, Tensor) else np.asarray(target, dtype=pred.dtype)
    if t.shape != pred.shape:
        raise ShapeError(f"mse shape mismatch: pred {pred.shape} vs target {t.shape}")
    diff = pred.data - t
    data = np.asarray((diff * diff).mean(), dtype=pred.dtype)

    def bw(g):
        _accum(pred, (2.0 / diff.size) * diff * g)

    return _make(data, (pred,), bw, "mse")


def conv2d(x: Tensor, kernel: Tensor, stride: int = 1, padding: int = 0,
           bias: Tensor | None = None) -> Tensor:
    """x: (B, C, H, W); kernel: (F, C, kh, kw); zero padding."""
    B, C, H, W = x.shape
    F, Ck, kh, kw = kernel.shape
    if Ck != C:
        raise ShapeError(f"conv2d channel mismatch: input {x.shape} vs kernel {kernel.shape}")
    Ho = (H + 2 * padding - kh) // stride + 1
    Wo = (W + 2 * padding - kw) // stride + 1
    if Ho <= 0 or Wo <= 0:
        raise ShapeError(f"conv2d output would be empty for input {x.shape}, kernel {kernel.shape}")

    xp = np.pad(x.data, ((0, 0), (0, 0), (padding, padding), (padding, padding)))
    windows = np.lib.stride_tricks.sliding_window_view(xp, (kh, kw), axis=(2, 3))
    windows = windows[:, :, ::stride, ::stride]  # (B, C, Ho, Wo, kh, kw)
    cols = windows.transpose(0, 2, 3, 1, 4, 5).reshape(B * Ho * Wo, C * kh * kw)
    kmat = kernel.data.reshape(F, C * kh * kw)
    out = (cols @ kmat.T).reshape(B, Ho, Wo, F).transpose(0, 3, 1, 2)
    if bias is not None:
        out = out + bias.data.reshape(1, F, 1, 1)

    def bw(g):
        gcols = g.transpose(0, 2, 3, 1).reshape(B * Ho * Wo, F)
        _accum(kernel, (gcols.T @ cols).reshape(kernel.shape))
        if bias is not None:
            _accum(bias, g.sum(axis=(0, 2, 3)).reshape(bias.shape))
        if x.requires_grad:
            dcols = (gcols @ kmat).reshape(B, Ho, Wo, C, kh, kw)
            dxp = np.zeros_like(xp)
            for i in range(kh):
                for j in range(kw):
                    dxp[:, :, i:i + stride * Ho:stride, j:j + stride * Wo:stride] += \
                        dcols[:, :, :, :, i, j].transpose(0, 3, 1, 2)
            if padding:
                dxp = dxp[:, :, padding:-padding, padding:-padding]
            _accum(x, dxp)

    parents = (x, kernel) if bias is None else (x, kernel, bias)
    return _make(out, parents, bw, "conv2d")


def batchnorm2d(x: Tensor, gamma: Tensor, beta: Tensor, running_mean: np.ndarray,
                running_var: np.ndarray, train: bool, momentum: float = 0.1,
                eps: float = 1e-5) -> Tensor:
    """Per-channel normalization over (B, H, W); running stats mutated in train mode."""
    B, C, H, W = x.shape
    if train:
        mean = x.data.mean(axis=(0, 2, 3))
        var = x.data.var(axis=(0, 2, 3))
        running_mean *= 1.0 - momentum
        running_mean += momentum * mean
        running_var *= 1.0 - momentum
        running_var += momentum * var
    else:
        mean = running_mean
        var = running_var
    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (x.data - mean.reshape(1, C, 1, 1)) * inv_std.reshape(1, C, 1, 1)
    out = gamma.data.reshape(1, C, 1, 1) * xhat + beta.data.reshape(1, C, 1, 1)

    def bw(g):
        _accum(gamma, (g * xhat).sum(axis=(0, 2, 3)).reshape(gamma.shape))
        _accum(beta, g.sum(axis=(0, 2, 3)).reshape(beta.shape))
        if x.requires_grad:
            gm = gamma.data.reshape(1, C, 1, 1)
            if train:
                n = B * H * W
                gxhat = g * gm
                dx = (inv_std.reshape(1, C, 1, 1) / n) * (
                    n * gxhat
                    - gxhat.sum(axis=(0, 2, 3), keepdims=True)
                    - xhat * (gxhat * xhat).sum(axis=(0, 2, 3), keepdims=True)
                )
            else:
                dx = g * gm * inv_std.reshape(1, C, 1, 1)
            _accum(x, dx)

    return _make(out.astype(x.dtype), (x, gamma, beta), bw, "batchnorm2d")


def maxpool2d(x: Tensor, size: int) -> Tensor:
    """Non-overlapping max pooling; trailing rows/cols beyond a multiple are dropped."""
    B, C, H, W = x.shape
    Ho, Wo = H // size, W // size
    if Ho == 0 or Wo == 0:
        raise ShapeError(f"maxpool2d window {size} larger than input {x.shape}")
    xv = x.data[:, :, :Ho * size, :Wo * size]
    blocks = xv.reshape(B, C, Ho, size, Wo, size).transpose(0, 1, 2, 4, 3, 5)
    flat = blocks.reshape(B, C, Ho, Wo, size * size)
    arg = flat.argmax(axis=-1)
    out = np.take_along_axis(flat, arg[..., None], axis=-1)[..., 0]

    def bw(g):
        dflat = np.zeros_like(flat)
        np.put_along_axis(dflat, arg[..., None], g[..., None], axis=-1)
        dx = np.zeros_like(x.data)
        dblocks = dflat.reshape(B, C, Ho, Wo, size, size).transpose(0, 1, 2, 4, 3, 5)
        dx[:, :, :Ho * size, :Wo * size] = dblocks.reshape(B, C, Ho * size, Wo * size)
        _accum(x, dx)

    return _make(out, (x,), bw, "maxpool2d")


def avgpool_global(x: Tensor) -> Tensor:
    """(B, C, H, W) -> (B, C) mean over the spatial extent."""
    return reduce_mean(x, axis=(2, 3))


def gru_layer(x_seq: Tensor, h0: Tensor, params: dict) -> Tensor:
    """Fused GRU over (T, B, D) input; returns the full hidden sequence (T, B, H).

    Gates: z = sigm(x Wz + h Uz + bz), r = sigm(x Wr + h Ur + br),
    candidate = tanh(x Wh + (r * h) Uh + bh),
    h' = (1 - z) * h + z * candidate.
    Backward through time is exact and handled inside this single tape node.
    """
    Wz, Wr, Wh = params["Wz"], params["Wr"], params["Wh"]
    Uz, Ur, Uh = params["Uz"], params["Ur"], params["Uh"]
    bz, br, bh = params["bz"], params["br"], params["bh"]
    if x_seq.data.ndim != 3:
        raise ShapeError(f"gru expects (T, B, D) input, got {x_seq.shape}")
    T, B, D = x_seq.shape
    if T < 1:
        raise ShapeError("gru needs at least one timestep")
    H = Wz.shape[1]
    if Wz.shape != (D, H) or Uz.shape != (H, H) or h0.shape != (B, H):
        raise ShapeError(
            f"gru weight shapes inconsistent: x {x_seq.shape}, Wz {Wz.shape}, "
            f"Uz {Uz.shape}, h0 {h0.shape}"
        )

    xs = x_seq.data
    hs = np.empty((T, B, H), dtype=xs.dtype)
    zs = np.empty_like(hs)
    rs = np.empty_like(hs)
    cs = np.empty_like(hs)
    h = h0.data
    for t in range(T):
        xt = xs[t]
        z = _stable_sigmoid(xt @ Wz.data + h @ Uz.data + bz.data)
        r = _stable_sigmoid(xt @ Wr.data + h @ Ur.data + br.data)
        c = np.tanh(xt @ Wh.data + (r * h) @ Uh.data + bh.data)
        h = (1.0 - z) * h + z * c
        zs[t], rs[t], cs[t], hs[t] = z, r, c, h

    def bw(g):
        # accumulate in float64: the T-step Jacobian product can exceed the
        # float32 range long before the (clipped) final gradients do
        acc = np.float64
        Uzd, Urd, Uhd = Uz.data.astype(acc), Ur.data.astype(acc), Uh.data.astype(acc)
        Wzd, Wrd, Whd = Wz.data.astype(acc), Wr.data.astype(acc), Wh.data.astype(acc)
        g = g.astype(acc)
        dx = np.zeros(xs.shape, dtype=acc) if x_seq.requires_grad else None
        dWz = np.zeros(Wz.shape, dtype=acc)
        dWr = np.zeros(Wr.shape, dtype=acc)
        dWh = np.zeros(Wh.shape, dtype=acc)
        dUz = np.zeros(Uz.shape, dtype=acc)
        dUr = np.zeros(Ur.shape, dtype=acc)
        dUh = np.zeros(Uh.shape, dtype=acc)
        dbz = np.zeros(bz.shape, dtype=acc)
        dbr = np.zeros(br.shape, dtype=acc)
        dbh = np.zeros(bh.shape, dtype=acc)
        carry = np.zeros((B, H), dtype=acc)
        for t in range(T - 1, -1, -1):
            h_prev = hs[t - 1] if t > 0 else h0.data
            z, r, c = zs[t], rs[t], cs[t]
            dh = g[t] + carry
            dz = dh * (c - h_prev)
            dc = dh * z
            dh_prev = dh * (1.0 - z)
            da_c = dc * (1.0 - c * c)
            rh = r * h_prev
            dWh += xs[t].T @ da_c
            dUh += rh.T @ da_c
            dbh += da_c.sum(axis=0)
            drh = da_c @ Uhd.T
            dr = drh * h_prev
            dh_prev = dh_prev + drh * r
            da_z = dz * z * (1.0 - z)
            da_r = dr * r * (1.0 - r)
            dWz += xs[t].T @ da_z
            dWr += xs[t].T @ da_r
            dUz += h_prev.T @ da_z
            dUr += h_prev.T @ da_r
            dbz += da_z.sum(axis=0)
            dbr += da_r.sum(axis=0)
            dh_prev = dh_prev + da_z @ Uzd.T + da_r @ Urd.T
            if dx is not None:
                dx[t] = da_z @ Wzd.T + da_r @ Wrd.T + da_c @ Whd.T
            carry = dh_prev
        def cast(arr, dtype):
            # saturate instead of overflowing to inf so norm clipping
            # downstream still sees finite values
            if dtype == np.float32:
                arr = np.clip(arr, -3e38, 3e38)
            return arr.astype(dtype)

        if dx is not None:
            _accum(x_seq, cast(dx, xs.dtype))
        _accum(h0, cast(carry, h0.data.dtype))
        for p, dp in ((Wz, dWz), (Wr, dWr), (Wh, dWh), (Uz, dUz), (Ur, dUr),
                      (Uh, dUh), (bz, dbz), (br, dbr), (bh, dbh)):
            _accum(p, cast(dp, p.data.dtype))

    parents = (x_seq, h0, Wz, Wr, Wh, Uz, Ur, Uh, bz, br, bh)
    return _make(hs, parents, bw, "gru")
